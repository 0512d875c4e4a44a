"""Bridge and radiator benchmarks with their preset parameters.

The presets (regularization tau, volume limit GvMax, tolerance epsOpt and,
for the radiator, the iteration at which the accelerated scheme falls back
to plain reaction-diffusion) are applied by the configuration layer, the
same path the ``lsto`` command uses.

    python3 demos/04_bridge_and_radiator.py [resMesh] [max_iter] [outdir]
"""
import sys
from pathlib import Path

from lsto import parse_config
from lsto.cli import execute

res = sys.argv[1] if len(sys.argv) > 1 else "1"
max_iter = sys.argv[2] if len(sys.argv) > 2 else "300"
out = Path(sys.argv[3] if len(sys.argv) > 3 else "demo_out")

for model, init in (("bridge", "perforated"), ("radiator", "perforated"), ("radiator", "upper")):
    cfg = parse_config(None, [f"model={model}", f"init={init}", f"resMesh={res}",
                              f"MaxLoop={max_iter}", f"out={out / f'{model}_{init}'}"])
    print(f"{model} ({init}): tau={cfg.tau:g} GvMax={cfg.GvMax:g} epsOpt={cfg.epsOpt:g} "
          f"SwitchBackIt={cfg.SwitchBackIt:g}")
    result = execute(cfg, png_resolution=300)
    last = result.history[-1]
    print(f"  converged={result.converged} iterations={result.iterations} "
          f"F={last.F:.4e} vol={last.vol_frac:.4f} -> {cfg.out}/layout.png")
