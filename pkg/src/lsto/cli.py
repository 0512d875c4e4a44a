"""Command-line entry point: ``lsto run`` and ``lsto compare``."""
import argparse
import json
import logging
import sys
from pathlib import Path

from .config import parse_config
from .exceptions import LstoError
from .io import SnapshotWriter, write_iteration_log, write_png_layout
from .optimizer import run


def _add_common(p):
    p.add_argument("--model", choices=("cantilever", "bridge", "radiator"))
    p.add_argument("--init", choices=("perforated", "full", "upper"))
    p.add_argument("--config", type=Path, help="key = value file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--res", type=int, dest="resMesh", help="mesh resolution multiplier")
    p.add_argument("--max-iter", type=int, dest="MaxLoop")
    p.add_argument("--snapshot-stride", type=int, dest="snapshot_stride")
    p.add_argument("--switch-back-it", dest="SwitchBackIt")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override any configuration key (repeatable)")
    p.add_argument("--png-resolution", type=int, default=400)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="lsto", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one optimization")
    p_run.add_argument("--method", choices=("rd", "nlhp"))
    _add_common(p_run)
    p_cmp = sub.add_parser("compare", help="run rd and nlhp on the same configuration")
    _add_common(p_cmp)
    return parser


def _overrides(args, skip=()):
    items = list(args.set)
    for key in ("model", "init", "out", "resMesh", "MaxLoop", "snapshot_stride",
                "SwitchBackIt", "method"):
        value = getattr(args, key, None)
        if value is not None and key not in skip:
            items.append(f"{key}={value}")
    return items


def execute(cfg, png_resolution=400):
    """Run one configuration and write its outputs; returns the :class:`OptResult`."""
    spec, mesh = cfg.build_model()
    params = cfg.opt_params()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    writer = SnapshotWriter(mesh, out, cfg.snapshot_stride) if cfg.snapshot_stride > 0 else None
    result = run(spec, mesh, params, cfg.init, cfg.upper_threshold, callback=writer)
    if writer is not None:
        writer.finalize()
    write_iteration_log(result.history, out / "history.csv")
    write_png_layout(mesh, result.state.ophi, png_resolution, out / "layout.png")
    last = result.history[-1]
    summary = {
        "model": cfg.model, "method": cfg.method, "init": cfg.init, "resMesh": cfg.resMesh,
        "n_triangles": mesh.n_triangles, "converged": result.converged,
        "iterations": result.iterations, "F": last.F, "vol_frac": last.vol_frac,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return result


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        if args.command == "run":
            cfg = parse_config(args.config, _overrides(args))
            result = execute(cfg, args.png_resolution)
            status = "converged" if result.converged else "NOT converged"
            print(f"{cfg.method}: {status} at iteration {result.iterations}, "
                  f"F = {result.history[-1].F:.6e}")
            return 0 if result.converged else 2
        base = parse_config(args.config, _overrides(args, skip=("method",)))
        counts = {}
        for method in ("rd", "nlhp"):
            cfg = parse_config(args.config, _overrides(args, skip=("method", "out"))
                               + [f"method={method}", f"out={Path(base.out) / method}"])
            result = execute(cfg, args.png_resolution)
            counts[method] = (result.converged, result.iterations, result.history[-1].F)
        for method, (ok, it, F) in counts.items():
            print(f"{method:5s} converged={ok} iterations={it} F={F:.6e}")
        if counts["rd"][0] and counts["nlhp"][0]:
            print(f"ratio nlhp/rd = {counts['nlhp'][1] / counts['rd'][1]:.3f}")
        return 0
    except LstoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
