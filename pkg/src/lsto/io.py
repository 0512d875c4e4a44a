"""Result export: CSV iteration logs, legacy ASCII VTK and PNG rasters."""
import csv
import struct
import zlib
from pathlib import Path

import numpy as np

from .levelset import chi_v
from .optimizer import FIELDS, IterationRecord

_INT_FIELDS = {"iter", "cg_iters"}


def _fmt(value):
    # repr gives the shortest string that round-trips exactly
    return repr(float(value)) if not isinstance(value, (int, np.integer)) else str(int(value))


def write_iteration_log(history, path):
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIELDS)
        for rec in history:
            w.writerow([_fmt(getattr(rec, name)) for name in FIELDS])
    return path


def read_iteration_log(path):
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != FIELDS:
            raise ValueError(f"unexpected header {reader.fieldnames}")
        return [
            IterationRecord(**{k: int(v) if k in _INT_FIELDS else float(v) for k, v in row.items()})
            for row in reader
        ]


def _numbers(fh, rows):
    for row in rows:
        fh.write(" ".join("%.17g" % v for v in row))
        fh.write("\n")


def write_vtk_snapshot(mesh, phi, chi, u, path, title="level set"):
    """Legacy ASCII VTK unstructured grid with phi, chi and displacement point data."""
    path = Path(path)
    n, t = mesh.n_nodes, mesh.n_triangles
    pts = np.column_stack([mesh.nodes, np.zeros(n)])
    u = np.asarray(u, dtype=float).reshape(n, 2)
    with path.open("w") as fh:
        fh.write("# vtk DataFile Version 3.0\n")
        fh.write(f"{title}\nASCII\nDATASET UNSTRUCTURED_GRID\n")
        fh.write(f"POINTS {n} double\n")
        _numbers(fh, pts)
        fh.write(f"CELLS {t} {4 * t}\n")
        for tri in mesh.triangles:
            fh.write("3 %d %d %d\n" % tuple(tri))
        fh.write(f"CELL_TYPES {t}\n")
        fh.write("5\n" * t)
        fh.write(f"POINT_DATA {n}\n")
        for name, values in (("phi", phi), ("chi", chi)):
            fh.write(f"SCALARS {name} double 1\nLOOKUP_TABLE default\n")
            _numbers(fh, np.asarray(values, dtype=float).reshape(-1, 1))
        fh.write("VECTORS displacement double\n")
        _numbers(fh, np.column_stack([u, np.zeros(n)]))
    return path


def write_mesh_vtk(mesh, path):
    """Mesh-only dump: points, triangles and the region id as cell data."""
    path = Path(path)
    with path.open("w") as fh:
        fh.write("# vtk DataFile Version 3.0\nmesh\nASCII\nDATASET UNSTRUCTURED_GRID\n")
        fh.write(f"POINTS {mesh.n_nodes} double\n")
        _numbers(fh, np.column_stack([mesh.nodes, np.zeros(mesh.n_nodes)]))
        t = mesh.n_triangles
        fh.write(f"CELLS {t} {4 * t}\n")
        for tri in mesh.triangles:
            fh.write("3 %d %d %d\n" % tuple(tri))
        fh.write(f"CELL_TYPES {t}\n" + "5\n" * t)
        fh.write(f"CELL_DATA {t}\nSCALARS region int 1\nLOOKUP_TABLE default\n")
        fh.write("".join(f"{r}\n" for r in mesh.regions))
    return path


def sample_p1(mesh, values, points):
    """Evaluate the P1 interpolant of nodal ``values`` at ``points`` (nan outside)."""
    points = np.asarray(points, dtype=float)
    out = np.full(points.shape[0], np.nan)
    order = np.lexsort((points[:, 0], points[:, 1]))
    px, py = points[order, 0], points[order, 1]
    for k, tri in enumerate(mesh.triangles):
        (x0, y0), (x1, y1), (x2, y2) = mesh.nodes[tri]
        lo = np.searchsorted(py, min(y0, y1, y2) - 1e-12, "left")
        hi = np.searchsorted(py, max(y0, y1, y2) + 1e-12, "right")
        if lo == hi:
            continue
        sx, sy = px[lo:hi], py[lo:hi]
        det = (y1 - y2) * (x0 - x2) + (x2 - x1) * (y0 - y2)
        l0 = ((y1 - y2) * (sx - x2) + (x2 - x1) * (sy - y2)) / det
        l1 = ((y2 - y0) * (sx - x2) + (x0 - x2) * (sy - y2)) / det
        l2 = 1.0 - l0 - l1
        inside = (l0 >= -1e-12) & (l1 >= -1e-12) & (l2 >= -1e-12)
        if inside.any():
            idx = order[lo:hi][inside]
            v = values[tri]
            out[idx] = l0[inside] * v[0] + l1[inside] * v[1] + l2[inside] * v[2]
    return out


def rasterize_layout(mesh, phi, resolution):
    """Grayscale image of ``chi_v(phi)``: 0 = material (black), 255 = void.

    ``resolution`` is the pixel count along the longer side of the bounding box.
    """
    (x0, y0), (x1, y1) = mesh.bounding_box()
    w, h = x1 - x0, y1 - y0
    scale = resolution / max(w, h)
    nx, ny = max(1, int(round(w * scale))), max(1, int(round(h * scale)))
    xs = x0 + (np.arange(nx) + 0.5) * (w / nx)
    ys = y1 - (np.arange(ny) + 0.5) * (h / ny)  # top row first
    X, Y = np.meshgrid(xs, ys)
    vals = sample_p1(mesh, np.asarray(phi, dtype=float), np.column_stack([X.ravel(), Y.ravel()]))
    chi = np.where(np.isnan(vals), 0.0, chi_v(np.nan_to_num(vals, nan=-1.0)))
    return np.rint(255.0 * (1.0 - chi)).astype(np.uint8).reshape(ny, nx)


def encode_png(image):
    """8-bit grayscale PNG bytes for a 2-D uint8 array."""
    image = np.ascontiguousarray(image, dtype=np.uint8)
    h, w = image.shape
    raw = b"".join(b"\x00" + image[r].tobytes() for r in range(h))

    def chunk(tag, data):
        return (struct.pack(">I", len(data)) + tag + data
                + struct.pack(">I", zlib.crc32(tag + data) & 0xFFFFFFFF))

    header = struct.pack(">IIBBBBB", w, h, 8, 0, 0, 0, 0)
    return (b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", header)
            + chunk(b"IDAT", zlib.compress(raw, 9)) + chunk(b"IEND", b""))


def write_png_layout(mesh, phi, resolution, path):
    path = Path(path)
    path.write_bytes(encode_png(rasterize_layout(mesh, phi, resolution)))
    return path


class SnapshotWriter:
    """Optimizer callback writing VTK files every ``stride`` iterations plus ``final.vtk``."""

    def __init__(self, mesh, directory, stride):
        self.mesh = mesh
        self.directory = Path(directory)
        self.stride = int(stride)
        self.written = []
        self._last = None

    def _write(self, snap, name):
        chi = chi_v(snap.phi)
        path = write_vtk_snapshot(self.mesh, snap.phi, chi, snap.u, self.directory / name)
        self.written.append(path)

    def __call__(self, record, snap):
        self._last = snap
        if self.stride > 0 and snap.iter % self.stride == 0:
            self._write(snap, f"snapshot_{snap.iter:05d}.vtk")

    def finalize(self):
        if self._last is not None:
            self._write(self._last, "final.vtk")
        return self.written
