"""Structured triangulations of rectangles and the fixed design domains.

Every rectangle is split into ``nx * ny`` quadrilateral cells, and each cell
is cut along its lower-left to upper-right diagonal. Rectangles are glued
together by :func:`merge_meshes`, which unifies coincident interface nodes
and drops the interface edges from the boundary list.

Boundary edges carry integer labels; a :class:`ModelSpec` says which labels
are clamped (``wall``), loaded (``traction``) and where the level set is
pinned to one (``phione``).
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from .exceptions import GeometryError, MergeMismatchError

MERGE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TriMesh:
    """Triangle mesh with labeled boundary edges.

    Attributes
    ----------
    nodes : (N, 2) float array
    triangles : (T, 3) int array, counter-clockwise
    regions : (T,) int array
    boundary_edges : (B, 2) int array
    edge_labels : (B,) int array
    """

    nodes: np.ndarray
    triangles: np.ndarray
    regions: np.ndarray
    boundary_edges: np.ndarray
    edge_labels: np.ndarray

    def __post_init__(self):
        for name in ("nodes", "triangles", "regions", "boundary_edges", "edge_labels"):
            arr = getattr(self, name)
            arr.setflags(write=False)

    @property
    def n_nodes(self):
        return self.nodes.shape[0]

    @property
    def n_triangles(self):
        return self.triangles.shape[0]

    @cached_property
    def areas(self):
        """Signed areas, positive for counter-clockwise triangles."""
        p = self.nodes[self.triangles]
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        a = 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
        a.setflags(write=False)
        return a

    @property
    def area(self):
        return float(self.areas.sum())

    @cached_property
    def edge_lengths(self):
        p = self.nodes[self.boundary_edges]
        return np.hypot(*(p[:, 1] - p[:, 0]).T)

    def max_edge_length(self):
        p = self.nodes[self.triangles]
        e = np.concatenate([p[:, 1] - p[:, 0], p[:, 2] - p[:, 1], p[:, 0] - p[:, 2]])
        return float(np.hypot(e[:, 0], e[:, 1]).max())

    def edges_with_labels(self, labels):
        """Indices into ``boundary_edges`` whose label is in ``labels``."""
        return np.flatnonzero(np.isin(self.edge_labels, list(labels)))

    def nodes_with_labels(self, labels):
        """Sorted unique node indices touching edges with the given labels."""
        return np.unique(self.boundary_edges[self.edges_with_labels(labels)])

    def boundary_nodes(self):
        return np.unique(self.boundary_edges)

    def bounding_box(self):
        return self.nodes.min(axis=0), self.nodes.max(axis=0)


def build_rect_grid(pos0, pos1, nx, ny, labels, region=1):
    """Triangulate the rectangle with corners ``pos0`` and ``pos1``.

    ``labels`` gives the (bottom, right, top, left) edge labels. Node ``(i, j)``
    has index ``j * (nx + 1) + i`` and sits at
    ``pos0 + (pos1 - pos0) * (i / nx, j / ny)``.
    """
    x0, y0 = map(float, pos0)
    x1, y1 = map(float, pos1)
    if not (x1 > x0 and y1 > y0):
        raise GeometryError(f"degenerate rectangle {pos0} -> {pos1}")
    nx, ny = int(nx), int(ny)
    if nx < 1 or ny < 1:
        raise GeometryError(f"need nx, ny >= 1, got ({nx}, {ny})")
    if len(labels) != 4:
        raise GeometryError("labels must be (bottom, right, top, left)")

    xs = x0 + (x1 - x0) * (np.arange(nx + 1) / nx)
    ys = y0 + (y1 - y0) * (np.arange(ny + 1) / ny)
    X, Y = np.meshgrid(xs, ys)
    nodes = np.column_stack([X.ravel(), Y.ravel()])

    idx = np.arange((nx + 1) * (ny + 1)).reshape(ny + 1, nx + 1)
    n0 = idx[:-1, :-1].ravel()
    n1 = idx[:-1, 1:].ravel()
    n2 = idx[1:, 1:].ravel()
    n3 = idx[1:, :-1].ravel()
    tri = np.empty((2 * nx * ny, 3), dtype=np.int64)
    tri[0::2] = np.column_stack([n0, n1, n2])
    tri[1::2] = np.column_stack([n0, n2, n3])

    bottom = np.column_stack([idx[0, :-1], idx[0, 1:]])
    right = np.column_stack([idx[:-1, -1], idx[1:, -1]])
    top = np.column_stack([idx[-1, 1:], idx[-1, :-1]])
    left = np.column_stack([idx[1:, 0], idx[:-1, 0]])
    edges = np.concatenate([bottom, right, top, left])
    elabels = np.repeat(np.asarray(labels, dtype=np.int64), [nx, ny, nx, ny])

    return TriMesh(
        nodes=nodes,
        triangles=tri,
        regions=np.full(tri.shape[0], region, dtype=np.int64),
        boundary_edges=edges,
        edge_labels=elabels,
    )


def _points_on_segments(points, seg_a, seg_b, tol):
    """Mask of points lying within ``tol`` of any segment."""
    if len(points) == 0 or len(seg_a) == 0:
        return np.zeros(len(points), dtype=bool)
    d = seg_b - seg_a
    L2 = np.einsum("ij,ij->i", d, d)
    rel = points[:, None, :] - seg_a[None, :, :]
    t = np.clip(np.einsum("pij,ij->pi", rel, d) / L2, 0.0, 1.0)
    closest = seg_a[None] + t[..., None] * d[None]
    dist = np.linalg.norm(points[:, None, :] - closest, axis=2)
    return (dist <= tol).any(axis=1)


def merge_meshes(a, b, tol=MERGE_TOL):
    """Glue mesh ``b`` onto mesh ``a`` along coincident nodes.

    Raises :class:`MergeMismatchError` if the two meshes overlap (share a
    triangle), share no nodes, or if a boundary node of one mesh lies on the
    boundary of the other without a matching node there (non-conforming
    interface).
    """
    tree = cKDTree(a.nodes)
    dist, nearest = tree.query(b.nodes, distance_upper_bound=tol)
    matched = np.isfinite(dist)
    if not matched.any():
        raise MergeMismatchError("meshes share no interface nodes")

    # non-conforming interface: hanging nodes on either side
    b_bnd = np.unique(b.boundary_edges)
    b_hang = b_bnd[~matched[b_bnd]]
    if _points_on_segments(
        b.nodes[b_hang], a.nodes[a.boundary_edges[:, 0]], a.nodes[a.boundary_edges[:, 1]], tol
    ).any():
        raise MergeMismatchError("mesh b has interface nodes without a partner in mesh a")
    a_hit = np.zeros(a.n_nodes, dtype=bool)
    a_hit[nearest[matched]] = True
    a_bnd = np.unique(a.boundary_edges)
    a_hang = a_bnd[~a_hit[a_bnd]]
    if _points_on_segments(
        a.nodes[a_hang], b.nodes[b.boundary_edges[:, 0]], b.nodes[b.boundary_edges[:, 1]], tol
    ).any():
        raise MergeMismatchError("mesh a has interface nodes without a partner in mesh b")

    n_new = int((~matched).sum())
    remap = np.empty(b.n_nodes, dtype=np.int64)
    remap[matched] = nearest[matched]
    remap[~matched] = a.n_nodes + np.arange(n_new)

    b_tri = remap[b.triangles]
    key_a = {tuple(t) for t in np.sort(a.triangles, axis=1)}
    if any(tuple(t) in key_a for t in np.sort(b_tri, axis=1)):
        raise MergeMismatchError("meshes overlap")

    b_edges = remap[b.boundary_edges]
    ka = np.sort(a.boundary_edges, axis=1)
    kb = np.sort(b_edges, axis=1)
    shared = {tuple(e) for e in ka} & {tuple(e) for e in kb}
    keep_a = np.array([tuple(e) not in shared for e in ka], dtype=bool)
    keep_b = np.array([tuple(e) not in shared for e in kb], dtype=bool)

    return TriMesh(
        nodes=np.concatenate([a.nodes, b.nodes[~matched]]),
        triangles=np.concatenate([a.triangles, b_tri]),
        regions=np.concatenate([a.regions, b.regions]),
        boundary_edges=np.concatenate([a.boundary_edges[keep_a], b_edges[keep_b]]),
        edge_labels=np.concatenate([a.edge_labels[keep_a], b.edge_labels[keep_b]]),
    )


@dataclass(frozen=True)
class RectSpec:
    """One structured sub-grid of the design domain."""

    pos0: tuple
    pos1: tuple
    nx: int
    ny: int
    labels: tuple


@dataclass(frozen=True)
class ModelSpec:
    """Geometry recipe plus boundary label sets of a design problem."""

    name: str
    rectangles: tuple
    wall_labels: frozenset
    traction_labels: frozenset
    phione_labels: frozenset
    depth: float = 0.0  # 3D only
    label_set: frozenset = field(default=frozenset())

    def __post_init__(self):
        if self.wall_labels & self.traction_labels:
            raise GeometryError("wall and traction labels must be disjoint")
        labels = frozenset(l for r in self.rectangles for l in r.labels)
        object.__setattr__(self, "label_set", labels)
        missing = (self.wall_labels | self.traction_labels | self.phione_labels) - labels
        if missing:
            raise GeometryError(f"undeclared boundary labels {sorted(missing)}")

    def build_mesh(self):
        mesh = None
        for r in self.rectangles:
            piece = build_rect_grid(r.pos0, r.pos1, r.nx, r.ny, r.labels)
            mesh = piece if mesh is None else merge_meshes(mesh, piece)
        return mesh


def _cells(width, per_unit):
    return max(1, int(np.rint(width * per_unit)))


def cantilever_model(resMesh=4):
    """Cantilever on [0, 2] x [0, 1], clamped at x = 0, loaded at mid-height of x = 2.

    Three horizontal strips with (nx, ny) = (50, 11), (50, 2), (50, 11) times
    ``resMesh``; labels 1-4, 5-8 and 9-12 in (bottom, right, top, left) order.
    """
    if resMesh < 1:
        raise GeometryError("resMesh must be >= 1")
    r = int(resMesh)
    rects = (
        RectSpec((0.0, 0.0), (2.0, 0.5 - 0.04), 50 * r, 11 * r, (1, 2, 3, 4)),
        RectSpec((0.0, 0.5 - 0.04), (2.0, 0.5 + 0.04), 50 * r, 2 * r, (5, 6, 7, 8)),
        RectSpec((0.0, 0.5 + 0.04), (2.0, 1.0), 50 * r, 11 * r, (9, 10, 11, 12)),
    )
    spec = ModelSpec(
        name="cantilever",
        rectangles=rects,
        wall_labels=frozenset({4, 8, 12}),
        traction_labels=frozenset({6}),
        phione_labels=frozenset({6}),
    )
    return spec, spec.build_mesh()


def bridge_model(resMesh=4, width=2.0, height=1.0, support=0.1, load=0.08, cells_per_unit=23.5):
    """Bridge on [0, width] x [0, height].

    Bottom corner segments of length ``support`` are clamped; a downward load
    acts on a segment of length ``load`` centered on the bottom edge. The
    domain is cut into five vertical strips so those segments are edge-aligned.
    Strip ``k`` (0-based) carries labels ``4k+1 .. 4k+4``.
    """
    if resMesh < 1:
        raise GeometryError("resMesh must be >= 1")
    n = cells_per_unit * resMesh
    mid = 0.5 * (width - load) - support
    xs = np.cumsum([0.0, support, mid, load, mid, support])
    ny = _cells(height, n)
    rects = tuple(
        RectSpec((xs[k], 0.0), (xs[k + 1], height), _cells(xs[k + 1] - xs[k], n), ny,
                 tuple(range(4 * k + 1, 4 * k + 5)))
        for k in range(5)
    )
    spec = ModelSpec(
        name="bridge",
        rectangles=rects,
        wall_labels=frozenset({1, 17}),
        traction_labels=frozenset({9}),
        phione_labels=frozenset({9}),
    )
    return spec, spec.build_mesh()


def radiator_model(resMesh=4, width=1.0, height=1.0, load=0.08, cells_per_unit=28.0):
    """Radiator on [0, width] x [0, height].

    The left edge is clamped; loads act on three segments of length ``load``
    on the right edge (bottom, middle, top). Five horizontal strips, strip
    ``k`` carrying labels ``4k+1 .. 4k+4``.
    """
    if resMesh < 1:
        raise GeometryError("resMesh must be >= 1")
    n = cells_per_unit * resMesh
    gap = 0.5 * (height - 3 * load)
    ys = np.cumsum([0.0, load, gap, load, gap, load])
    nx = _cells(width, n)
    rects = tuple(
        RectSpec((0.0, ys[k]), (width, ys[k + 1]), nx, _cells(ys[k + 1] - ys[k], n),
                 tuple(range(4 * k + 1, 4 * k + 5)))
        for k in range(5)
    )
    spec = ModelSpec(
        name="radiator",
        rectangles=rects,
        wall_labels=frozenset({4, 8, 12, 16, 20}),
        traction_labels=frozenset({2, 10, 18}),
        phione_labels=frozenset({2, 10, 18}),
    )
    return spec, spec.build_mesh()


MODELS = {
    "cantilever": cantilever_model,
    "bridge": bridge_model,
    "radiator": radiator_model,
}


def build_model(name, resMesh=4, **geometry):
    try:
        builder = MODELS[name]
    except KeyError:
        raise GeometryError(f"unknown model {name!r}") from None
    return builder(resMesh, **geometry)
