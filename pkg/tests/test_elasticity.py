import numpy as np
import pytest
import sympy

from lsto.elasticity import (
    StateSystem, assemble_state_system, assemble_stiffness, compliance, element_dofs,
    material_data, solve_state, solve_system, strain_energy, traction_load,
)
from lsto.exceptions import ModelError
from lsto.levelset import SmoothingParams, init_phi
from lsto.mesh2d import build_rect_grid

S = SmoothingParams()

# 7-point degree-5 rule on the reference triangle (barycentric, weights sum to 1)
_a1, _b1 = 0.059715871789770, 0.470142064105115
_a2, _b2 = 0.797426985353087, 0.101286507323456
DUNAVANT5 = (
    [(1 / 3, 1 / 3, 1 / 3)] + [(_a1, _b1, _b1), (_b1, _a1, _b1), (_b1, _b1, _a1)]
    + [(_a2, _b2, _b2), (_b2, _a2, _b2), (_b2, _b2, _a2)],
    [0.225] + [0.132394152788506] * 3 + [0.125939180544827] * 3,
)


def test_lame_constants():
    mat = material_data(2.1e11, 0.3)
    assert mat.mu == pytest.approx(2.1e11 / 2.6, rel=1e-15)
    assert mat.mu == pytest.approx(8.076923e10, rel=1e-6)
    assert mat.lam == pytest.approx(2.1e11 * 0.3 / (1.3 * 0.4), rel=1e-15)
    assert mat.lam == pytest.approx(1.211538e11, rel=1e-6)
    m0 = material_data(2.1e11, 0.0)
    assert m0.lam == 0.0 and m0.mu == 1.05e11
    assert np.all(np.linalg.eigvalsh(mat.D) > 0)


def _symbolic_element_stiffness(pts, E, nu):
    x, y = sympy.symbols("x y")
    (x1, y1), (x2, y2), (x3, y3) = [tuple(map(sympy.nsimplify, p)) for p in pts]
    M = sympy.Matrix([[1, x1, y1], [1, x2, y2], [1, x3, y3]])
    coeffs = M.inv()
    N = [coeffs[0, i] + coeffs[1, i] * x + coeffs[2, i] * y for i in range(3)]
    B = sympy.zeros(3, 6)
    for i, Ni in enumerate(N):
        B[0, 2 * i] = sympy.diff(Ni, x)
        B[1, 2 * i + 1] = sympy.diff(Ni, y)
        B[2, 2 * i] = sympy.diff(Ni, y)
        B[2, 2 * i + 1] = sympy.diff(Ni, x)
    E, nu = sympy.nsimplify(E), sympy.nsimplify(nu)
    lam = E * nu / ((1 + nu) * (1 - 2 * nu))
    mu = E / (2 * (1 + nu))
    D = sympy.Matrix([[lam + 2 * mu, lam, 0], [lam, lam + 2 * mu, 0], [0, 0, mu]])
    area = M.det() / 2
    return np.array((B.T * D * B * area).evalf(), dtype=float)


def test_single_triangle_against_symbolic():
    from lsto.mesh2d import TriMesh
    pts = [(0.1, 0.0), (1.3, 0.2), (0.4, 0.9)]
    mesh = TriMesh(np.array(pts), np.array([[0, 1, 2]]), np.array([1]),
                   np.array([[0, 1], [1, 2], [2, 0]]), np.array([1, 1, 1]))
    mat = material_data(2.1e11, 0.3)
    K = assemble_stiffness(mesh, mat.D).toarray()
    ref = _symbolic_element_stiffness(pts, 2.1e11, 0.3)
    assert np.allclose(K, ref, rtol=1e-12, atol=1e-12 * np.abs(ref).max())


def test_stiffness_scales_with_coefficient(unit_square):
    D = material_data().D
    K1 = assemble_stiffness(unit_square, D, np.ones(unit_square.n_triangles)).toarray()
    K2 = assemble_stiffness(unit_square, D, np.full(unit_square.n_triangles, 0.5)).toarray()
    assert np.allclose(K2, 0.5 * K1, rtol=1e-15, atol=0)


def test_symmetry_and_rigid_body_modes(cantilever1):
    spec, mesh = cantilever1
    sysm = assemble_state_system(mesh, init_phi("perforated", mesh), material_data(), S,
                                 spec.wall_labels, spec.traction_labels)
    assert sysm.K.asymmetry() <= 1e-12
    x, y = mesh.nodes.T
    norm = abs(sysm.K.csr).max()
    for mode in (np.column_stack([np.ones_like(x), 0 * x]),
                 np.column_stack([0 * x, np.ones_like(x)]),
                 np.column_stack([-y, x])):
        assert np.abs(sysm.K @ mode.ravel()).max() <= 1e-9 * norm


def test_total_traction_load(cantilever1):
    spec, mesh = cantilever1
    f = traction_load(mesh, spec.traction_labels, (0.0, -1.0e3))
    assert f[0::2].sum() == pytest.approx(0.0, abs=1e-12)
    assert f[1::2].sum() == pytest.approx(-80.0, rel=1e-12)
    loaded = np.flatnonzero(f)
    assert set(loaded // 2) <= set(mesh.nodes_with_labels(spec.traction_labels))


def test_patch_test_affine_field():
    mesh = build_rect_grid((0, 0), (1, 1), 6, 5, (1, 2, 3, 4))
    mat = material_data()
    x, y = mesh.nodes.T
    exact = np.column_stack([1e-3 + 2e-4 * x - 3e-4 * y, -2e-4 + 1e-4 * x + 5e-4 * y])
    bnd = mesh.boundary_nodes()
    dofs = np.sort(np.concatenate([2 * bnd, 2 * bnd + 1]))
    K = assemble_stiffness(mesh, mat.D)
    sysm = StateSystem(K, np.zeros(K.n), dofs, exact.ravel()[dofs])
    u, _ = solve_system(sysm, tol=1e-13)
    assert np.abs(u - exact).max() <= 1e-10 * np.abs(exact).max()


def _manufactured_error(n):
    # u = grad(exp(x) sin y) is divergence-free and harmonic, hence equilibrated
    mesh = build_rect_grid((0, 0), (1, 1), n, n, (1, 2, 3, 4))
    mat = material_data()

    def exact(p):
        return np.column_stack([np.exp(p[:, 0]) * np.sin(p[:, 1]),
                                np.exp(p[:, 0]) * np.cos(p[:, 1])])

    bnd = mesh.boundary_nodes()
    dofs = np.sort(np.concatenate([2 * bnd, 2 * bnd + 1]))
    K = assemble_stiffness(mesh, mat.D)
    u, _ = solve_system(StateSystem(K, np.zeros(K.n), dofs, exact(mesh.nodes).ravel()[dofs]),
                        tol=1e-13)
    bary, w = map(np.asarray, DUNAVANT5)
    p = mesh.nodes[mesh.triangles]
    err2 = 0.0
    for lam, wq in zip(bary, w):
        xq = np.einsum("k,tkd->td", lam, p)
        uh = np.einsum("k,tkd->td", lam, u[mesh.triangles])
        err2 += wq * np.sum(mesh.areas * np.sum((uh - exact(xq)) ** 2, axis=1))
    return np.sqrt(err2)


def test_manufactured_solution_converges_at_second_order():
    errs = [_manufactured_error(8 * r) for r in (1, 2, 4)]
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders >= 1.8), orders


def test_compliance_energy_identity_and_scaling(cantilever1):
    spec, mesh = cantilever1
    phi = init_phi("perforated", mesh)
    mat = material_data()
    u, info, sysm = solve_state(mesh, phi, mat, S, spec.wall_labels, spec.traction_labels)
    F = compliance(mesh, u, mat.g, spec.traction_labels)
    assert F > 0
    assert abs(F - strain_energy(sysm.K, u)) <= 1e-8 * F
    assert np.all(u[mesh.nodes_with_labels(spec.wall_labels)] == 0.0)
    mat2 = material_data(g=(0.0, -2.0e3))
    u2, _, _ = solve_state(mesh, phi, mat2, S, spec.wall_labels, spec.traction_labels)
    assert compliance(mesh, u2, mat2.g, spec.traction_labels) == pytest.approx(4 * F, rel=1e-8)


def test_zero_displacement_zero_compliance(cantilever1):
    spec, mesh = cantilever1
    assert compliance(mesh, np.zeros((mesh.n_nodes, 2)), (0, -1e3), spec.traction_labels) == 0.0


def test_spd_after_elimination(cantilever1):
    spec, mesh = cantilever1
    sysm = assemble_state_system(mesh, init_phi("perforated", mesh), material_data(), S,
                                 spec.wall_labels, spec.traction_labels)
    Kff, _, _ = sysm.reduced()
    rng = np.random.default_rng(0)
    for _ in range(100):
        v = rng.standard_normal(Kff.n)
        assert v @ (Kff @ v) > 0


def test_missing_wall_is_a_model_error(unit_square):
    with pytest.raises(ModelError):
        assemble_state_system(unit_square, np.ones(unit_square.n_nodes), material_data(), S,
                              {99}, {2})


def test_dof_layout(unit_square):
    dofs = element_dofs(unit_square)
    t = unit_square.triangles
    assert np.array_equal(dofs[:, 0::2] // 2, t) and np.all(dofs[:, 1::2] % 2 == 1)
