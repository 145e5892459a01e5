"""Oracle tests: Lagrangian checks, critical points, intersections, areas."""

import numpy as np
import pytest

from lagcob import models, verify
from lagcob.ambient import AmbientSpace
from lagcob.immersion import Chart, Immersion


def _graph_of_nonclosed_form():
    """p = (q2, 0) over R^2: d(lambda) != 0, residual ~ 1."""
    def fmap(U):
        U = np.atleast_2d(U)
        Z = np.empty((len(U), 2), dtype=complex)
        Z[:, 0] = U[:, 0] + 1.0j * U[:, 1]
        Z[:, 1] = U[:, 1]
        return Z

    ch = Chart("graph", np.array([[-1, 1], [-1, 1]]), fmap)
    return Immersion(AmbientSpace(2), [ch], label="nonclosed_graph")


def _product_torus():
    def fmap(U):
        U = np.atleast_2d(U)
        return np.stack([np.exp(1.0j * U[:, 0]), np.exp(1.0j * U[:, 1])], axis=1)

    def jac(U):
        U = np.atleast_2d(U)
        J = np.zeros((len(U), 2, 2), dtype=complex)
        J[:, 0, 0] = 1.0j * np.exp(1.0j * U[:, 0])
        J[:, 1, 1] = 1.0j * np.exp(1.0j * U[:, 1])
        return J

    ch = Chart("torus", np.array([[0, 2 * np.pi], [0, 2 * np.pi]]), fmap, jac=jac)
    return Immersion(AmbientSpace(2), [ch], label="product_torus")


def test_check_lagrangian_product_torus():
    rep = verify.check_lagrangian(_product_torus(), 2000)
    assert rep.mode == "analytic"
    assert rep.max_residual < 1e-12


def test_check_lagrangian_detects_failure():
    rep = verify.check_lagrangian(_graph_of_nonclosed_form(), 500)
    # the pulled-back form has the constant entry 1; its Frobenius norm
    # (our reported residual) is sqrt(2), an order-one failure
    assert rep.max_residual == pytest.approx(np.sqrt(2.0), abs=1e-6)
    assert not rep.passed


def test_check_lagrangian_sheared_torus_passes():
    rep = verify.check_lagrangian(models.make_sheared_torus(), 2000)
    assert rep.max_residual < 1e-12


def test_check_lagrangian_fd_mode():
    rep = verify.check_lagrangian(models.make_whitney_sphere(2, 1.0), 500, mode="fd")
    assert rep.mode == "fd"
    assert rep.max_residual < 1e-4


def test_critical_points_local_traces():
    for n in range(1, 6):
        for k in range(0, n + 1):
            cps = verify.critical_points(models.make_local_surgery_trace(k, n),
                                         n_seeds=48)
            assert len(cps) == 1
            assert np.linalg.norm(cps[0].location.u) < 1e-8
            assert cps[0].upward_index == k + 1


def test_critical_points_null_cobordism_positive_definite():
    cps = verify.critical_points(models.make_null_cobordism(2), n_seeds=48)
    assert len(cps) == 1
    assert cps[0].upward_index == 3
    assert all(s == 1 for s in cps[0].hessian_eigen_signs)


def test_degenerate_hessian_flagged():
    # product torus with pi_R = cos(t1): Morse-Bott circles, degenerate
    imm = _product_torus()
    imm.ambient = AmbientSpace(2, cobordism_slot=0)
    from lagcob.immersion import DomainPoint
    imm.seeds = [DomainPoint(0, np.array([0.1, 1.0]))]
    cps = verify.critical_points(imm, n_seeds=24, seed=1)
    assert any(c.degenerate for c in cps)
    assert all(c.upward_index is None for c in cps if c.degenerate)


def test_slice_regularity_guard():
    st = models.make_sheared_torus()
    with pytest.raises(ValueError):
        verify.slice_points(st, 0.5)     # critical value
    pts, img = verify.slice_points(st, 0.0, n_samples=700, seed=0)
    assert len(pts) > 0
    assert np.max(np.abs(img[:, 0].real)) < 1e-9


def test_sheared_torus_slices_match_figure():
    from scipy.spatial import cKDTree
    st = models.make_sheared_torus()
    for t in (-1.0, 0.0, 1.0):
        pts, img = verify.slice_points(st, t, n_samples=700, seed=0)
        assert len(pts) > 0
    # the torus itself is embedded ...
    assert verify.find_self_intersections(st, n_seed_pairs=200, seed=2,
                                          separation=0.3) == []
    # ... while the slice at t = 0 is immersed: X-image coincidences among
    # slice points with well-separated domain preimages
    pts, img = verify.slice_points(st, 0.0, n_samples=4000, seed=0)
    X = np.column_stack([img[:, 1].real, img[:, 1].imag])
    emb = np.array([st.embed_domain(p) for p in pts])
    pairs = cKDTree(X).query_pairs(2e-3)
    dbl = [(i, j) for (i, j) in pairs if np.linalg.norm(emb[i] - emb[j]) > 0.5]
    assert len(dbl) > 0


def test_self_intersections_whitney():
    w = models.make_whitney_sphere(2, 1.0)
    si = verify.find_self_intersections(w, n_seed_pairs=150, seed=1)
    assert len(si) == 2      # one geometric point, two ordered generators
    ps = {(p.chart, q.chart) for (p, q) in si}
    assert ps == {(0, 1), (1, 0)}


def test_self_intersections_embedded_section_empty():
    s = models.make_section(2.0)
    assert verify.find_self_intersections(s, n_seed_pairs=100) == []


def test_self_intersections_figure_eight():
    f8 = models.make_figure_eight(1.0)
    si = verify.find_self_intersections(f8, n_seed_pairs=100)
    thetas = sorted(float(p.u[0]) % (2 * np.pi) for (p, q) in si)
    assert np.allclose(thetas, [0.0, np.pi], atol=1e-8)


def test_separation_must_be_positive():
    with pytest.raises(ValueError):
        verify.find_self_intersections(models.make_figure_eight(1.0),
                                       separation=0.0)


def test_shadow_monte_carlo_and_warning():
    # the raster mode is resolution-limited; it brackets the exact value
    w = models.make_whitney_sphere(2, 1.0)
    mc = verify.shadow_area(w, method="monte-carlo", n_samples=40000)
    assert mc["total"] == pytest.approx(8.0 / 3.0, rel=0.15)
    with pytest.warns(UserWarning):
        verify.shadow_area(w, method="monte-carlo", n_samples=500)


def test_hofer_norm_zero_cases():
    def zf(U, t):
        return np.zeros(len(np.atleast_2d(U)))

    def zq(U, t):
        return np.zeros((len(np.atleast_2d(U)), 1))

    fam = models.GraphFamily(1, g_q=zq, g_qq=lambda U, t: np.zeros((len(np.atleast_2d(U)), 1, 1)),
                             g_t=zf, g_tq=zq, g_tt=zf, t_range=(-1, 1),
                             periods=(2 * np.pi,))
    assert verify.hofer_norm(fam) == pytest.approx(0.0, abs=1e-12)

    # H_t(q) = phi(t) independent of q: sup - inf vanishes pointwise
    def g_t_const(U, t):
        return np.full(len(np.atleast_2d(U)), np.sin(t))

    fam2 = models.GraphFamily(1, g_q=zq, g_qq=lambda U, t: np.zeros((len(np.atleast_2d(U)), 1, 1)),
                              g_t=g_t_const, g_tq=zq, g_tt=zf, t_range=(-1, 1),
                              periods=(2 * np.pi,))
    assert verify.hofer_norm(fam2) == pytest.approx(0.0, abs=1e-12)


def test_hofer_equals_suspension_shadow():
    fam = models.whitney_bottleneck_family(2)
    susp = models.make_suspension(fam)
    hn = verify.hofer_norm(fam)
    sh = verify.shadow_area(susp)["total"]
    assert abs(hn - sh) < 1e-4


def test_truncation_hofer_bound():
    fam = models.whitney_bottleneck_family(2)
    norm, bound = verify.truncation_modification_hofer(fam, 0.4)
    assert norm <= bound + 1e-4


def test_teardrop_corner_and_scaling():
    td = verify.make_teardrop(np.array([0.0, 1.0]), r=1.0)
    assert np.max(np.abs(td.map(np.array([0.0 + 0.0j])))) == 0.0   # corner
    resid, area1 = verify.verify_teardrop(td)
    assert resid < 1e-8
    assert area1 == pytest.approx(4.0 / 3.0, abs=1e-6)
    td2 = verify.make_teardrop(np.array([0.0, 1.0]), r=2.0)
    _, area2 = verify.verify_teardrop(td2)
    assert area2 / area1 == pytest.approx(8.0, abs=1e-6)


def test_teardrop_requires_unit_vector():
    with pytest.raises(ValueError):
        verify.make_teardrop(np.array([0.5, 0.5]))


def test_teardrop_residual_many_equators():
    rng = np.random.default_rng(3)
    for n in (2, 3):
        for _ in range(8):
            p = rng.normal(size=n)
            p /= np.linalg.norm(p)
            resid, area = verify.verify_teardrop(verify.make_teardrop(p))
            assert resid < 1e-8
            assert area == pytest.approx(4.0 / 3.0, abs=1e-6)


def test_gauss_adaptive_known_integral():
    val = verify.gauss_adaptive(lambda x: np.exp(-x * x), -5.0, 5.0)
    assert val == pytest.approx(np.sqrt(np.pi), abs=1e-9)
