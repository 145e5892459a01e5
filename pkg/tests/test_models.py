"""Constructor tests: displayed coordinates, Lagrangian residuals, slices."""

import numpy as np
import pytest

from lagcob import models, verify
from lagcob.immersion import DomainPoint


def test_whitney_parameter_errors():
    with pytest.raises(ValueError):
        models.make_whitney_sphere(0, 1.0)
    with pytest.raises(ValueError):
        models.make_whitney_sphere(2, -1.0)


def test_whitney_double_point_images():
    w = models.make_whitney_sphere(2, 1.0)
    # (+-1, 0, 0) map to the origin of C^2
    for ci in (0, 1):
        z = w.eval(DomainPoint(ci, np.zeros(2)))
        assert np.max(np.abs(z)) < 1e-14


def test_whitney_n1_equator_point():
    # x = (0, 1): x_0 = 0 kills the imaginary part
    z = models._whitney_ambient_map(np.array([[0.0, 1.0]]), 1)
    assert z[0, 0] == pytest.approx(1.0 + 0.0j)


def test_whitney_area_radius_inverses():
    for A in (0.5, 4.0 / 3.0, 2.0):
        assert models.whitney_area(models.whitney_radius(A)) == pytest.approx(A)
    assert models.whitney_area(1.0) == pytest.approx(4.0 / 3.0)


def test_whitney_shadow_per_lobe():
    # projection bounds total area 2*(4/3); each lobe 4/3 by line integral
    w = models.make_whitney_sphere(2, 1.0)
    sh = verify.shadow_area(w)
    assert sh["lobes"][0] == pytest.approx(4.0 / 3.0, abs=1e-9)
    assert sh["lobes"][1] == pytest.approx(4.0 / 3.0, abs=1e-9)
    assert sh["total"] == pytest.approx(8.0 / 3.0, abs=1e-8)


def test_null_cobordism_displayed_values():
    nc = models.make_null_cobordism(1)
    z = nc.eval(0, np.array([[0.0, 0.0]]))[0]
    assert np.max(np.abs(z)) < 1e-15
    z = nc.eval(0, np.array([[1.0, 0.0]]))[0]
    assert z[0] == pytest.approx(0.0)
    assert z[1] == pytest.approx(1.0 - 1.0j)


def test_null_cobordism_negative_slice_empty():
    nc = models.make_null_cobordism(1)
    with pytest.raises(ValueError):
        # t = 0 is the critical value
        verify.slice_points(nc, 0.0)
    pts, img = verify.slice_points(nc, -0.5, n_samples=400)
    assert len(pts) == 0


def test_null_cobordism_slice_is_whitney_sphere():
    # slice at t = 1 equals the Whitney 2-sphere image pointwise
    nc = models.make_null_cobordism(2)
    w = models.make_whitney_sphere(2, 1.0)
    ids, U = w.sample(1000, seed=0)
    for ci in np.unique(ids):
        sel = ids == ci
        x = w.charts[ci].embed(U[sel])            # points of S^2_1
        z_sphere = w.charts[ci].fmap(U[sel])
        z_cob = nc.eval(0, x)                     # trace chart on R^3
        assert np.max(np.abs(z_cob[:, :2] - z_sphere)) < 1e-9
        assert np.max(np.abs(z_cob[:, 2].real - 1.0)) < 1e-12


def test_local_trace_displayed_values():
    tr = models.make_local_surgery_trace(0, 1)
    zp = tr.eval(0, np.array([[1.0, 0.0]]))[0]
    zm = tr.eval(0, np.array([[-1.0, 0.0]]))[0]
    assert zp[0] == pytest.approx(0.0) and zm[0] == pytest.approx(0.0)
    assert zp[1] == pytest.approx(1.0 - 1.0j)
    assert zm[1] == pytest.approx(1.0 + 1.0j)
    # same pi_X image, distinct ambient points
    assert abs(zp[1] - zm[1]) > 1.0


def test_local_trace_origin_maps_to_origin():
    for (k, n) in ((0, 1), (1, 2), (2, 4)):
        tr = models.make_local_surgery_trace(k, n)
        z = tr.eval(0, np.zeros((1, n + 1)))[0]
        assert np.max(np.abs(z)) < 1e-15


def test_local_trace_pi_R_exact():
    tr = models.make_local_surgery_trace(1, 3)
    rng = np.random.default_rng(0)
    X = rng.normal(size=(50, 4))
    Z = tr.eval(0, X)
    sig = np.array([1.0, -1.0, -1.0])
    want = X[:, 0] ** 2 + np.sum(sig * X[:, 1:] ** 2, axis=1)
    assert np.max(np.abs(Z[:, 3].real - want)) < 1e-12


def test_local_trace_k_range():
    with pytest.raises(ValueError):
        models.make_local_surgery_trace(-1, 2)
    with pytest.raises(ValueError):
        models.make_local_surgery_trace(3, 2)


def test_negative_slice_embedded():
    # k=1, n=2: the locus x_0^2 + x_1^2 - x_2^2 = -1 is nonempty, embedded
    sl = models.make_local_slice(1, 2, -1.0)
    ids, U = sl.sample(200, seed=0)
    assert len(U) > 0
    si = verify.find_self_intersections(sl, n_seed_pairs=200, seed=3)
    assert si == []


def test_sheared_torus_shear_matrix():
    st = models.make_sheared_torus()
    z = st.eval(0, np.zeros((1, 2)))[0]   # (q1,p1,q2,p2) = (1,0,1,0)
    assert z[0] == pytest.approx(1.5 + 0.0j)
    assert z[1] == pytest.approx(1.5 + 0.0j)


def test_sheared_torus_morse_structure():
    st = models.make_sheared_torus()
    cps = verify.critical_points(st, n_seeds=60, seed=0)
    assert len(cps) == 4
    assert [round(c.value, 6) for c in cps] == [-1.5, -0.5, 0.5, 1.5]
    assert sorted(c.upward_index for c in cps) == [0, 1, 1, 2]


def test_figure_eight_displayed_values():
    f8 = models.make_figure_eight(1.0)
    z0 = f8.eval(0, np.array([[0.0]]))[0, 0]
    zpi = f8.eval(0, np.array([[np.pi]]))[0, 0]
    assert f8.ambient.distance(np.array([z0]), np.array([zpi])) < 1e-12
    zh = f8.eval(0, np.array([[np.pi / 2]]))[0, 0]
    assert zh == pytest.approx(np.pi + 1.0j / 8.0)
    with pytest.raises(ValueError):
        models.make_figure_eight(-1.0)


def test_figure_eight_lobe_area():
    for E in (1.0, 2.0):
        sh = verify.shadow_area(models.make_figure_eight(E))
        assert sh["lobes"][0] == pytest.approx(E, abs=1e-9)


def test_section_heights_and_annulus():
    s0 = models.make_section(0.0)
    assert s0.eval(0, np.array([[1.0]]))[0, 0].imag == 0.0
    s1 = models.make_section(2.0 * np.pi)
    assert s1.eval(0, np.array([[1.0]]))[0, 0].imag == pytest.approx(1.0)
    sh = verify.shadow_area(models.make_section(1.7))
    assert sh["total"] == pytest.approx(1.7, abs=1e-9)


def test_constant_homotopy_suspension_is_product():
    def zf(U, t):
        return np.zeros(len(np.atleast_2d(U)))

    def zq(U, t):
        return np.zeros((len(np.atleast_2d(U)), 1))

    fam = models.GraphFamily(
        1, g_q=lambda U, t: np.zeros((len(np.atleast_2d(U)), 1)),
        g_qq=lambda U, t: np.zeros((len(np.atleast_2d(U)), 1, 1)),
        g_t=zf, g_tq=zq, g_tt=zf, t_range=(-1.0, 1.0),
        periods=(2.0 * np.pi,), label="constant")
    susp = models.make_suspension(fam)
    ids, U = susp.sample(200, seed=0)
    Z = susp.eval_batch(ids, U)
    # product L x R: X part is the zero section, C part is t + 0i
    assert np.max(np.abs(Z[:, 0].imag)) < 1e-15
    assert np.max(np.abs(Z[:, 1].imag)) < 1e-15
    assert np.max(np.abs(Z[:, 1].real - U[:, 1])) < 1e-15


def test_whitney_bottleneck_suspension_matches_sphere():
    fam = models.whitney_bottleneck_family(2)
    susp = models.make_suspension(fam)
    ids, U = susp.sample(500, seed=2)
    Z = susp.eval_batch(ids, U)
    for ci in np.unique(ids):
        sel = ids == ci
        q, t = U[sel][:, :-1], U[sel][:, -1]
        xh = fam.q_charts[ci].embed(q)
        x = np.column_stack([xh * np.sqrt(1 - t**2)[:, None], t])
        ref = models._whitney_ambient_map(x, 2)
        assert np.max(np.abs(Z[sel] - ref)) < 1e-12


def test_suspension_flux_invariant():
    fam = models.whitney_bottleneck_family(3)
    assert verify.flux_residual(fam) < 1e-10


def test_generalized_suspension_reduces_to_suspension():
    from lagcob.acceptance import _gen_susp_instances
    # single homotopy, Y = R, rho = id reproduces the ordinary suspension
    def g_q(U, t):
        th = np.atleast_2d(U)[:, 0]
        return (0.3 * t * np.cos(th))[:, None]

    def g_qq(U, t):
        th = np.atleast_2d(U)[:, 0]
        return (-0.3 * t * np.sin(th))[:, None, None]

    def g_t(U, t):
        th = np.atleast_2d(U)[:, 0]
        return 0.3 * np.sin(th)

    def g_tq(U, t):
        th = np.atleast_2d(U)[:, 0]
        return (0.3 * np.cos(th))[:, None]

    def g_tt(U, t):
        return np.zeros(len(np.atleast_2d(U)))

    fam = models.GraphFamily(1, g_q, g_qq, g_t, g_tq, g_tt,
                             t_range=(-1.0, 1.0), periods=(2.0 * np.pi,))
    rho = (lambda y: np.atleast_2d(y)[:, 0],
           lambda y: np.ones((len(np.atleast_2d(y)), 1)),
           lambda y: np.zeros((len(np.atleast_2d(y)), 1, 1)))
    gs = models.make_generalized_suspension([fam], [rho], Y_dim=1)
    susp = models.make_suspension(fam)
    rng = np.random.default_rng(1)
    W = np.column_stack([rng.uniform(0, 2 * np.pi, 100), rng.uniform(-0.9, 0.9, 100)])
    assert np.max(np.abs(gs.eval(0, W) - susp.eval(0, W))) < 1e-12


def test_generalized_suspension_zero_primitive_is_product():
    def zero_q(U, t):
        return np.zeros((len(np.atleast_2d(U)), 1))

    def zero_qq(U, t):
        return np.zeros((len(np.atleast_2d(U)), 1, 1))

    def zero_s(U, t):
        return np.zeros(len(np.atleast_2d(U)))

    fams = [models.GraphFamily(1, zero_q, zero_qq, zero_s, zero_q, zero_s,
                               t_range=(-1, 1), periods=(2 * np.pi,))
            for _ in range(2)]
    rho = (lambda y: np.atleast_2d(y)[:, 0] * 0.5,
           lambda y: np.column_stack([np.full(len(np.atleast_2d(y)), 0.5),
                                      np.zeros(len(np.atleast_2d(y)))]),
           lambda y: np.zeros((len(np.atleast_2d(y)), 2, 2)))
    gs = models.make_generalized_suspension(fams, [rho, rho], Y_dim=2)
    ids, U = gs.sample(200, seed=0)
    Z = gs.eval_batch(ids, U)
    # fixed Lagrangians x zero section of T*Y: all imaginary parts vanish
    assert np.max(np.abs(Z.imag)) < 1e-15


def test_generalized_suspension_length_mismatch():
    with pytest.raises(ValueError):
        models.make_generalized_suspension([], [(None, None, None)], Y_dim=1)


def test_truncate_product_is_product():
    def zf(U, t):
        return np.zeros(len(np.atleast_2d(U)))

    fam = models.GraphFamily(
        1, g_q=lambda U, t: np.zeros((len(np.atleast_2d(U)), 1)),
        g_qq=lambda U, t: np.zeros((len(np.atleast_2d(U)), 1, 1)),
        g_t=zf, g_tq=lambda U, t: np.zeros((len(np.atleast_2d(U)), 1)),
        g_tt=zf, t_range=(-1.0, 1.0), periods=(2 * np.pi,), label="product")
    susp = models.make_suspension(fam)
    tr = models.truncate(susp, -0.5, 0.5)
    ids, U = tr.sample(200, seed=0)
    assert np.max(np.abs(tr.eval_batch(ids, U) - susp.eval_batch(ids, U))) < 1e-14


def test_truncate_null_cobordism_end_is_whitney_slice():
    nc = models.make_null_cobordism(1)
    tr = models.truncate(nc, 0.2, 0.5)
    pts, img = verify.slice_points(tr, 0.55, n_samples=500, seed=1)
    assert len(pts) > 0
    # X part lies on the Whitney circle of radius sqrt(0.5), exactly
    for p, z in zip(pts, img):
        xh = tr.family.q_charts[p.chart].embed(p.u[None, :-1])
        ref = models._whitney_ambient_map(xh * np.sqrt(0.5), 1)[0]
        assert abs(z[0] - ref[0]) < 1e-9


def test_truncate_near_critical_value_rejected():
    nc = models.make_null_cobordism(1)
    nc.meta["critical_values"] = (0.0,)
    with pytest.raises(ValueError):
        models.truncate(nc, 0.05, 0.5, width=0.2)


def test_double_bottleneck_intersection_times():
    for eps in (1.0, 0.6):
        spec = models.DoubleBottleneckSpec(models.FigureEightBase(1.0), epsilon=eps)
        db = models.make_double_bottleneck(spec)
        si = verify.find_self_intersections(db, n_seed_pairs=200, seed=5)
        ts = sorted(set(round(float(p.u[-1]), 12) for p, q in si))
        want = eps / np.sqrt(3.0)
        assert len(ts) == 2
        assert abs(ts[0] + want) < 1e-10 and abs(ts[1] - want) < 1e-10


def test_double_bottleneck_zero_h_is_product():
    def zero(U):
        return np.zeros((len(np.atleast_2d(U)), 1))

    def zero2(U):
        return np.zeros((len(np.atleast_2d(U)), 1, 1))

    def zs(U):
        return np.zeros(len(np.atleast_2d(U)))

    base = models.MultiGraphBase(
        1, [{"G_q": zero, "G_qq": zero2, "h": zs, "h_q": zero, "h_qq": zero2}],
        bounds=np.array([[-1.0, 1.0]]), intersections=[])
    db = models.make_double_bottleneck(models.DoubleBottleneckSpec(base, epsilon=0.5))
    ids, U = db.sample(200, seed=0)
    Z = db.eval_batch(ids, U)
    assert np.max(np.abs(Z.imag)) < 1e-15     # L x R


def test_double_bottleneck_noncritical_h_rejected():
    def one_q(U):
        return np.ones((len(np.atleast_2d(U)), 1))

    def zero(U):
        return np.zeros((len(np.atleast_2d(U)), 1))

    def zero2(U):
        return np.zeros((len(np.atleast_2d(U)), 1, 1))

    base = models.MultiGraphBase(
        1, [{"G_q": zero, "G_qq": zero2,
             "h": lambda U: np.atleast_2d(U)[:, 0], "h_q": one_q, "h_qq": zero2},
            {"G_q": zero, "G_qq": zero2,
             "h": lambda U: np.zeros(len(np.atleast_2d(U))), "h_q": zero,
             "h_qq": zero2}],
        bounds=np.array([[-1.0, 1.0]]),
        intersections=[(np.array([0.3]), 0, 1)])
    with pytest.raises(ValueError):
        models.make_double_bottleneck(models.DoubleBottleneckSpec(base, epsilon=0.5))


def test_double_bottleneck_strip_area_formula():
    spec = models.DoubleBottleneckSpec(models.FigureEightBase(2.0), epsilon=0.8)
    db = models.make_double_bottleneck(spec)
    strip = verify.strip_area_quadrature(db)
    dh = db.meta["strips"][(0, 1)]["dh"]
    assert strip == pytest.approx(4 * 0.8 ** 3 / (3 * np.sqrt(3)) * abs(dh), abs=1e-9)


def test_bottlenecked_handle_geometry():
    h = models.make_bottlenecked_handle(0, 1, 1.0, 0.3)
    cps = verify.critical_points(h, n_seeds=48, seed=2)
    assert len(cps) == 1 and cps[0].upward_index == 1
    si = verify.find_self_intersections(h, n_seed_pairs=200, seed=3,
                                        separation=5e-2)
    assert len(si) == 4          # two geometric double points, both orderings
    mu2 = h.meta["mu2"]
    # slice above the bottleneck window: immersed (double point at q = 0)
    t_above = 0.3 * mu2
    z1 = h.eval(0, np.array([[0.0, 0.3]]))[0]   # x0+ chart, q=0
    z2 = h.eval(1, np.array([[0.0, 0.3]]))[0]
    assert np.max(np.abs(z1[:-1] - z2[:-1])) < 1e-14   # same X image
    assert abs(z1[-1] - z2[-1]) > 1e-6                 # distinct in C_cob
    # slice below the critical value: embedded (no X-coincidence at q = 0:
    # there are no q = 0 points at all since c(t) < 0)
    t_below = h.meta["critical_values"][0] - 0.3 * mu2
    pts, img = verify.slice_points(h, t_below, n_samples=400, seed=1)
    sl_si = [s for s in verify.find_self_intersections(
        h, n_seed_pairs=150, seed=9, separation=5e-2)
        if abs(h.eval(s[0])[h.ambient.cobordism_slot].real - t_below) < 0.05]
    assert sl_si == []


def test_bottlenecked_handle_areas_recovered():
    for (k, n, A, B) in ((0, 1, 1.0, 0.3), (1, 2, 0.7, 0.2), (2, 3, 1.0, 0.4)):
        h = models.make_bottlenecked_handle(k, n, A, B)
        assert verify.teardrop_area_quadrature(h, "inner") == pytest.approx(A, abs=1e-6)
        assert verify.strip_area_quadrature(h) == pytest.approx(B, abs=1e-6)


def test_bottlenecked_handle_parameter_errors():
    with pytest.raises(ValueError):
        models.make_bottlenecked_handle(0, 1, -1.0, 0.3)
    with pytest.raises(ValueError):
        models.make_bottlenecked_handle(0, 1, 1.0, 0.0)
    with pytest.raises(ValueError):
        # beyond the supported strip/teardrop ratio
        models.make_bottlenecked_handle(0, 1, 0.4, 1.0)
