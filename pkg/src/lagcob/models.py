"""Constructors for the standard Lagrangian immersions and cobordism models.

The models:

* Whitney spheres  i(x)_c = x_c (1 + 2i x_0)  on S^n_r, one double point,
  teardrop-class area A = (4/3) r^3;
* the null cobordism (x_0..x_n) -> (i(x), |x|^2 - i x_0) whose positive
  slices are Whitney spheres;
* local surgery traces j(x) = (x_c(1 + 2i s_c x_0), x_0^2 + sum s_c x_c^2
  - i x_0) with s_c = +1 for c <= k and -1 otherwise;
* the sheared product torus (a compact Lagrangian viewed as a cobordism
  from the empty set to itself);
* double sections (figure eights) and constant sections of T*S^1;
* suspensions (i_t(q), t + i H_t(q)) of exact homotopies, generalized
  suspensions over a parameter manifold Y, truncations with cylindrical
  ends, double bottlenecks rho(t) = t(t+eps)(t-eps), and the
  double-bottlenecked surgery trace K^{k,n-k+1}_{A,B}.

Evaluation maps carry analytic Jacobians throughout so the Lagrangian
condition can be verified at tight tolerance.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as P

from .ambient import AmbientSpace
from .immersion import Chart, DomainPoint, Immersion
from . import profiles as pf

__all__ = [
    "make_whitney_sphere", "make_null_cobordism", "make_local_surgery_trace",
    "make_local_slice", "make_sheared_torus", "make_figure_eight",
    "make_section", "make_suspension", "make_generalized_suspension",
    "make_double_bottleneck", "make_bottlenecked_handle", "truncate",
    "HomotopyWithPrimitive", "GraphFamily", "whitney_bottleneck_family",
    "DoubleBottleneckSpec", "MultiGraphBase", "FigureEightBase",
    "whitney_radius", "whitney_area",
]


def whitney_area(r):
    """Teardrop-class area of the Whitney sphere of radius r: (4/3) r^3."""
    return 4.0 * r ** 3 / 3.0


def whitney_radius(A):
    """Radius realizing teardrop area A: inverse of whitney_area."""
    return (3.0 * A / 4.0) ** (1.0 / 3.0)


# ---------------------------------------------------------------------------
# Whitney sphere
# ---------------------------------------------------------------------------

def _sphere_charts(n, r, whitney_map_factory):
    """Two stereographic charts of S^n_r with poles on the x_0 axis.

    Chart sign=+1 is centered at x_0 = +r and keeps the hemisphere
    x_0 >= 0 (|u|^2 <= r^2); sign=-1 keeps x_0 < 0.  whitney_map_factory
    receives a function x(U) -> sphere points and its Jacobian and returns
    the chart map/jac pair.
    """
    charts = []
    for sign, name in ((1.0, "x0+"), (-1.0, "x0-")):
        def x_of_u(U, sign=sign):
            U = np.atleast_2d(U)
            s = np.sum(U * U, axis=1)
            den = r * r + s
            x = np.empty((len(U), n + 1))
            x[:, 0] = sign * r * (r * r - s) / den
            x[:, 1:] = 2.0 * r * r * U / den[:, None]
            return x

        def dx_du(U, sign=sign):
            U = np.atleast_2d(U)
            m = len(U)
            s = np.sum(U * U, axis=1)
            den = (r * r + s)
            J = np.empty((m, n + 1, n))
            J[:, 0, :] = -sign * 4.0 * r ** 3 * U / (den ** 2)[:, None]
            eye = np.eye(n)
            J[:, 1:, :] = 2.0 * r * r * (eye[None, :, :] * den[:, None, None]
                                         - 2.0 * U[:, :, None] * U[:, None, :]) / (den ** 2)[:, None, None]
            return J

        fmap, jac = whitney_map_factory(x_of_u, dx_du)
        accept = ((lambda U: np.sum(np.atleast_2d(U) ** 2, axis=1) <= r * r) if sign > 0
                  else (lambda U: np.sum(np.atleast_2d(U) ** 2, axis=1) < r * r))
        bounds = np.array([[-r, r]] * n)
        charts.append(Chart(name, bounds, fmap, jac=jac, accept=accept, embed=x_of_u))
    return charts


def _whitney_ambient_map(x, n):
    """i(x)_c = x_c (1 + 2i x_0) for c = 1..n, batched over rows of x."""
    x = np.atleast_2d(x)
    return x[:, 1:n + 1] * (1.0 + 2.0j * x[:, 0])[:, None]


def _whitney_ambient_jac(x, n):
    """d i / d x, shape (m, n, n+1)."""
    x = np.atleast_2d(x)
    m = len(x)
    J = np.zeros((m, n, n + 1), dtype=complex)
    J[:, :, 0] = 2.0j * x[:, 1:n + 1]
    diag = (1.0 + 2.0j * x[:, 0])
    for c in range(n):
        J[:, c, c + 1] = diag
    return J


def _whitney_lobe_segments(r, lobe_sign):
    """Boundary of one lobe of the shadow {|p| <= 2|q| sqrt(r^2-q^2)}.

    Parameterized by the angle of the (x_0, x_1) circle, q = r sin(theta),
    p = r^2 sin(2 theta), which is smooth through the fold (the naive
    graph parameterization has a square-root endpoint singularity that
    spoils the quadrature).
    """
    def curve(t):
        th = np.pi * np.asarray(t, dtype=float)
        return lobe_sign * (r * np.sin(th) + 1.0j * r * r * np.sin(2.0 * th))

    return [curve]


def make_whitney_sphere(n, r):
    """Whitney sphere immersion S^n_r -> C^n with one transverse double point.

    The double point is the image of (+-r, 0, ..., 0); each lobe of the
    shadow projection to the first coordinate bounds area (4/3) r^3.
    """
    if n < 1:
        raise ValueError("whitney sphere needs n >= 1")
    if r <= 0:
        raise ValueError("whitney sphere needs r > 0")

    def factory(x_of_u, dx_du):
        def fmap(U):
            return _whitney_ambient_map(x_of_u(U), n)

        def jac(U):
            x = x_of_u(U)
            return np.einsum("mcx,mxu->mcu", _whitney_ambient_jac(x, n), dx_du(U))

        return fmap, jac

    ambient = AmbientSpace(n, cobordism_slot=(n - 1 if n >= 2 else None))
    imm = Immersion(ambient, _sphere_charts(n, r, factory),
                    label=f"whitney_sphere(n={n}, r={r})", domain_dim=n)
    imm.known_self_intersections = [
        (DomainPoint(0, np.zeros(n)), DomainPoint(1, np.zeros(n)))]
    imm.shadow_lobes = [_whitney_lobe_segments(r, +1.0), _whitney_lobe_segments(r, -1.0)]
    imm.meta = {"model": "whitney", "n": n, "r": r, "area": whitney_area(r)}
    return imm


# ---------------------------------------------------------------------------
# Local surgery traces and the null cobordism
# ---------------------------------------------------------------------------

def _sigma(k, n):
    """Signs s_c = +1 for c <= k else -1 (c = 1..n)."""
    s = -np.ones(n)
    s[:k] = 1.0
    return s


def _trace_map(k, n, box=1.6):
    sig = _sigma(k, n)

    def fmap(X):
        X = np.atleast_2d(X)
        x0 = X[:, 0]
        q = X[:, 1:]
        Z = np.empty((len(X), n + 1), dtype=complex)
        Z[:, :n] = q * (1.0 + 2.0j * sig[None, :] * x0[:, None])
        Z[:, n] = x0 * x0 + np.sum(sig[None, :] * q * q, axis=1) - 1.0j * x0
        return Z

    def jac(X):
        X = np.atleast_2d(X)
        m = len(X)
        x0 = X[:, 0]
        q = X[:, 1:]
        J = np.zeros((m, n + 1, n + 1), dtype=complex)
        J[:, :n, 0] = 2.0j * sig[None, :] * q
        for c in range(n):
            J[:, c, c + 1] = 1.0 + 2.0j * sig[c] * x0
        J[:, n, 0] = 2.0 * x0 - 1.0j
        J[:, n, 1:] = 2.0 * sig[None, :] * q
        return J

    bounds = np.array([[-box, box]] * (n + 1))
    return Chart("trace", bounds, fmap, jac=jac, hard_bounds=False)


def make_local_surgery_trace(k, n, box=1.6):
    """Local (k, n-k+1) surgery trace on R^{n+1} (k = n is the null cobordism).

    pi_R o j = x_0^2 + sum_c s_c x_c^2 exactly; the unique critical point
    sits at the origin with upward Morse index k+1.
    """
    if not (0 <= k <= n):
        raise ValueError("local surgery trace needs 0 <= k <= n")
    ambient = AmbientSpace(n + 1, cobordism_slot=n)
    imm = Immersion(ambient, [_trace_map(k, n, box)],
                    label=f"local_surgery_trace(k={k}, n={n})", domain_dim=n + 1)
    imm.seeds = [DomainPoint(0, np.zeros(n + 1))]
    imm.meta = {"model": "local_trace", "k": k, "n": n, "box": box,
                "critical_values": (0.0,)}
    imm.slice_model = lambda t: make_local_slice(k, n, t)
    return imm


def make_null_cobordism(n, box=1.6):
    """Null cobordism of the Whitney n-sphere: x -> (i(x), |x|^2 - i x_0).

    Identical to the local trace at k = n; slices at t > 0 are Whitney
    spheres of radius sqrt(t), slices at t < 0 are empty.
    """
    if n < 1:
        raise ValueError("null cobordism needs n >= 1")
    imm = make_local_surgery_trace(n, n, box)
    imm.label = f"null_cobordism(n={n})"
    imm.meta = {"model": "null_cobordism", "n": n, "box": box,
                "critical_values": (0.0,)}
    imm.slice_model = lambda t: make_whitney_sphere(n, np.sqrt(t)) if t > 0 else None
    imm.family = _null_cobordism_family(n)
    return imm


def make_local_slice(k, n, level, box=1.6, margin=1e-3):
    """Slice {x_0^2 + sum s_c x_c^2 = level} of the local trace, in C^n.

    Covered by solve-charts for each domain coordinate; the level may be
    any nonzero real (positive: immersed slice for 0 <= k < n+1 with one
    double point; negative: embedded).
    """
    sig = _sigma(k, n)
    coefs = np.concatenate(([1.0], sig))  # x_0^2 coefficient then q
    ambient = AmbientSpace(n, cobordism_slot=None)

    def make_chart(v, sign):
        # solve coordinate v from the constraint; chart coords = others
        others = [c for c in range(n + 1) if c != v]

        def lift(U):
            U = np.atleast_2d(U)
            X = np.empty((len(U), n + 1))
            X[:, others] = U
            rad = (level - np.sum(coefs[None, others] * U * U, axis=1)) / coefs[v]
            X[:, v] = sign * np.sqrt(np.maximum(rad, 0.0))
            return X

        def accept(U):
            U = np.atleast_2d(U)
            rad = (level - np.sum(coefs[None, others] * U * U, axis=1)) / coefs[v]
            return rad > margin

        def fmap(U):
            return _whitney_trace_slice_map(lift(U), sig)

        def jac(U):
            U = np.atleast_2d(U)
            X = lift(U)
            dXdU = np.zeros((len(U), n + 1, n))
            with np.errstate(divide="ignore", invalid="ignore"):
                for j, c in enumerate(others):
                    dXdU[:, c, j] = 1.0
                    dXdU[:, v, j] = -coefs[c] * U[:, j] / (coefs[v] * X[:, v])
            JX = _whitney_trace_slice_jac(X, sig)
            return np.einsum("mcx,mxu->mcu", JX, dXdU)

        bounds = np.array([[-box, box]] * n)
        return Chart(f"solve_x{v}{'+' if sign > 0 else '-'}", bounds, fmap,
                     jac=jac, accept=accept, embed=lift)

    charts = [make_chart(v, s) for v in range(n + 1) for s in (1.0, -1.0)]
    imm = Immersion(ambient, charts, label=f"local_slice(k={k}, n={n}, level={level})",
                    domain_dim=n)
    if level > 0:
        # double point preimages (+-sqrt(level), 0, ..., 0): charts 0 and 1
        imm.known_self_intersections = [
            (DomainPoint(0, np.zeros(n)), DomainPoint(1, np.zeros(n)))]
    imm.meta = {"model": "local_slice", "k": k, "n": n, "level": level}
    return imm


def _whitney_trace_slice_map(X, sig):
    X = np.atleast_2d(X)
    x0 = X[:, 0]
    return X[:, 1:] * (1.0 + 2.0j * sig[None, :] * x0[:, None])


def _whitney_trace_slice_jac(X, sig):
    X = np.atleast_2d(X)
    m, n1 = X.shape
    n = n1 - 1
    J = np.zeros((m, n, n + 1), dtype=complex)
    J[:, :, 0] = 2.0j * sig[None, :] * X[:, 1:]
    for c in range(n):
        J[:, c, c + 1] = 1.0 + 2.0j * sig[c] * X[:, 0]
    return J


# ---------------------------------------------------------------------------
# Sheared product torus
# ---------------------------------------------------------------------------

def make_sheared_torus():
    """Sheared product torus: a compact Lagrangian in C^2 in general position.

    The product torus (cos t1 + i sin t1, cos t2 + i sin t2) pushed through
    the linear symplectomorphism (q1 + q2/2 + i(4p1/3 - 2p2/3),
    q2 + q1/2 + i(4p2/3 - 2p1/3)).  pi_R (the first real coordinate) is
    Morse with critical values {+-1.5, +-0.5}.
    """
    def fmap(U):
        U = np.atleast_2d(U)
        t1, t2 = U[:, 0], U[:, 1]
        q1, p1, q2, p2 = np.cos(t1), np.sin(t1), np.cos(t2), np.sin(t2)
        z1 = (q1 + 0.5 * q2) + 1.0j * (4.0 * p1 / 3.0 - 2.0 * p2 / 3.0)
        z2 = (q2 + 0.5 * q1) + 1.0j * (4.0 * p2 / 3.0 - 2.0 * p1 / 3.0)
        return np.stack([z1, z2], axis=1)

    def jac(U):
        U = np.atleast_2d(U)
        t1, t2 = U[:, 0], U[:, 1]
        dq1, dp1 = -np.sin(t1), np.cos(t1)
        dq2, dp2 = -np.sin(t2), np.cos(t2)
        J = np.empty((len(U), 2, 2), dtype=complex)
        J[:, 0, 0] = dq1 + 1.0j * (4.0 * dp1 / 3.0)
        J[:, 0, 1] = 0.5 * dq2 + 1.0j * (-2.0 * dp2 / 3.0)
        J[:, 1, 0] = 0.5 * dq1 + 1.0j * (-2.0 * dp1 / 3.0)
        J[:, 1, 1] = dq2 + 1.0j * (4.0 * dp2 / 3.0)
        return J

    bounds = np.array([[0.0, 2.0 * np.pi]] * 2)
    ambient = AmbientSpace(2, cobordism_slot=0)

    def embed(U):
        U = np.atleast_2d(U)
        return np.stack([np.cos(U[:, 0]), np.sin(U[:, 0]),
                         np.cos(U[:, 1]), np.sin(U[:, 1])], axis=1)

    imm = Immersion(ambient, [Chart("torus", bounds, fmap, jac=jac,
                                    embed=embed, hard_bounds=False)],
                    label="sheared_torus", domain_dim=2)
    imm.seeds = [DomainPoint(0, np.array([a, b]))
                 for a in (0.0, np.pi) for b in (0.0, np.pi)]
    imm.meta = {"model": "sheared_torus", "critical_values": (-1.5, -0.5, 0.5, 1.5)}
    return imm


# ---------------------------------------------------------------------------
# Multisections of T*S^1
# ---------------------------------------------------------------------------

def make_figure_eight(E, period=2.0 * np.pi):
    """Double section of T*S^1:  theta -> (2 theta, (E/8) sin theta).

    One self-intersection at the base point 0 (preimages theta = 0, pi);
    the bigon between the two branches has area E.
    """
    if E <= 0:
        raise ValueError("figure eight needs E > 0")

    def fmap(U):
        th = np.atleast_2d(U)[:, 0]
        return (2.0 * th + 1.0j * (E / 8.0) * np.sin(th))[:, None]

    def jac(U):
        th = np.atleast_2d(U)[:, 0]
        return (2.0 + 1.0j * (E / 8.0) * np.cos(th))[:, None, None]

    ambient = AmbientSpace(1, base_periods=(period,))
    bounds = np.array([[0.0, 2.0 * np.pi]])

    def embed(U):
        U = np.atleast_2d(U)
        return np.stack([np.cos(U[:, 0]), np.sin(U[:, 0])], axis=1)

    imm = Immersion(ambient, [Chart("theta", bounds, fmap, jac=jac,
                                    embed=embed, hard_bounds=False)],
                    label=f"figure_eight(E={E})", domain_dim=1)
    imm.known_self_intersections = [
        (DomainPoint(0, np.array([0.0])), DomainPoint(0, np.array([np.pi])))]

    def upper(t):
        phi = 2.0 * np.pi * np.asarray(t, dtype=float)
        return phi + 1.0j * (E / 8.0) * np.sin(phi / 2.0)

    def lower(t):
        phi = 2.0 * np.pi * (1.0 - np.asarray(t, dtype=float))
        return phi - 1.0j * (E / 8.0) * np.sin(phi / 2.0)

    imm.shadow_lobes = [[upper, lower]]
    imm.meta = {"model": "figure_eight", "E": E, "period": period}
    return imm


def make_section(Eprime, period=2.0 * np.pi):
    """Constant section of T*S^1 at height E'/(2 pi); annulus area E' with
    the zero section."""
    height = Eprime / period

    def fmap(U):
        th = np.atleast_2d(U)[:, 0]
        return (th + 1.0j * height)[:, None]

    def jac(U):
        th = np.atleast_2d(U)[:, 0]
        return np.ones((len(th), 1, 1), dtype=complex)

    ambient = AmbientSpace(1, base_periods=(period,))
    bounds = np.array([[0.0, period]])

    def embed(U):
        U = np.atleast_2d(U)
        return np.stack([np.cos(2.0 * np.pi * U[:, 0] / period),
                         np.sin(2.0 * np.pi * U[:, 0] / period)], axis=1)

    imm = Immersion(ambient, [Chart("theta", bounds, fmap, jac=jac,
                                    embed=embed, hard_bounds=False)],
                    label=f"section(Eprime={Eprime})", domain_dim=1)

    def top(t):
        return period * np.asarray(t, dtype=float) + 1.0j * height

    def right(t):
        return period + 1.0j * height * (1.0 - np.asarray(t, dtype=float))

    def bottom(t):
        return period * (1.0 - np.asarray(t, dtype=float)) + 0.0j

    def left(t):
        return 0.0 + 1.0j * height * np.asarray(t, dtype=float)

    # annulus between the section and the zero section, cut along theta = 0
    imm.shadow_lobes = [[top, right, bottom, left]]
    imm.meta = {"model": "section", "Eprime": Eprime, "period": period}
    return imm


# ---------------------------------------------------------------------------
# Exact homotopies with primitive, and suspensions
# ---------------------------------------------------------------------------

class HomotopyWithPrimitive:
    """An exact homotopy of Lagrangian immersions i_t with flux primitive H_t.

    slice_map(U, t)   -> (m, N_X) complex points of the slice;
    slice_jac_q(U, t) -> (m, N_X, dq);  slice_jac_t(U, t) -> (m, N_X);
    H(U, t), H_q(U, t) -> (m, dq), H_t(U, t): primitive and derivatives.

    q_charts describe the slice domain (bounds / acceptance / embedding);
    t_range is the parameter interval the suspension is built over.
    """

    def __init__(self, x_ambient, q_charts, slice_map, slice_jac_q, slice_jac_t,
                 H, H_q, H_t, t_range, label="homotopy"):
        self.x_ambient = x_ambient
        self.q_charts = q_charts
        self.slice_map = slice_map
        self.slice_jac_q = slice_jac_q
        self.slice_jac_t = slice_jac_t
        self.H = H
        self.H_q = H_q
        self.H_t = H_t
        self.t_range = tuple(t_range)
        self.label = label


class GraphFamily(HomotopyWithPrimitive):
    """Exact homotopy of exact graphs p = d_q g(q, t) in T*R^d or T*(S^1)^d.

    The flux primitive of the family is H_t = d g / d t.  The caller
    supplies g and its derivatives g_q (m,d), g_qq (m,d,d), g_t (m,),
    g_tq (m,d), g_tt (m,).
    """

    def __init__(self, dq, g_q, g_qq, g_t, g_tq, g_tt, t_range,
                 bounds=None, periods=None, label="graph_family"):
        if bounds is None:
            bounds = np.array([[0.0, 2.0 * np.pi]] * dq)
        x_ambient = AmbientSpace(dq, base_periods=periods)

        def slice_map(U, t):
            U = np.atleast_2d(U)
            return U + 1.0j * g_q(U, t)

        def slice_jac_q(U, t):
            U = np.atleast_2d(U)
            eye = np.eye(dq)[None, :, :]
            return eye + 1.0j * g_qq(U, t)

        def slice_jac_t(U, t):
            return 1.0j * g_tq(U, t)

        super().__init__(x_ambient, [Chart("q", np.asarray(bounds, dtype=float),
                                           lambda U: slice_map(U, t_range[0]))],
                         slice_map, slice_jac_q, slice_jac_t,
                         H=g_t, H_q=g_tq, H_t=g_tt, t_range=t_range, label=label)


def whitney_bottleneck_family(n, label=None):
    """Bottleneck homotopy of Whitney (n-1)-spheres of radius sqrt(1-t^2).

    Slices are i^{n-1,0}_{r(t)} with primitive H_t = 2 x_0 t; its suspension
    is exactly the Whitney n-sphere viewed as a cobordism in C^{n-1} x C.
    """
    if n < 2:
        raise ValueError("whitney bottleneck family needs n >= 2")
    d = n - 1  # slice sphere dimension
    unit = make_whitney_sphere(d, 1.0)
    x_ambient = AmbientSpace(d)

    def sphere_pt(U, ci):
        return unit.charts[ci].embed(U)

    def family_for_chart(ci):
        def slice_map(U, t):
            x = sphere_pt(U, ci) * np.sqrt(1.0 - t * t)
            return _whitney_ambient_map(x, d)

        def slice_jac_q(U, t):
            r = np.sqrt(1.0 - t * t)
            x = sphere_pt(U, ci) * r
            # d/dU of the unit-sphere point, scaled by r
            dxdu = _sphere_chart_jac(unit, ci, U) * r
            return np.einsum("mcx,mxu->mcu", _whitney_ambient_jac(x, d), dxdu)

        def slice_jac_t(U, t):
            r = np.sqrt(1.0 - t * t)
            xh = sphere_pt(U, ci)
            x = xh * r
            drdt = -t / r
            return np.einsum("mcx,mx->mc", _whitney_ambient_jac(x, d), xh * drdt)

        def H(U, t):
            return 2.0 * sphere_pt(U, ci)[:, 0] * np.sqrt(1.0 - t * t) * t

        def H_q(U, t):
            dxdu = _sphere_chart_jac(unit, ci, U)
            return 2.0 * np.sqrt(1.0 - t * t) * t * dxdu[:, 0, :]

        def H_t(U, t):
            r = np.sqrt(1.0 - t * t)
            return 2.0 * sphere_pt(U, ci)[:, 0] * (r - t * t / r)

        return slice_map, slice_jac_q, slice_jac_t, H, H_q, H_t

    fam = _MultiChartFamily(x_ambient, unit.charts, family_for_chart,
                            t_range=(-0.9, 0.9),
                            label=label or f"whitney_bottleneck(n={n})")
    return fam


def _sphere_chart_jac(sphere_imm, ci, U):
    """Jacobian of chart coords -> R^{n+1} sphere point (closed form)."""
    ch = sphere_imm.charts[ci]
    r = sphere_imm.meta["r"]
    n = sphere_imm.domain_dim
    sign = 1.0 if ci == 0 else -1.0
    U = np.atleast_2d(U)
    m = len(U)
    s = np.sum(U * U, axis=1)
    den = r * r + s
    J = np.empty((m, n + 1, n))
    J[:, 0, :] = -sign * 4.0 * r ** 3 * U / (den ** 2)[:, None]
    eye = np.eye(n)
    J[:, 1:, :] = 2.0 * r * r * (eye[None, :, :] * den[:, None, None]
                                 - 2.0 * U[:, :, None] * U[:, None, :]) / (den ** 2)[:, None, None]
    return J


class _MultiChartFamily(HomotopyWithPrimitive):
    """Family whose slice domain has several charts (spheres)."""

    def __init__(self, x_ambient, q_charts, family_for_chart, t_range, label):
        self.per_chart = [family_for_chart(ci) for ci in range(len(q_charts))]
        super().__init__(x_ambient, q_charts,
                         slice_map=None, slice_jac_q=None, slice_jac_t=None,
                         H=None, H_q=None, H_t=None, t_range=t_range, label=label)


def _null_cobordism_family(n):
    """Suspension presentation of the null cobordism over t > 0.

    Slices at t are Whitney n-spheres of radius sqrt(t); the primitive is
    H_t = -x_0 (x_0 the ambient coordinate of the scaled sphere point).
    """
    unit = make_whitney_sphere(n, 1.0)
    x_ambient = AmbientSpace(n)

    def family_for_chart(ci):
        def sphere_pt(U):
            return unit.charts[ci].embed(U)

        def slice_map(U, t):
            return _whitney_ambient_map(sphere_pt(U) * np.sqrt(t), n)

        def slice_jac_q(U, t):
            r = np.sqrt(t)
            x = sphere_pt(U) * r
            dxdu = _sphere_chart_jac(unit, ci, U) * r
            return np.einsum("mcx,mxu->mcu", _whitney_ambient_jac(x, n), dxdu)

        def slice_jac_t(U, t):
            r = np.sqrt(t)
            xh = sphere_pt(U)
            x = xh * r
            return np.einsum("mcx,mx->mc", _whitney_ambient_jac(x, n), xh * 0.5 / r)

        def H(U, t):
            return -sphere_pt(U)[:, 0] * np.sqrt(t)

        def H_q(U, t):
            dxdu = _sphere_chart_jac(unit, ci, U)
            return -np.sqrt(t) * dxdu[:, 0, :]

        def H_t(U, t):
            return -sphere_pt(U)[:, 0] * 0.5 / np.sqrt(t)

        return slice_map, slice_jac_q, slice_jac_t, H, H_q, H_t

    return _MultiChartFamily(x_ambient, unit.charts, family_for_chart,
                             t_range=(0.05, 2.0), label=f"null_cobordism_family(n={n})")


def _family_members(h: HomotopyWithPrimitive):
    """Normalize single-chart and multi-chart families to a common shape."""
    if isinstance(h, _MultiChartFamily):
        return list(h.per_chart)
    return [(h.slice_map, h.slice_jac_q, h.slice_jac_t, h.H, h.H_q, h.H_t)]


def make_suspension(h: HomotopyWithPrimitive, reparam=None):
    """Suspension (q, t) -> (i_t(q), t + i H_t(q)) of an exact homotopy.

    reparam, if given, is a pair (theta, theta_d1) composing the family
    parameter: slices become i_{theta(t)} with primitive theta'(t) H_{theta(t)}.
    Used by truncate to make ends cylindrical.
    """
    N_X = h.x_ambient.n_complex
    ambient = AmbientSpace(N_X + 1, cobordism_slot=N_X,
                           base_periods=(None if h.x_ambient.base_periods is None
                                         else tuple(h.x_ambient.base_periods) + (None,)))
    charts = []
    members = _family_members(h)
    for ci, qch in enumerate(h.q_charts):
        slice_map, slice_jac_q, slice_jac_t, H, H_q, H_t = members[ci]

        def fmap(W, slice_map=slice_map, H=H):
            W = np.atleast_2d(W)
            U, t = W[:, :-1], W[:, -1]
            th, thd = (t, np.ones_like(t)) if reparam is None else (reparam[0](t), reparam[1](t))
            Z = np.empty((len(W), N_X + 1), dtype=complex)
            for tv in np.unique(th):
                sel = th == tv
                Z[sel, :N_X] = slice_map(U[sel], tv)
                Z[sel, N_X] = t[sel] + 1.0j * thd[sel] * H(U[sel], tv)
            return Z

        def jac(W, sjq=slice_jac_q, sjt=slice_jac_t, H=H, H_q=H_q, H_t=H_t):
            W = np.atleast_2d(W)
            U, t = W[:, :-1], W[:, -1]
            m, dq = U.shape
            J = np.zeros((m, N_X + 1, dq + 1), dtype=complex)
            if reparam is None:
                th = t
                thd = np.ones_like(t)
                thdd = np.zeros_like(t)
            else:
                th, thd = reparam[0](t), reparam[1](t)
                thdd = _fd_scalar(reparam[1], t)
            for tv in np.unique(th):
                sel = th == tv
                J[sel, :N_X, :dq] = sjq(U[sel], tv)
                J[sel, :N_X, dq] = sjt(U[sel], tv) * thd[sel][:, None]
                J[sel, N_X, :dq] = 1.0j * thd[sel][:, None] * H_q(U[sel], tv)
                J[sel, N_X, dq] = (1.0 + 1.0j * (thdd[sel] * H(U[sel], tv)
                                                 + thd[sel] ** 2 * H_t(U[sel], tv)))
            return J

        def accept(W, qacc=qch.accept):
            if qacc is None:
                return np.ones(len(np.atleast_2d(W)), dtype=bool)
            return qacc(np.atleast_2d(W)[:, :-1])

        def embed(W, qemb=qch.embed):
            W = np.atleast_2d(W)
            if qemb is None:
                return W
            return np.hstack([qemb(W[:, :-1]), W[:, -1:]])

        bounds = np.vstack([qch.bounds, [list(h.t_range)]])
        charts.append(Chart(f"susp_{qch.name}", bounds, fmap, jac=jac,
                            accept=accept, embed=embed))

    imm = Immersion(ambient, charts, label=f"suspension({h.label})",
                    domain_dim=h.q_charts[0].dim + 1)
    imm.family = h
    imm.meta = {"model": "suspension", "t_range": h.t_range}
    return imm


def _fd_scalar(f, t, h=1e-6):
    t = np.asarray(t, dtype=float)
    return (f(t + h) - f(t - h)) / (2.0 * h)


def make_generalized_suspension(homotopies, rho_fns, Y_dim, y_box=1.0):
    """Generalized suspension over a parameter space Y = R^{Y_dim}.

    (q^a, y) -> ( i^a_{rho^a(y)}(q^a), y_i + i sum_a H^a_{rho^a(y)}(q^a)
    d rho^a / d y_i ), a Lagrangian in (prod X^a) x T*Y.

    rho_fns entries supply (value, grad, hess): y (m, dY) -> (m,), (m, dY),
    (m, dY, dY).  Each homotopy must have a single q-chart.
    """
    if len(homotopies) != len(rho_fns):
        raise ValueError("homotopies and rho_fns must have equal length")
    for h in homotopies:
        if len(h.q_charts) != 1:
            raise ValueError("generalized suspension needs single-chart homotopies")

    NXs = [h.x_ambient.n_complex for h in homotopies]
    offsets = np.concatenate([[0], np.cumsum(NXs)]).astype(int)
    N_tot = int(offsets[-1]) + Y_dim
    dqs = [h.q_charts[0].dim for h in homotopies]
    qoff = np.concatenate([[0], np.cumsum(dqs)]).astype(int)
    d_tot = int(qoff[-1]) + Y_dim

    periods = []
    for h in homotopies:
        bp = h.x_ambient.base_periods
        periods.extend(bp if bp is not None else [None] * h.x_ambient.n_complex)
    periods.extend([None] * Y_dim)
    if all(p is None for p in periods):
        periods = None
    ambient = AmbientSpace(N_tot, cobordism_slot=None,
                           base_periods=None if periods is None else tuple(periods))

    members = [(_family_members(h)[0]) for h in homotopies]

    def split(W):
        W = np.atleast_2d(W)
        qs = [W[:, qoff[a]:qoff[a + 1]] for a in range(len(homotopies))]
        y = W[:, qoff[-1]:]
        return qs, y

    def per_point(fun, U, tvals):
        """Evaluate a (U, t)-family function at per-row t values."""
        out = None
        for tv in np.unique(tvals):
            sel = tvals == tv
            block = fun(U[sel], tv)
            if out is None:
                out = np.empty((len(U),) + block.shape[1:], dtype=block.dtype)
            out[sel] = block
        return out

    def fmap(W):
        qs, y = split(W)
        m = len(y)
        Z = np.empty((m, N_tot), dtype=complex)
        p_y = np.zeros((m, Y_dim))
        for a, (h, (rho, drho, _)) in enumerate(zip(homotopies, rho_fns)):
            sm = members[a][0]
            t = rho(y)
            Z[:, offsets[a]:offsets[a + 1]] = per_point(sm, qs[a], t)
            Ha = per_point(members[a][3], qs[a], t)
            p_y += Ha[:, None] * drho(y)
        Z[:, offsets[-1]:] = y + 1.0j * p_y
        return Z

    def jac(W):
        qs, y = split(W)
        m = len(y)
        J = np.zeros((m, N_tot, d_tot), dtype=complex)
        for i in range(Y_dim):
            J[:, offsets[-1] + i, qoff[-1] + i] = 1.0
        for a, (h, (rho, drho, d2rho)) in enumerate(zip(homotopies, rho_fns)):
            sm, sjq, sjt, H, H_q, H_t = members[a]
            t = rho(y)
            dr = drho(y)            # (m, dY)
            d2r = d2rho(y)          # (m, dY, dY)
            sl = slice(offsets[a], offsets[a + 1])
            qs_sl = slice(qoff[a], qoff[a + 1])
            J[:, sl, qs_sl] = per_point(sjq, qs[a], t)
            jt = per_point(sjt, qs[a], t)           # (m, NX)
            J[:, sl, qoff[-1]:] = jt[:, :, None] * dr[:, None, :]
            Ha = per_point(H, qs[a], t)             # (m,)
            Hqa = per_point(H_q, qs[a], t)          # (m, dq)
            Hta = per_point(H_t, qs[a], t)          # (m,)
            # T*Y rows: p_i = sum_a H^a drho_i
            J[:, offsets[-1]:, qs_sl] += 1.0j * dr[:, :, None] * Hqa[:, None, :]
            J[:, offsets[-1]:, qoff[-1]:] += 1.0j * (
                Ha[:, None, None] * d2r
                + Hta[:, None, None] * dr[:, :, None] * dr[:, None, :])
        return J

    bounds = np.vstack([np.vstack([h.q_charts[0].bounds for h in homotopies]),
                        np.array([[-y_box, y_box]] * Y_dim)])
    imm = Immersion(ambient, [Chart("gsusp", bounds, fmap, jac=jac)],
                    label="generalized_suspension", domain_dim=d_tot)
    imm.meta = {"model": "generalized_suspension", "Y_dim": Y_dim}
    return imm


# ---------------------------------------------------------------------------
# Truncation
# ---------------------------------------------------------------------------

def truncate(susp: Immersion, t_minus, t_plus, width=None, margin=0.3):
    """Truncation K||_[t-, t+]: cylindrical (t-constant) ends outside [t-, t+].

    The input must carry a suspension family on neighborhoods of t+-; the
    family parameter is composed with a monotone C^2 clamp built from the
    quintic-smoothstep truncation profile (the s = 1 slice of rho(t, s)).
    """
    fam = susp.family
    if fam is None:
        raise ValueError("truncate needs a suspension-presented immersion")
    crit = susp.meta.get("critical_values", ())
    if width is None:
        width = min(0.25 * (t_plus - t_minus), 0.2)
    for tc in crit:
        if min(abs(t_minus - tc), abs(t_plus - tc)) < width:
            raise ValueError("truncation level too close to a critical value")

    theta = lambda t: pf.smooth_clamp(t, t_minus, t_plus, width)
    theta_d = lambda t: pf.smooth_clamp_d1(t, t_minus, t_plus, width)
    fam2 = _reparam_family(fam, (t_minus - margin, t_plus + margin))
    out = make_suspension(fam2, reparam=(theta, theta_d))
    out.label = f"truncate({susp.label}, [{t_minus}, {t_plus}])"
    out.meta = dict(susp.meta)
    out.meta.update({"model": "truncation", "window": (t_minus, t_plus),
                     "profile": "quintic-smoothstep clamp", "width": width})
    return out


def _reparam_family(fam, t_range):
    import copy
    fam2 = copy.copy(fam)
    fam2.t_range = t_range
    return fam2


# ---------------------------------------------------------------------------
# Double bottlenecks
# ---------------------------------------------------------------------------

def rho_bottleneck(t, eps):
    """rho(t) = t (t + eps)(t - eps); critical points at +- eps/sqrt(3)."""
    t = np.asarray(t, dtype=float)
    return t * (t * t - eps * eps)


def rho_bottleneck_d1(t, eps):
    t = np.asarray(t, dtype=float)
    return 3.0 * t * t - eps * eps


def rho_bottleneck_d2(t, eps):
    return 6.0 * np.asarray(t, dtype=float)


class MultiGraphBase:
    """Union of exact graphs p = dG_b(q) over a box in R^d.

    branches: list of dicts with callables G_q (m,d), G_qq (m,d,d),
    h (m,), h_q (m,d), h_qq (m,d,d).  intersections: list of
    (q*, b0, b1) marking the transverse double points.
    """

    def __init__(self, dq, branches, bounds, intersections, periods=None):
        self.dq = dq
        self.branches = branches
        self.bounds = np.asarray(bounds, dtype=float)
        self.intersections = intersections
        self.periods = periods


class FigureEightBase:
    """The double section of T*S^1 presented with its theta covering.

    Branch data is implicit in the global parameterization; h defaults to
    amp*cos(theta), which is critical at both double-point preimages.
    """

    def __init__(self, E, amp=None):
        self.E = E
        self.amp = amp if amp is not None else E / 16.0


class DoubleBottleneckSpec:
    def __init__(self, base, h=None, epsilon=1.0):
        self.base = base
        self.h = h
        self.epsilon = float(epsilon)


def make_double_bottleneck(spec: DoubleBottleneckSpec):
    """Suspension of the standard double bottleneck of a graphical base.

    Each branch graph moves by d(rho(t) h_b) and the C component is
    t + i rho'(t) h_b(q); the doubled self-intersections sit exactly at
    t = +- eps/sqrt(3), and the strip between the two copies of
    (q0 -> q1) has area |rho(d) - rho(-d)| |h(q1) - h(q0)|.
    """
    eps = spec.epsilon
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    delta = eps / np.sqrt(3.0)

    if isinstance(spec.base, FigureEightBase):
        return _figure_eight_bottleneck(spec.base, eps)
    base = spec.base
    dq = base.dq

    # precondition: dh = 0 at every self-intersection preimage
    for (qstar, b0, b1) in base.intersections:
        for b in (b0, b1):
            g = base.branches[b]["h_q"](np.atleast_2d(qstar))[0]
            if np.max(np.abs(g)) > 1e-8:
                raise ValueError("h is not critical at a self-intersection preimage")

    N_X = dq
    ambient = AmbientSpace(N_X + 1, cobordism_slot=N_X,
                           base_periods=(None if base.periods is None
                                         else tuple(base.periods) + (None,)))
    charts = []
    for b, br in enumerate(base.branches):
        def fmap(W, br=br):
            W = np.atleast_2d(W)
            U, t = W[:, :-1], W[:, -1]
            r, rd = rho_bottleneck(t, eps), rho_bottleneck_d1(t, eps)
            Z = np.empty((len(W), N_X + 1), dtype=complex)
            Z[:, :N_X] = U + 1.0j * (br["G_q"](U) + r[:, None] * br["h_q"](U))
            Z[:, N_X] = t + 1.0j * rd * br["h"](U)
            return Z

        def jac(W, br=br):
            W = np.atleast_2d(W)
            U, t = W[:, :-1], W[:, -1]
            m = len(W)
            r = rho_bottleneck(t, eps)
            rd = rho_bottleneck_d1(t, eps)
            rdd = rho_bottleneck_d2(t, eps)
            J = np.zeros((m, N_X + 1, dq + 1), dtype=complex)
            eye = np.eye(dq)[None, :, :]
            J[:, :N_X, :dq] = eye + 1.0j * (br["G_qq"](U) + r[:, None, None] * br["h_qq"](U))
            J[:, :N_X, dq] = 1.0j * rd[:, None] * br["h_q"](U)
            J[:, N_X, :dq] = 1.0j * rd[:, None] * br["h_q"](U)
            J[:, N_X, dq] = 1.0 + 1.0j * rdd * br["h"](U)
            return J

        bounds = np.vstack([base.bounds, [[-eps, eps]]])
        charts.append(Chart(f"branch{b}", bounds, fmap, jac=jac))

    imm = Immersion(ambient, charts, label=f"double_bottleneck(eps={eps})",
                    domain_dim=dq + 1)
    strips = {}
    for (qstar, b0, b1) in base.intersections:
        qstar = np.asarray(qstar, dtype=float)
        for t_star in (-delta, delta):
            w = np.concatenate([qstar, [t_star]])
            imm.known_self_intersections.append(
                (DomainPoint(b0, w), DomainPoint(b1, w)))
        h0 = base.branches[b0]["h"](np.atleast_2d(qstar))[0]
        h1 = base.branches[b1]["h"](np.atleast_2d(qstar))[0]
        strips[(b0, b1)] = {
            "dh": h1 - h0,
            "area": abs(rho_bottleneck(delta, eps) - rho_bottleneck(-delta, eps)) * abs(h1 - h0),
            "curves": (lambda t, hh=h0: t + 1.0j * rho_bottleneck_d1(t, eps) * hh,
                       lambda t, hh=h1: t + 1.0j * rho_bottleneck_d1(t, eps) * hh),
        }
    imm.meta = {"model": "double_bottleneck", "eps": eps, "delta": delta,
                "strips": strips}
    return imm


def _figure_eight_bottleneck(base: FigureEightBase, eps):
    """Double bottleneck of the figure eight with h = amp * cos(theta)."""
    E, amp = base.E, base.amp
    delta = eps / np.sqrt(3.0)
    rho_max = abs(rho_bottleneck(delta, eps))
    if rho_max * amp * 0.5 >= E / 8.0:
        raise ValueError("bottleneck amplitude too large: branches would collide")

    def fmap(W):
        W = np.atleast_2d(W)
        th, t = W[:, 0], W[:, 1]
        r, rd = rho_bottleneck(t, eps), rho_bottleneck_d1(t, eps)
        # branch move: p(phi) += rho * d/dphi [amp cos(phi/2 + ...)] = -rho*amp*sin(theta)/2
        z1 = 2.0 * th + 1.0j * ((E / 8.0) * np.sin(th) - 0.5 * r * amp * np.sin(th))
        z2 = t + 1.0j * rd * amp * np.cos(th)
        return np.stack([z1, z2], axis=1)

    def jac(W):
        W = np.atleast_2d(W)
        th, t = W[:, 0], W[:, 1]
        r = rho_bottleneck(t, eps)
        rd = rho_bottleneck_d1(t, eps)
        rdd = rho_bottleneck_d2(t, eps)
        J = np.empty((len(W), 2, 2), dtype=complex)
        J[:, 0, 0] = 2.0 + 1.0j * np.cos(th) * ((E / 8.0) - 0.5 * r * amp)
        J[:, 0, 1] = -0.5j * rd * amp * np.sin(th)
        J[:, 1, 0] = -1.0j * rd * amp * np.sin(th)
        J[:, 1, 1] = 1.0 + 1.0j * rdd * amp * np.cos(th)
        return J

    ambient = AmbientSpace(2, cobordism_slot=1, base_periods=(2.0 * np.pi, None))
    bounds = np.array([[0.0, 2.0 * np.pi], [-eps, eps]])
    imm = Immersion(ambient, [Chart("theta_t", bounds, fmap, jac=jac)],
                    label=f"figure_eight_bottleneck(E={E}, eps={eps})", domain_dim=2)
    for t_star in (-delta, delta):
        imm.known_self_intersections.append(
            (DomainPoint(0, np.array([0.0, t_star])),
             DomainPoint(0, np.array([np.pi, t_star]))))
    dh = amp * (np.cos(np.pi) - np.cos(0.0))  # h(pi) - h(0) = -2 amp
    imm.meta = {"model": "figure_eight_bottleneck", "E": E, "eps": eps,
                "delta": delta, "amp": amp,
                "strips": {(0, 1): {
                    "dh": dh,
                    "area": abs(rho_bottleneck(delta, eps) - rho_bottleneck(-delta, eps)) * abs(dh),
                    "curves": (lambda t: t + 1.0j * rho_bottleneck_d1(t, eps) * amp,
                               lambda t: t - 1.0j * rho_bottleneck_d1(t, eps) * amp),
                }}}
    return imm


# ---------------------------------------------------------------------------
# Double-bottlenecked surgery trace K^{k, n-k+1}_{A, B}
# ---------------------------------------------------------------------------
#
# The handle slice family {x_0^2 + sum s_c q_c^2 = c(t)} is presented by two
# branch generating functions over (q, t),
#
#     F_(+-)(q, t) = -(+-) (2/3) u^{3/2} + psi(t) eta(+-sqrt(u)),
#     u = c(t) - sum s_c q_c^2,
#
# so the total space is Lagrangian by construction.  c(t) freezes the slice
# level at 1 around the bottleneck and descends through 0 on the left
# (creating the single pi_R critical point, upward index k+1, and the
# embedded negative end).  eta is an odd C^2 plateau (0 near the fold,
# +-beta near the double-point preimages), psi' = (delta^2 - t^2) G(t) with
# G a smooth switch supported inside the c-descent, so the only transverse
# self-intersections are the doubled pair at t = +-delta.  The teardrop
# class areas are exact generating-function differences,
#     (4/3) c0^{3/2} - 2 beta psi(+-delta),
# and the bottleneck strip has area 2 beta (psi(delta) - psi(-delta)).
# A global rescale z -> mu z then realizes the requested (A, B).

_S5 = np.array([0.0, 0.0, 0.0, 10.0, -15.0, 6.0])       # quintic smoothstep
_S5D = np.polynomial.polynomial.polyder(_S5)


class _HandleProfiles:
    """Fixed unit-scale schedule for K_{A,B}; amplitude solved per (A, B)."""

    DELTA = 0.45
    S0, S1 = 0.5, 0.95            # eta transition band in |x_0|
    C1, C2 = 0.70, 1.45           # c descends over t in [-C2, -C1]
    DROP = 1.8                    # c goes from 1 down to 1 - DROP
    T_LO, T_HI = -1.60, 0.45
    SAFETY = 1.25

    def __init__(self):
        d = self.DELTA
        # place the G switch so that psi(-delta) = -psi(delta) (the spurious
        # -crossing budget is tightest at max |psi(+-delta)|, so balance them)
        lo, hi = -np.sqrt(3.0) * d - 0.05, -d - 0.08
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            self._set_rise(mid)
            if self.psi(np.array([-d]))[0] < -0.5 * self._delta_psi():
                lo = mid
            else:
                hi = mid
        self._set_rise(0.5 * (lo + hi))

    def _set_rise(self, g1):
        d = self.DELTA
        self.g1 = g1
        self.g0 = g1 - 0.06
        w = self.g1 - self.g0
        # psi on [g0, g1]: antiderivative of (d^2 - s^2) S5((s-g0)/w) in x
        lin = np.array([self.g0, w])      # s = g0 + w x
        quad = P.polysub(np.array([d * d]), P.polymul(lin, lin))
        integ = P.polymul(np.array([w]), P.polymul(quad, _S5))
        self.rise_antider = P.polyint(integ)
        self.psi_g1 = P.polyval(1.0, self.rise_antider)

    def _delta_psi(self):
        d = self.DELTA
        return float(self.psi(np.array([d]))[0] - self.psi(np.array([-d]))[0])

    # --- psi ---------------------------------------------------------
    def G(self, t):
        return pf.smoothstep((np.asarray(t, dtype=float) - self.g0) / (self.g1 - self.g0))

    def G_d1(self, t):
        return pf.smoothstep_d1((np.asarray(t, dtype=float) - self.g0) / (self.g1 - self.g0)) / (self.g1 - self.g0)

    def psi(self, t):
        t = np.asarray(t, dtype=float)
        d = self.DELTA
        w = self.g1 - self.g0
        out = np.zeros_like(t)
        mid = (t > self.g0) & (t < self.g1)
        out[mid] = P.polyval((t[mid] - self.g0) / w, self.rise_antider)
        hi = t >= self.g1
        out[hi] = (self.psi_g1 + d * d * (t[hi] - self.g1)
                   - (t[hi] ** 3 - self.g1 ** 3) / 3.0)
        return out

    def psi_d1(self, t):
        t = np.asarray(t, dtype=float)
        return (self.DELTA ** 2 - t * t) * self.G(t)

    def psi_d2(self, t):
        t = np.asarray(t, dtype=float)
        return -2.0 * t * self.G(t) + (self.DELTA ** 2 - t * t) * self.G_d1(t)

    # --- c -----------------------------------------------------------
    def c(self, t):
        t = np.asarray(t, dtype=float)
        W = self.C2 - self.C1
        return 1.0 - self.DROP * pf.smoothstep((-t - self.C1) / W)

    def c_d1(self, t):
        t = np.asarray(t, dtype=float)
        W = self.C2 - self.C1
        return (self.DROP / W) * pf.smoothstep_d1((-t - self.C1) / W)

    def c_d2(self, t):
        t = np.asarray(t, dtype=float)
        W = self.C2 - self.C1
        return -(self.DROP / W ** 2) * pf.smoothstep_d2((-t - self.C1) / W)

    def c_inverse(self, s):
        """t in the descent zone with c(t) = s (c is increasing in t there)."""
        s = np.asarray(s, dtype=float)
        lo = np.full_like(s, -self.C2)
        hi = np.full_like(s, -self.C1)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            too_low = self.c(mid) < s
            lo = np.where(too_low, mid, lo)
            hi = np.where(too_low, hi, mid)
        return 0.5 * (lo + hi)

    # --- eta (unit amplitude; scaled by beta) --------------------------
    def eta(self, x):
        return pf.odd_step(x, self.S0, self.S1)

    def eta_d1(self, x):
        return pf.odd_step_d1(x, self.S0, self.S1)

    def R(self, x):
        return pf.odd_step_ratio(x, self.S0, self.S1)

    def R_d1(self, x):
        x = np.asarray(x, dtype=float)
        w = self.S1 - self.S0
        d1 = pf.odd_step_d1(x, self.S0, self.S1)
        d2 = pf.smoothstep_d2((np.abs(x) - self.S0) / w) / w ** 2 * np.sign(x)
        out = np.zeros_like(d1)
        mask = np.abs(x) > 0.5 * self.S0
        np.divide(d2 * x - d1, x * x, out=out, where=mask)
        return out

    def beta_max(self):
        """Largest eta amplitude with no spurious branch crossings."""
        a = np.linspace(self.S0 + 1e-6, self.S1 - 1e-6, 2001)
        psi_ref = max(abs(self.psi(-self.DELTA)), abs(self.psi(self.DELTA)))
        ed = self.eta_d1(a)
        bound = np.min(2.0 * a * a / (psi_ref * np.maximum(ed, 1e-300)))
        return bound / self.SAFETY


def make_bottlenecked_handle(k, n, A, B):
    """Double-bottlenecked local surgery trace with teardrop area A and
    bottleneck strip area B.

    Positive slices (above the bottleneck pair) are immersed L^{k, n-k,+};
    slices below the unique pi_R critical point are embedded.  Exactly two
    transverse self-intersections, at cobordism parameter mu^2 * (+-delta).
    Supported area ratios: B/A up to roughly 0.45 (beyond that the
    bottleneck amplitude would create extra branch crossings).
    """
    if not (0 <= k <= n):
        raise ValueError("bottlenecked handle needs 0 <= k <= n")
    if A <= 0 or B <= 0:
        raise ValueError("areas A, B must be positive")
    prof = _HandleProfiles()
    d = prof.DELTA
    psi_m = prof.psi(-d)
    psi_p = prof.psi(d)
    dpsi = psi_p - psi_m
    ratio = B / A
    denom = dpsi + ratio * psi_m          # psi_m < 0
    if denom <= 0:
        raise ValueError(f"B/A = {ratio:.3f} outside the supported range")
    beta = (2.0 / 3.0) * ratio / denom
    bmax = prof.beta_max()
    if beta > bmax:
        raise ValueError(f"B/A = {ratio:.3f} outside the supported range "
                         f"(needs beta = {beta:.3f} > beta_max = {bmax:.3f})")
    B0 = 2.0 * beta * dpsi
    A0 = 4.0 / 3.0 - 2.0 * beta * psi_m
    mu2 = B / B0
    mu = np.sqrt(mu2)
    sig = _sigma(k, n)

    def p_q(x0, q, t):
        """(m, n) momenta of the q coordinates."""
        return sig[None, :] * q * (2.0 * x0 - beta * prof.psi(t) * prof.R(x0))[:, None]

    def p_t(x0, t):
        return (-x0 * prof.c_d1(t)
                + beta * prof.psi_d1(t) * prof.eta(x0)
                + 0.5 * beta * prof.psi(t) * prof.c_d1(t) * prof.R(x0))

    def embed_eval(X):
        """Full-coordinate evaluation, X = (x0, q_1..q_n, t), (m, n+2)."""
        X = np.atleast_2d(X)
        x0, q, t = X[:, 0], X[:, 1:n + 1], X[:, n + 1]
        Z = np.empty((len(X), n + 1), dtype=complex)
        Z[:, :n] = mu * (q + 1.0j * p_q(x0, q, t))
        Z[:, n] = mu * (t + 1.0j * p_t(x0, t))
        return Z

    def embed_jac(X):
        """(m, n+1, n+2) derivative of embed_eval in (x0, q, t)."""
        X = np.atleast_2d(X)
        m = len(X)
        x0, q, t = X[:, 0], X[:, 1:n + 1], X[:, n + 1]
        J = np.zeros((m, n + 1, n + 2), dtype=complex)
        psi, psid, psidd = prof.psi(t), prof.psi_d1(t), prof.psi_d2(t)
        cd, cdd = prof.c_d1(t), prof.c_d2(t)
        R, Rd = prof.R(x0), prof.R_d1(x0)
        eta, etad = prof.eta(x0), prof.eta_d1(x0)
        coef = (2.0 * x0 - beta * psi * R)
        J[:, :n, 0] = mu * 1.0j * sig[None, :] * q * (2.0 - beta * psi * Rd)[:, None]
        for c in range(n):
            J[:, c, c + 1] = mu * (1.0 + 1.0j * sig[c] * coef)
        J[:, :n, n + 1] = mu * 1.0j * sig[None, :] * q * (-beta * psid * R)[:, None]
        J[:, n, 0] = mu * 1.0j * (-cd + beta * psid * etad + 0.5 * beta * psi * cd * Rd)
        J[:, n, n + 1] = mu * (1.0 + 1.0j * (-x0 * cdd + beta * psidd * eta
                                             + 0.5 * beta * (psid * cd + psi * cdd) * R))
        return J

    margin = 1e-2
    qbox = 1.2
    charts = []

    # sign charts solving x0 from the level constraint
    for sgn, name in ((1.0, "x0+"), (-1.0, "x0-")):
        def lift(W, sgn=sgn):
            W = np.atleast_2d(W)
            q, t = W[:, :n], W[:, n]
            rad = prof.c(t) - np.sum(sig[None, :] * q * q, axis=1)
            X = np.empty((len(W), n + 2))
            X[:, 0] = sgn * np.sqrt(np.maximum(rad, 0.0))
            X[:, 1:n + 1] = q
            X[:, n + 1] = t
            return X

        def accept(W):
            W = np.atleast_2d(W)
            q, t = W[:, :n], W[:, n]
            rad = prof.c(t) - np.sum(sig[None, :] * q * q, axis=1)
            return rad > margin

        def fmap(W, lift=lift):
            return embed_eval(lift(W))

        def jac(W, lift=lift):
            W = np.atleast_2d(W)
            X = lift(W)
            x0, q = X[:, 0], X[:, 1:n + 1]
            dXdW = np.zeros((len(W), n + 2, n + 1))
            with np.errstate(divide="ignore", invalid="ignore"):
                dXdW[:, 0, :n] = -sig[None, :] * q / x0[:, None]
                dXdW[:, 0, n] = prof.c_d1(X[:, n + 1]) / (2.0 * x0)
            for c in range(n):
                dXdW[:, c + 1, c] = 1.0
            dXdW[:, n + 1, n] = 1.0
            return np.einsum("mcx,mxw->mcw", embed_jac(X), dXdW)

        bounds = np.vstack([np.array([[-qbox, qbox]] * n),
                            [[prof.T_LO, prof.T_HI]]])
        charts.append(Chart(name, bounds, fmap, jac=jac, accept=accept, embed=lift))

    # sign charts solving each q_j
    for j in range(n):
        for sgn in (1.0, -1.0):
            others = [l for l in range(n) if l != j]

            def lift(W, j=j, sgn=sgn, others=others):
                W = np.atleast_2d(W)
                x0 = W[:, 0]
                qo = W[:, 1:n]
                t = W[:, n]
                rad = (prof.c(t) - x0 * x0
                       - np.sum(sig[None, others] * qo * qo, axis=1)) / sig[j]
                X = np.empty((len(W), n + 2))
                X[:, 0] = x0
                X[:, 1 + np.array(others, dtype=int)] = qo
                X[:, 1 + j] = sgn * np.sqrt(np.maximum(rad, 0.0))
                X[:, n + 1] = t
                return X

            def accept(W, j=j, others=others):
                W = np.atleast_2d(W)
                x0, qo, t = W[:, 0], W[:, 1:n], W[:, n]
                rad = (prof.c(t) - x0 * x0
                       - np.sum(sig[None, others] * qo * qo, axis=1)) / sig[j]
                return rad > margin

            def jac(W, j=j, others=others, lift=lift):
                W = np.atleast_2d(W)
                X = lift(W)
                qj = X[:, 1 + j]
                dXdW = np.zeros((len(W), n + 2, n + 1))
                dXdW[:, 0, 0] = 1.0
                with np.errstate(divide="ignore", invalid="ignore"):
                    dXdW[:, 1 + j, 0] = -X[:, 0] / (sig[j] * qj)
                    for col, l in enumerate(others):
                        dXdW[:, 1 + l, 1 + col] = 1.0
                        dXdW[:, 1 + j, 1 + col] = -sig[l] * X[:, 1 + l] / (sig[j] * qj)
                    dXdW[:, n + 1, n] = 1.0
                    dXdW[:, 1 + j, n] = prof.c_d1(X[:, n + 1]) / (2.0 * sig[j] * qj)
                return np.einsum("mcx,mxw->mcw", embed_jac(X), dXdW)

            bounds = np.vstack([np.array([[-1.05, 1.05]]),
                                np.array([[-qbox, qbox]] * (n - 1)).reshape(n - 1, 2),
                                np.array([[prof.T_LO, prof.T_HI]])])
            charts.append(Chart(f"q{j}{'+' if sgn > 0 else '-'}", bounds,
                                lambda W, lift=lift: embed_eval(lift(W)),
                                jac=jac, accept=accept, embed=lift))

    # tip chart solving t through the critical point
    def lift_T(W):
        W = np.atleast_2d(W)
        x0, q = W[:, 0], W[:, 1:n + 1]
        s = x0 * x0 + np.sum(sig[None, :] * q * q, axis=1)
        X = np.empty((len(W), n + 2))
        X[:, 0] = x0
        X[:, 1:n + 1] = q
        X[:, n + 1] = prof.c_inverse(s)
        return X

    def accept_T(W):
        W = np.atleast_2d(W)
        x0, q = W[:, 0], W[:, 1:n + 1]
        s = x0 * x0 + np.sum(sig[None, :] * q * q, axis=1)
        return (s > 1.0 - prof.DROP + margin) & (s < 1.0 - margin)

    def jac_T(W):
        W = np.atleast_2d(W)
        X = lift_T(W)
        x0, q, t = X[:, 0], X[:, 1:n + 1], X[:, n + 1]
        cd = prof.c_d1(t)
        dXdW = np.zeros((len(W), n + 2, n + 1))
        dXdW[:, 0, 0] = 1.0
        for c in range(n):
            dXdW[:, c + 1, c + 1] = 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            dXdW[:, n + 1, 0] = 2.0 * x0 / cd
            dXdW[:, n + 1, 1:] = 2.0 * sig[None, :] * q / cd[:, None]
        return np.einsum("mcx,mxw->mcw", embed_jac(X), dXdW)

    bounds_T = np.vstack([[[-1.05, 1.05]], np.array([[-qbox, qbox]] * n)])
    charts.append(Chart("tip", bounds_T, lambda W: embed_eval(lift_T(W)),
                        jac=jac_T, accept=accept_T, embed=lift_T))

    ambient = AmbientSpace(n + 1, cobordism_slot=n)
    imm = Immersion(ambient, charts, label=f"bottlenecked_handle(k={k}, n={n}, A={A}, B={B})",
                    domain_dim=n + 1)
    for t_star in (-d, d):
        w = np.concatenate([np.zeros(n), [t_star]])
        imm.known_self_intersections.append(
            (DomainPoint(0, w.copy()), DomainPoint(1, w.copy())))
    t_crit = float(prof.c_inverse(np.array([0.0]))[0])
    imm.seeds = [DomainPoint(len(charts) - 1, np.zeros(n + 1))]
    imm.meta = {
        "model": "bottlenecked_handle", "k": k, "n": n, "A": A, "B": B,
        "mu2": mu2, "beta": beta, "delta": d, "t_crit": t_crit,
        "teardrop_area_inner": mu2 * (4.0 / 3.0 - 2.0 * beta * psi_m),
        "teardrop_area_outer": mu2 * (4.0 / 3.0 - 2.0 * beta * psi_p),
        "strip_area": mu2 * B0,
        "strip_curves": (lambda t: mu * (t + 1.0j * beta * prof.psi_d1(t)),
                         lambda t: mu * (t - 1.0j * beta * prof.psi_d1(t))),
        "strip_window": (-d, d),
        "profiles": prof,
        "critical_values": (mu2 * t_crit,),
    }
    imm.meta["teardrop_paths"] = _handle_teardrop_paths(imm, k, n, prof)
    return imm


def _handle_teardrop_paths(imm, k, n, prof):
    """Piecewise domain paths from one double-point preimage to the other.

    For k >= 1 the path is the (x_0, q_1) circle inside the slice t = t*;
    for k = 0 the slice is disconnected and the path runs through the
    handle critical point (t-excursion at q = 0).
    Each segment is (chart_index, curve: s in [0,1] -> chart coords).
    """
    d = prof.DELTA
    paths = {}
    chart_names = [ch.name for ch in imm.charts]

    def idx(name):
        return chart_names.index(name)

    for copy_name, t_star in (("inner", -d), ("outer", d)):
        if k >= 1:
            segs = []

            def seg_x0p(s, t_star=t_star):
                phi = (3.0 * np.pi / 8.0) * np.asarray(s, dtype=float)
                W = np.zeros((len(np.atleast_1d(phi)), n + 1))
                W[:, 0] = np.sin(phi)
                W[:, n] = t_star
                return W

            def seg_q1(s, t_star=t_star):
                phi = 3.0 * np.pi / 8.0 + (np.pi / 4.0) * np.asarray(s, dtype=float)
                W = np.zeros((len(np.atleast_1d(phi)), n + 1))
                W[:, 0] = np.cos(phi)
                W[:, n] = t_star
                return W

            def seg_x0m(s, t_star=t_star):
                phi = 5.0 * np.pi / 8.0 + (3.0 * np.pi / 8.0) * np.asarray(s, dtype=float)
                W = np.zeros((len(np.atleast_1d(phi)), n + 1))
                W[:, 0] = np.sin(phi)
                W[:, n] = t_star
                return W

            segs = [(idx("x0+"), seg_x0p), (idx("q0+"), seg_q1), (idx("x0-"), seg_x0m)]
        else:
            t_a = float(prof.c_inverse(np.array([0.5]))[0])
            xa = np.sqrt(0.5)

            def seg_down(s, t_star=t_star, t_a=t_a):
                t = t_star + (t_a - t_star) * np.asarray(s, dtype=float)
                W = np.zeros((len(np.atleast_1d(t)), n + 1))
                W[:, n] = t
                return W

            def seg_tip(s, xa=xa):
                x0 = xa - 2.0 * xa * np.asarray(s, dtype=float)
                W = np.zeros((len(np.atleast_1d(x0)), n + 1))
                W[:, 0] = x0
                return W

            def seg_up(s, t_star=t_star, t_a=t_a):
                t = t_a + (t_star - t_a) * np.asarray(s, dtype=float)
                W = np.zeros((len(np.atleast_1d(t)), n + 1))
                W[:, n] = t
                return W

            segs = [(idx("x0+"), seg_down), (idx("tip"), seg_tip), (idx("x0-"), seg_up)]
        paths[copy_name] = segs
    return paths
