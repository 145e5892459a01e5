"""Numerical oracles: Lagrangian-condition checks, slicing, critical points,
self-intersection search, area quadrature, Hofer norms, and the explicit
holomorphic teardrop of the Whitney sphere.

Conventions (fixed across the package): finite-difference step 1e-5
(central), Newton tolerance 1e-10 with at most 50 iterations, domain
deduplication radius 1e-6, Gauss-Legendre quadrature refined until
successive estimates differ by < 1e-9.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ambient import pullback_residual
from .immersion import DomainPoint, Immersion, fd_jacobian
from . import models

__all__ = [
    "LagrangianReport", "CriticalPoint", "Teardrop",
    "check_lagrangian", "slice_points", "critical_points",
    "find_self_intersections", "shadow_area", "hofer_norm",
    "make_teardrop", "verify_teardrop", "gauss_adaptive",
    "line_integral_pdq", "segment_area", "flux_residual",
    "truncation_modification_hofer", "strip_area_quadrature",
    "teardrop_area_quadrature",
]

NEWTON_TOL = 1e-10
NEWTON_MAXIT = 50
DEDUP_RADIUS = 1e-6
QUAD_TOL = 1e-9


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

def gauss_adaptive(f, a, b, tol=QUAD_TOL, max_level=14):
    """Adaptive Gauss-Legendre: refine panel count until stable within tol."""
    prev = None
    panels = 4
    for _ in range(max_level):
        xs, ws = np.polynomial.legendre.leggauss(16)
        edges = np.linspace(a, b, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        nodes = (mid[:, None] + half[:, None] * xs[None, :]).ravel()
        weights = (half[:, None] * ws[None, :]).ravel()
        val = float(np.sum(weights * f(nodes)))
        if prev is not None and abs(val - prev) < tol:
            return val
        prev = val
        panels *= 2
    return prev


def segment_area(curve, n_check=3):
    """Signed Green area (1/2) oint (x dy - y dx) contribution of a segment.

    curve: s in [0,1] -> complex, smooth; derivative by central differences.
    """
    h = 1e-6

    def integrand(s):
        z = curve(s)
        dz = (curve(np.minimum(s + h, 1.0)) - curve(np.maximum(s - h, 0.0))) / (
            np.minimum(s + h, 1.0) - np.maximum(s - h, 0.0))
        return 0.5 * (z.real * dz.imag - z.imag * dz.real)

    return gauss_adaptive(integrand, 0.0, 1.0)


def line_integral_pdq(imm: Immersion, segments, h=1e-6):
    """Integral of the Liouville form sum_c p_c dq_c along a domain path.

    segments: list of (chart_index, curve) with curve: s in [0,1] -> chart
    coordinates (m, d).  Exact on exact Lagrangians: the value equals the
    generating-function difference, independent of the path within a branch.
    """
    total = 0.0
    for ci, curve in segments:
        def integrand(s, ci=ci, curve=curve):
            s = np.asarray(s, dtype=float)
            W = curve(s)
            Z = imm.charts[ci].fmap(W)
            sp = np.minimum(s + h, 1.0)
            sm = np.maximum(s - h, 0.0)
            dZ = (imm.charts[ci].fmap(curve(sp)) - imm.charts[ci].fmap(curve(sm)))
            dZ = dZ / (sp - sm)[:, None]
            return np.sum(Z.imag * dZ.real, axis=1)

        total += gauss_adaptive(integrand, 0.0, 1.0)
    return total


# ---------------------------------------------------------------------------
# Lagrangian condition
# ---------------------------------------------------------------------------

@dataclass
class LagrangianReport:
    max_residual: float
    worst_point: DomainPoint
    samples: int
    mode: str

    @property
    def passed(self):
        return self.max_residual < (1e-6 if self.mode == "analytic" else 1e-4)


def check_lagrangian(imm: Immersion, n_samples=10000, tol=None, mode=None, seed=0):
    """Max over samples of the Frobenius norm of the pulled-back form.

    mode 'analytic' uses the registered Jacobians, 'fd' central differences
    with h = 1e-5; default picks analytic when available.
    """
    if mode is None:
        mode = "analytic" if imm.has_analytic_jac else "fd"
    ids, U = imm.sample(n_samples, seed=seed)
    worst = -1.0
    worst_pt = None
    for ci in np.unique(ids):
        sel = ids == ci
        ch = imm.charts[ci]
        J = ch.jac(U[sel]) if mode == "analytic" else fd_jacobian(ch.fmap, U[sel])
        res = pullback_residual(J)
        if not np.all(np.isfinite(res)):
            bad = np.where(~np.isfinite(res))[0][0]
            raise ArithmeticError(
                f"evaluation failed at {DomainPoint(ci, U[sel][bad])}")
        i = int(np.argmax(res))
        if res[i] > worst:
            worst = float(res[i])
            worst_pt = DomainPoint(ci, U[sel][i])
    return LagrangianReport(worst, worst_pt, len(U), mode)


def flux_residual(h: models.HomotopyWithPrimitive, n_samples=400, nt=9, seed=0):
    """Check dH_t = iota_{d/dt i_t} omega restricted to the slice (by FD in q).

    Returns the max absolute mismatch between H_q and omega(di/dq, di/dt).
    """
    members = models._family_members(h)
    t0, t1 = h.t_range
    worst = 0.0
    for ci, qch in enumerate(h.q_charts):
        slice_map, sjq, sjt, H, H_q, H_t = members[ci]
        lo, hi = qch.bounds[:, 0], qch.bounds[:, 1]
        U = lo[None, :] + (hi - lo)[None, :] * np.random.default_rng(seed + ci).random(
            (n_samples, qch.dim))
        if qch.accept is not None:
            U = U[qch.accept(U)]
        for t in np.linspace(t0 + 1e-3, t1 - 1e-3, nt):
            Jq = sjq(U, t)
            Jt = sjt(U, t)
            flux = np.einsum("mcu,mc->mu", np.conj(Jq), Jt).imag
            worst = max(worst, float(np.max(np.abs(H_q(U, t) - flux))))
    return worst


# ---------------------------------------------------------------------------
# Slices
# ---------------------------------------------------------------------------

def _pi_R(imm, ci, U):
    return imm.charts[ci].fmap(U)[:, imm.ambient.cobordism_slot].real


def _pi_R_grad(imm, ci, U):
    J = imm.charts[ci].jac(U)
    return J[:, imm.ambient.cobordism_slot, :].real


def slice_points(imm: Immersion, t, n_samples=2000, seed=0, crit_tol=1e-6):
    """Points of K with pi_R = t, by 1-D Newton along the pi_R gradient.

    Returns (domain_points, images); raises when t is within crit_tol of a
    registered critical value.  The registered analytic slice model (when
    one exists) is available as imm.slice_model(t).
    """
    slot = imm.ambient.cobordism_slot
    if slot is None:
        raise ValueError("immersion has no cobordism factor")
    for tc in imm.meta.get("critical_values", ()):
        if abs(t - tc) < crit_tol:
            raise ValueError(f"{t} is within {crit_tol} of critical value {tc}")
    ids, U = imm.sample(n_samples, seed=seed)
    pts = []
    images = []
    for ci in np.unique(ids):
        sel = ids == ci
        V = U[sel].copy()
        ok = np.ones(len(V), dtype=bool)
        for _ in range(NEWTON_MAXIT):
            f = _pi_R(imm, ci, V) - t
            if np.max(np.abs(f[ok])) < 1e-12:
                break
            g = _pi_R_grad(imm, ci, V)
            gn = np.sum(g * g, axis=1)
            ok &= gn > 1e-14
            V[ok] -= (f[ok] / gn[ok])[:, None] * g[ok]
        f = _pi_R(imm, ci, V) - t
        ok &= np.abs(f) < 1e-10
        ch = imm.charts[ci]
        if ch.hard_bounds:
            ok &= np.all((V >= ch.bounds[None, :, 0] - 1e-9)
                         & (V <= ch.bounds[None, :, 1] + 1e-9), axis=1)
        if ch.accept is not None:
            ok &= ch.accept(V)
        for v in V[ok]:
            pts.append(DomainPoint(ci, v))
        if np.any(ok):
            images.append(imm.charts[ci].fmap(V[ok]))
    images = np.vstack(images) if images else np.zeros((0, imm.ambient.n_complex), dtype=complex)
    return pts, images


# ---------------------------------------------------------------------------
# Critical points of pi_R
# ---------------------------------------------------------------------------

@dataclass
class CriticalPoint:
    location: DomainPoint
    value: float
    upward_index: int | None
    hessian_eigen_signs: list = field(default_factory=list)
    degenerate: bool = False


def _hessian_fd(imm, ci, u, h=1e-5):
    d = len(u)
    H = np.zeros((d, d))
    for j in range(d):
        up = u.copy()
        um = u.copy()
        up[j] += h
        um[j] -= h
        H[:, j] = (_pi_R_grad(imm, ci, up[None, :])[0]
                   - _pi_R_grad(imm, ci, um[None, :])[0]) / (2.0 * h)
    return 0.5 * (H + H.T)


def critical_points(imm: Immersion, n_seeds=64, seed=0, grad_tol=1e-8,
                    degenerate_tol=1e-6):
    """Newton-refined critical points of pi_R with upward Morse indices.

    The upward index counts positive Hessian eigenvalues (dimension of the
    upward flow space); near-zero eigenvalues flag the point degenerate.
    """
    slot = imm.ambient.cobordism_slot
    if slot is None:
        raise ValueError("immersion has no cobordism factor")
    seeds = list(imm.seeds or [])
    ids, U = imm.sample(n_seeds, seed=seed)
    seeds += [DomainPoint(ci, u) for ci, u in zip(ids, U)]

    found = []
    for s in seeds:
        ci, u = s.chart, np.array(s.u, dtype=float)
        ok = False
        for _ in range(NEWTON_MAXIT):
            g = _pi_R_grad(imm, ci, u[None, :])[0]
            if np.linalg.norm(g) < NEWTON_TOL:
                ok = True
                break
            H = _hessian_fd(imm, ci, u)
            # least squares handles Morse-Bott degenerate directions
            du = np.linalg.lstsq(H, -g, rcond=None)[0]
            if not np.all(np.isfinite(du)):
                break
            if np.linalg.norm(du) > 1.0:
                du *= 1.0 / np.linalg.norm(du)
            u = u + du
        if not ok:
            continue
        ch = imm.charts[ci]
        if ch.hard_bounds and (np.any(u < ch.bounds[:, 0] - 1e-9)
                               or np.any(u > ch.bounds[:, 1] + 1e-9)):
            continue
        if ch.hard_bounds and ch.accept is not None and not ch.accept(u[None, :])[0]:
            continue
        if np.linalg.norm(_pi_R_grad(imm, ci, u[None, :])[0]) > grad_tol:
            continue
        emb = imm.embed_domain(DomainPoint(ci, u))
        if any(np.linalg.norm(emb - f[0]) < DEDUP_RADIUS for f in found):
            continue
        H = _hessian_fd(imm, ci, u)
        eigs = np.linalg.eigvalsh(H)
        degenerate = bool(np.min(np.abs(eigs)) < degenerate_tol)
        signs = [int(np.sign(e)) if abs(e) >= degenerate_tol else 0 for e in eigs]
        idx = None if degenerate else int(np.sum(eigs > 0))
        found.append((emb, CriticalPoint(DomainPoint(ci, u),
                                         float(_pi_R(imm, ci, u[None, :])[0]),
                                         idx, signs, degenerate)))
    return [cp for _, cp in sorted(found, key=lambda f: f[1].value)]


# ---------------------------------------------------------------------------
# Self-intersections
# ---------------------------------------------------------------------------

def _ambient_diff(imm, Z1, Z2):
    """Coordinatewise difference with periodic real parts reduced."""
    diff = Z1 - Z2
    bp = imm.ambient.base_periods
    if bp is not None:
        for c, per in enumerate(bp):
            if per is not None:
                re = diff[..., c].real
                diff[..., c] = re - per * np.round(re / per) + 1j * diff[..., c].imag
    return diff


def find_self_intersections(imm: Immersion, n_seed_pairs=400, separation=1e-2,
                            seed=0, tol=1e-9, include_registered=True):
    """Ordered self-intersections (p -> q) by Gauss-Newton on i(u) = i(v).

    Seed-based and therefore probabilistic in completeness; the registered
    analytic double points of the standard models are always included.
    Each geometric double point yields both orderings.
    """
    if separation <= 0:
        raise ValueError("separation must be positive")
    geometric = []

    def try_add(p, q):
        ep, eq = imm.embed_domain(p), imm.embed_domain(q)
        if np.linalg.norm(ep - eq) < separation:
            return
        for (p2, q2) in geometric:
            e2p, e2q = imm.embed_domain(p2), imm.embed_domain(q2)
            if ((np.linalg.norm(ep - e2p) < 10 * DEDUP_RADIUS and
                 np.linalg.norm(eq - e2q) < 10 * DEDUP_RADIUS) or
                (np.linalg.norm(ep - e2q) < 10 * DEDUP_RADIUS and
                 np.linalg.norm(eq - e2p) < 10 * DEDUP_RADIUS)):
                return
        geometric.append((p, q))

    if include_registered:
        for (p, q) in imm.known_self_intersections:
            zp = imm.eval(p)
            zq = imm.eval(q)
            d = np.linalg.norm(_ambient_diff(imm, zp[None, :], zq[None, :]))
            if d < 1e-7:
                try_add(p, q)

    ids, U = imm.sample(2 * n_seed_pairs, seed=seed)
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(U))
    pairs = [(order[2 * i], order[2 * i + 1]) for i in range(len(U) // 2)]

    for (ia, ib) in pairs[:n_seed_pairs]:
        ca, cb = int(ids[ia]), int(ids[ib])
        ua, ub = U[ia].copy(), U[ib].copy()
        converged = False
        for _ in range(NEWTON_MAXIT):
            za = imm.charts[ca].fmap(ua[None, :])[0]
            zb = imm.charts[cb].fmap(ub[None, :])[0]
            r = _ambient_diff(imm, za[None, :], zb[None, :])[0]
            rflat = np.concatenate([r.real, r.imag])
            if not np.all(np.isfinite(rflat)):
                break
            if np.linalg.norm(rflat) < tol:
                converged = True
                break
            Ja = imm.charts[ca].jac(ua[None, :])[0]
            Jb = imm.charts[cb].jac(ub[None, :])[0]
            Jfull = np.hstack([
                np.vstack([Ja.real, Ja.imag]),
                np.vstack([-Jb.real, -Jb.imag])])
            if not np.all(np.isfinite(Jfull)):
                break
            try:
                step = np.linalg.lstsq(Jfull, -rflat, rcond=None)[0]
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(step)):
                break
            nrm = np.linalg.norm(step)
            if nrm > 0.5:
                step *= 0.5 / nrm
            ua = ua + step[:len(ua)]
            ub = ub + step[len(ua):]
        if not converged:
            continue
        oka = _in_chart(imm, ca, ua)
        okb = _in_chart(imm, cb, ub)
        if oka and okb:
            try_add(DomainPoint(ca, ua), DomainPoint(cb, ub))

    ordered = []
    for (p, q) in geometric:
        ordered.append((p, q))
        ordered.append((q, p))
    return ordered


def _in_chart(imm, ci, u):
    ch = imm.charts[ci]
    if not ch.hard_bounds:
        return True
    if np.any(u < ch.bounds[:, 0] - 1e-6) or np.any(u > ch.bounds[:, 1] + 1e-6):
        return False
    if ch.accept is not None and not ch.accept(u[None, :])[0]:
        return False
    return True


# ---------------------------------------------------------------------------
# Areas and norms
# ---------------------------------------------------------------------------

def shadow_area(imm: Immersion, method="boundary-integral", n_samples=20000,
                grid=None, seed=0):
    """Area of the shadow projection.

    boundary-integral mode uses the model's registered lobe boundary curves
    and reports (lobe_areas, total); monte-carlo mode rasterizes projected
    samples on a grid (resolution-limited; warns below 10^3 samples).
    """
    if method == "boundary-integral":
        if not imm.shadow_lobes:
            if imm.family is not None:
                return _shadow_suspension(imm)
            raise ValueError("no registered shadow boundary for this model")
        lobes = []
        for segments in imm.shadow_lobes:
            area = sum(segment_area(c) for c in segments)
            lobes.append(abs(area))
        return {"lobes": lobes, "total": float(np.sum(lobes))}
    if method == "monte-carlo":
        import warnings
        if n_samples < 1000:
            warnings.warn("monte-carlo shadow area with < 1e3 samples is coarse")
        ids, U = imm.sample(n_samples, seed=seed)
        Z = imm.eval_batch(ids, U)
        slot = imm.ambient.cobordism_slot
        w = Z[:, slot] if slot is not None else Z[:, 0]
        x, y = w.real, w.imag
        if grid is None:
            # keep ~10 samples per occupied cell so interior cells fill up
            grid = max(16, int(np.sqrt(len(x) / 10.0)))
        pad = 1e-9
        H, xe, ye = np.histogram2d(x, y, bins=grid,
                                   range=[[x.min() - pad, x.max() + pad],
                                          [y.min() - pad, y.max() + pad]])
        cell = (xe[1] - xe[0]) * (ye[1] - ye[0])
        total = float(np.count_nonzero(H) * cell)
        return {"lobes": [total], "total": total}
    raise ValueError(f"unknown method {method!r}")


def _shadow_suspension(imm: Immersion, nt=400, nq=4000):
    """Shadow of a suspension: integral over t of the oscillation of the
    suspension's imaginary part, with per-t extrema from dense sampling."""
    fam = imm.family
    members = models._family_members(fam)
    t0, t1 = fam.t_range

    def extrema(t):
        hi, lo = -np.inf, np.inf
        for ci, qch in enumerate(fam.q_charts):
            H = members[ci][3]
            lob, hib = qch.bounds[:, 0], qch.bounds[:, 1]
            rng = np.random.default_rng(11)
            U = lob[None, :] + (hib - lob)[None, :] * rng.random((nq, qch.dim))
            if qch.accept is not None:
                U = U[qch.accept(U)]
            vals = H(U, t)
            hi = max(hi, float(np.max(vals)))
            lo = min(lo, float(np.min(vals)))
        return hi - lo

    def f(ts):
        return np.array([extrema(t) for t in np.atleast_1d(ts)])

    xs, ws = np.polynomial.legendre.leggauss(64)
    nodes = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * xs
    vals = f(nodes)
    total = float(np.sum(0.5 * (t1 - t0) * ws * vals))
    return {"lobes": [total], "total": total}


def hofer_norm(h: models.HomotopyWithPrimitive, nq=20000, quad_order=64, seed=3):
    """Quadrature of int (sup_q H_t - inf_q H_t) dt over the family support."""
    members = models._family_members(h)
    t0, t1 = h.t_range
    samples = []
    for ci, qch in enumerate(h.q_charts):
        rng = np.random.default_rng(seed + ci)
        lo, hi = qch.bounds[:, 0], qch.bounds[:, 1]
        U = lo[None, :] + (hi - lo)[None, :] * rng.random((nq, qch.dim))
        if qch.accept is not None:
            U = U[qch.accept(U)]
        samples.append((ci, U))

    def osc(ts):
        out = []
        for t in np.atleast_1d(ts):
            hi, lo = -np.inf, np.inf
            for ci, U in samples:
                vals = members[ci][3](U, t)
                hi = max(hi, float(np.max(vals)))
                lo = min(lo, float(np.min(vals)))
            out.append(hi - lo)
        return np.array(out)

    xs, ws = np.polynomial.legendre.leggauss(quad_order)
    nodes = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * xs
    return float(np.sum(0.5 * (t1 - t0) * ws * osc(nodes)))


def truncation_modification_hofer(h: models.HomotopyWithPrimitive, eps,
                                  nq=4000, nt=41, ns=33, seed=5):
    """Hofer norm of the exact homotopy realizing the truncation at 0.

    The suspension over s has primitive (d rho / d s)(t, s) H_{rho(t,s)}(q);
    the paper's estimate bounds the norm by 2 eps (sup H - inf H).
    """
    from .profiles import truncation_profile, truncation_profile_ds
    members = models._family_members(h)
    samples = []
    for ci, qch in enumerate(h.q_charts):
        rng = np.random.default_rng(seed + ci)
        lo, hi = qch.bounds[:, 0], qch.bounds[:, 1]
        U = lo[None, :] + (hi - lo)[None, :] * rng.random((nq, qch.dim))
        if qch.accept is not None:
            U = U[qch.accept(U)]
        samples.append((ci, U))
    ts = np.linspace(-eps, eps, nt)

    def osc_s(s):
        hi, lo = -np.inf, np.inf
        for t in ts:
            r = float(truncation_profile(t, s, eps))
            dr = float(truncation_profile_ds(t, s, eps))
            for ci, U in samples:
                vals = dr * members[ci][3](U, r)
                hi = max(hi, float(np.max(vals)))
                lo = min(lo, float(np.min(vals)))
        return hi - lo

    svals = np.linspace(0.0, 1.0, ns)
    osc = np.array([osc_s(s) for s in svals])
    norm = float(np.trapezoid(osc, svals))

    hsup, hinf = -np.inf, np.inf
    for t in ts:
        for ci, U in samples:
            vals = members[ci][3](U, t)
            hsup = max(hsup, float(np.max(vals)))
            hinf = min(hinf, float(np.min(vals)))
    bound = 2.0 * eps * (hsup - hinf)
    return norm, bound


def strip_area_quadrature(imm: Immersion, key=None):
    """Area between the two bottleneck curves by quadrature of their gap."""
    meta = imm.meta
    if "strips" in meta:
        strips = meta["strips"]
        key = key if key is not None else next(iter(strips))
        upper, lower = strips[key]["curves"]
        d = meta["delta"]
    else:
        upper, lower = meta["strip_curves"]
        d = meta["delta"]

    h = 1e-6

    def gap_dx(t):
        # integrate (y_upper - y_lower) dx along the strip window
        dx = (upper(t + h).real - upper(t - h).real) / (2.0 * h)
        return np.abs(upper(t).imag - lower(t).imag) * np.abs(dx)

    return gauss_adaptive(gap_dx, -d, d)


def teardrop_area_quadrature(imm: Immersion, copy="inner"):
    """Teardrop-class area on the bottlenecked handle via the Liouville form."""
    segs = imm.meta["teardrop_paths"][copy]
    return abs(line_integral_pdq(imm, segs))


# ---------------------------------------------------------------------------
# The Whitney teardrop
# ---------------------------------------------------------------------------

@dataclass
class Teardrop:
    p: np.ndarray
    r: float
    n: int

    def map(self, z):
        """u_p(z) = (p_1 z, ..., p_n z)."""
        z = np.asarray(z, dtype=complex)
        return z[..., None] * self.p[None, :]

    def boundary(self, a, sign):
        """Boundary arcs z = a + 2i a sqrt(r^2 - a^2) of the teardrop domain."""
        a = np.asarray(a, dtype=float)
        return a + 2.0j * sign * a * np.sqrt(np.maximum(self.r ** 2 - a * a, 0.0))


def make_teardrop(p, r=1.0):
    """Holomorphic teardrop through the equator point p of the Whitney sphere."""
    p = np.asarray(p, dtype=float)
    if abs(np.linalg.norm(p) - 1.0) > 1e-12:
        raise ValueError("equator point must be a unit vector")
    return Teardrop(p=p, r=float(r), n=len(p))


def verify_teardrop(td: Teardrop, n_boundary=200):
    """(boundary_residual, area): distance of u_p(dD) to the Whitney sphere
    image, and the symplectic area of the teardrop by Green quadrature."""
    sphere = models.make_whitney_sphere(td.n, td.r)

    a = np.linspace(0.0, td.r, n_boundary)
    worst = 0.0
    for sign in (+1.0, -1.0):
        z = td.boundary(a, sign)
        pts = td.map(z)
        # sphere preimage: x_0 = sign*sqrt(r^2-a^2), x_i = a p_i
        x = np.empty((n_boundary, td.n + 1))
        x[:, 0] = sign * np.sqrt(np.maximum(td.r ** 2 - a * a, 0.0))
        x[:, 1:] = a[:, None] * td.p[None, :]
        ref = models._whitney_ambient_map(x, td.n)
        worst = max(worst, float(np.max(np.abs(pts - ref))))

    def boundary_loop(s):
        # q = r sin(theta), p = r^2 sin(2 theta): smooth through the fold
        th = np.pi * np.asarray(s, dtype=float)
        return td.r * np.sin(th) + 1.0j * td.r ** 2 * np.sin(2.0 * th)

    area = abs(segment_area(boundary_loop))
    return worst, area
