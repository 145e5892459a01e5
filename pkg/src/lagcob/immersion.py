"""Chart-based parameterized immersions into products of complex lines.

An Immersion is a collection of charts.  Each chart owns a sampling box in
R^d, a smooth map into C^N (batched over points), an optional analytic
Jacobian, an optional acceptance predicate (used e.g. to reject the
overlap double-count between hemisphere charts), and an embedding of chart
coordinates into a canonical domain model (used for deduplication and
separation tests across charts).

Evaluation maps are pure; immersions are immutable after construction.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import qmc

from .ambient import AmbientSpace

__all__ = ["Chart", "Immersion", "DomainPoint", "fd_jacobian"]

FD_STEP = 1e-5


def fd_jacobian(fmap, U, h=FD_STEP):
    """Central-difference Jacobian of a batched map U (m,d) -> C^N (m,N)."""
    U = np.atleast_2d(np.asarray(U, dtype=float))
    m, d = U.shape
    probe = fmap(U[:1])
    N = probe.shape[1]
    J = np.empty((m, N, d), dtype=complex)
    for j in range(d):
        Up = U.copy()
        Um = U.copy()
        Up[:, j] += h
        Um[:, j] -= h
        J[:, :, j] = (fmap(Up) - fmap(Um)) / (2.0 * h)
    return J


class Chart:
    def __init__(self, name, bounds, fmap, jac=None, accept=None, embed=None,
                 hard_bounds=True):
        self.name = name
        self.bounds = np.asarray(bounds, dtype=float)  # (d, 2)
        self.fmap = fmap
        self._jac = jac
        self.accept = accept
        self.embed = embed  # chart coords -> canonical domain coords
        self.hard_bounds = hard_bounds  # False: bounds are a sampling box only
        self.dim = self.bounds.shape[0]

    def jac(self, U):
        if self._jac is not None:
            return self._jac(np.atleast_2d(np.asarray(U, dtype=float)))
        return fd_jacobian(self.fmap, U)

    @property
    def has_analytic_jac(self):
        return self._jac is not None


class DomainPoint:
    """A point of the immersion domain: chart index plus chart coordinates."""

    __slots__ = ("chart", "u")

    def __init__(self, chart, u):
        self.chart = int(chart)
        self.u = np.asarray(u, dtype=float)

    def __repr__(self):
        return f"DomainPoint(chart={self.chart}, u={np.round(self.u, 6).tolist()})"


class Immersion:
    """A smooth parameterized map from a labeled domain into C^N.

    Extra model data (registered self-intersections, shadow boundary lobes,
    suspension family structure, critical-point seeds) is attached by the
    constructors in lagcob.models and consumed by the oracles in
    lagcob.verify.
    """

    def __init__(self, ambient: AmbientSpace, charts, label, domain_dim=None):
        self.ambient = ambient
        self.charts = list(charts)
        self.label = label
        self.domain_dim = domain_dim if domain_dim is not None else self.charts[0].dim
        # optional registered model data
        self.known_self_intersections = []   # list of (DomainPoint, DomainPoint)
        self.shadow_lobes = []               # list of boundary curves t in [0,1] -> C
        self.family = None                   # SuspensionFamily for cobordism models
        self.slice_model = None              # t -> Immersion, analytic slice
        self.seeds = None                    # extra Newton seeds, list of DomainPoint
        self.meta = {}

    # -- evaluation ------------------------------------------------------
    def eval(self, point_or_chart, u=None):
        """Evaluate at a DomainPoint or at (chart_id, U-batch)."""
        if u is None:
            p = point_or_chart
            return self.charts[p.chart].fmap(np.atleast_2d(p.u))[0]
        return self.charts[point_or_chart].fmap(np.atleast_2d(np.asarray(u, dtype=float)))

    def jac(self, point_or_chart, u=None):
        if u is None:
            p = point_or_chart
            return self.charts[p.chart].jac(np.atleast_2d(p.u))[0]
        return self.charts[point_or_chart].jac(u)

    def embed_domain(self, point: DomainPoint):
        ch = self.charts[point.chart]
        if ch.embed is None:
            return point.u
        return ch.embed(np.atleast_2d(point.u))[0]

    @property
    def has_analytic_jac(self):
        return all(ch.has_analytic_jac for ch in self.charts)

    # -- sampling --------------------------------------------------------
    def sample(self, n, seed=0):
        """Quasi-random domain sample of ~n points spread over the charts.

        Returns (chart_ids (m,), U (m, d)).  Low-discrepancy within each
        chart (scrambled Sobol), acceptance-rejected where charts overlap.
        """
        n_charts = len(self.charts)
        per = int(np.ceil(n / n_charts))
        ids = []
        us = []
        for ci, ch in enumerate(self.charts):
            eng = qmc.Sobol(d=ch.dim, scramble=True, seed=seed + 7919 * ci)
            draw = 1 << int(np.ceil(np.log2(max(per, 64))))
            got = 0
            guard = 0
            while got < per and guard < 64:
                raw = eng.random(draw)
                pts = qmc.scale(raw, ch.bounds[:, 0], ch.bounds[:, 1])
                if ch.accept is not None:
                    pts = pts[ch.accept(pts)]
                take = pts[: per - got]
                if take.size:
                    us.append(take)
                    ids.append(np.full(len(take), ci, dtype=int))
                    got += len(take)
                guard += 1
            if got < per:
                raise RuntimeError(f"chart {ch.name} rejected too many samples")
        return np.concatenate(ids), np.vstack(us)

    def eval_batch(self, chart_ids, U):
        """Evaluate a mixed-chart batch; returns (m, N) complex."""
        chart_ids = np.asarray(chart_ids)
        U = np.asarray(U, dtype=float)
        out = np.empty((len(U), self.ambient.n_complex), dtype=complex)
        for ci in np.unique(chart_ids):
            sel = chart_ids == ci
            out[sel] = self.charts[ci].fmap(U[sel])
        return out

    def jac_batch(self, chart_ids, U):
        chart_ids = np.asarray(chart_ids)
        U = np.asarray(U, dtype=float)
        out = np.empty((len(U), self.ambient.n_complex, self.domain_dim), dtype=complex)
        for ci in np.unique(chart_ids):
            sel = chart_ids == ci
            out[sel] = self.charts[ci].jac(U[sel])
        return out

    def __repr__(self):
        return f"Immersion({self.label!r}, dim={self.domain_dim} -> C^{self.ambient.n_complex})"
