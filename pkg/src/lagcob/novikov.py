"""Novikov ring arithmetic, curved filtered complexes given as
area-weighted arrow diagrams, and leading-order Maurer-Cartan analysis.

Elements are finite truncated sums sum_i a_i T^{l_i} with rational
coefficients and exact rational exponents (floats convert exactly via
Fraction, so same-path arithmetic compares exactly).  Complexes are
generator lists with degree-1 arrows weighted by Novikov elements plus a
curvature term m0; homology ranks are computed over the Novikov field by
fraction-free elimination (no series division), and the obstruction
analysis works at leading order in the energy filtration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__all__ = [
    "NovikovElement", "T", "nov", "nov_add", "nov_mul", "nov_val",
    "nov_truncate", "FilteredComplex", "MCResult", "build_complex",
    "mc_leading_order", "bounding_cochain_pushforward",
    "homotopy_data_check", "matrix_rank",
]


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, float):
        return Fraction(x)          # exact binary value
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


class NovikovElement:
    """Finite formal sum of T-powers, exponent-sorted, zero-free, truncated.

    Terms with exponent >= the truncation level E_max are dropped (the drop
    is recorded in .truncated).  Exponents and coefficients are exact
    Fractions; valuation is the least exponent, None for the zero element.
    """

    __slots__ = ("terms", "e_max", "truncated")

    def __init__(self, terms=(), e_max=None, truncated=False):
        acc = {}
        for lam, a in terms:
            lam = _frac(lam)
            a = _frac(a)
            if a == 0:
                continue
            acc[lam] = acc.get(lam, Fraction(0)) + a
        e_max = None if e_max is None else _frac(e_max)
        out = []
        for lam in sorted(acc):
            if acc[lam] == 0:
                continue
            if e_max is not None and lam >= e_max:
                truncated = True
                continue
            out.append((lam, acc[lam]))
        self.terms = tuple(out)
        self.e_max = e_max
        self.truncated = truncated

    # -- ring structure --------------------------------------------------
    @staticmethod
    def _join_emax(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return max(a, b)

    def __add__(self, other):
        other = nov(other)
        return NovikovElement(self.terms + other.terms,
                              self._join_emax(self.e_max, other.e_max),
                              self.truncated or other.truncated)

    __radd__ = __add__

    def __neg__(self):
        return NovikovElement(tuple((l, -a) for l, a in self.terms),
                              self.e_max, self.truncated)

    def __sub__(self, other):
        return self + (-nov(other))

    def __rsub__(self, other):
        return nov(other) + (-self)

    def __mul__(self, other):
        other = nov(other)
        prods = [(l1 + l2, a1 * a2)
                 for l1, a1 in self.terms for l2, a2 in other.terms]
        return NovikovElement(prods, self._join_emax(self.e_max, other.e_max),
                              self.truncated or other.truncated)

    __rmul__ = __mul__

    def scale(self, c):
        return NovikovElement(tuple((l, a * _frac(c)) for l, a in self.terms),
                              self.e_max, self.truncated)

    def shift(self, lam):
        """Multiplication by T^lam."""
        lam = _frac(lam)
        return NovikovElement(tuple((l + lam, a) for l, a in self.terms),
                              self.e_max, self.truncated)

    # -- inspection -------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def val(self):
        return self.terms[0][0] if self.terms else None

    def lead(self):
        if not self.terms:
            raise ValueError("zero element has no leading term")
        return self.terms[0]

    def __eq__(self, other):
        try:
            other = nov(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for l, a in self.terms:
            coeff = "" if a == 1 else ("-" if a == -1 else f"{a}*")
            bits.append(f"{coeff}T^{l}" if l != 0 else f"{a}")
        return " + ".join(bits).replace("+ -", "- ")


def nov(x, e_max=None):
    """Coerce scalars/pairs to a NovikovElement."""
    if isinstance(x, NovikovElement):
        return x
    if isinstance(x, (int, float, Fraction, np.integer)):
        return NovikovElement(((Fraction(0), _frac(x)),), e_max)
    raise TypeError(f"cannot coerce {x!r}")


def T(exponent, coeff=1, e_max=None):
    """The monomial coeff * T^exponent."""
    return NovikovElement(((exponent, coeff),), e_max)


ZERO = NovikovElement()
ONE = nov(1)


def nov_add(a, b):
    return nov(a) + nov(b)


def nov_mul(a, b):
    return nov(a) * nov(b)


def nov_val(a):
    return nov(a).val()


def nov_truncate(a, e_max):
    return NovikovElement(nov(a).terms, e_max)


# ---------------------------------------------------------------------------
# Matrix rank over the Novikov field (fraction-free)
# ---------------------------------------------------------------------------

def matrix_rank(rows):
    """Rank over the Novikov field of a matrix of NovikovElements.

    Fraction-free elimination: pivot on the entry of least valuation and
    clear the column by cross-multiplication row <- P*row - E*pivot_row
    (scaling rows by nonzero field elements preserves rank; no series
    division happens, so the arithmetic stays exact and finite).
    """
    M = [[nov(e) for e in row] for row in rows]
    if not M or not M[0]:
        return 0
    nrows, ncols = len(M), len(M[0])
    rank = 0
    used = set()
    for _ in range(min(nrows, ncols)):
        piv = None
        for i in range(nrows):
            if i in used:
                continue
            for j in range(ncols):
                e = M[i][j]
                if not e.is_zero():
                    if piv is None or e.val() < M[piv[0]][piv[1]].val():
                        piv = (i, j)
                    break  # leftmost nonzero is enough for pivot choice
        if piv is None:
            break
        pi, pj = piv
        P = M[pi][pj]
        for i in range(nrows):
            if i == pi or i in used:
                continue
            E = M[i][pj]
            if E.is_zero():
                continue
            M[i] = [P * M[i][j] - E * M[pi][j] for j in range(ncols)]
        used.add(pi)
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# Filtered complexes
# ---------------------------------------------------------------------------

@dataclass
class FilteredComplex:
    """Graded generators, degree-1 arrows with Novikov weights, and m0."""

    generators: dict                      # label -> degree
    arrows: list                          # (src, tgt, NovikovElement)
    curvature: dict = field(default_factory=dict)   # label -> NovikovElement
    energy_cutoff: float | Fraction | None = None
    label: str = "complex"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for (s, t, w) in self.arrows:
            if s not in self.generators or t not in self.generators:
                raise ValueError(f"arrow {s}->{t} references unknown generators")
            if self.generators[t] != self.generators[s] + 1:
                raise ValueError(f"arrow {s}->{t} is not degree +1")
            w = nov(w)
            if not w.is_zero() and w.val() < 0:
                raise ValueError(f"arrow {s}->{t} has negative valuation")
        for g, w in self.curvature.items():
            w = nov(w)
            if not w.is_zero() and w.val() <= 0:
                raise ValueError("curvature must have positive valuation")

    def differential(self, label):
        """m1 of a generator as {target: weight} (sum over arrows)."""
        out = {}
        for (s, t, w) in self.arrows:
            if s == label:
                out[t] = out.get(t, ZERO) + nov(w)
        return {t: w for t, w in out.items() if not w.is_zero()}

    def arrows_into(self, label):
        out = {}
        for (s, t, w) in self.arrows:
            if t == label:
                out[s] = out.get(s, ZERO) + nov(w)
        return {s: w for s, w in out.items() if not w.is_zero()}

    def degrees(self):
        return sorted(set(self.generators.values()))

    def d_matrix(self, k):
        """Matrix of m1: CF^k -> CF^{k+1} (rows = degree k+1 targets)."""
        src = [g for g, d in sorted(self.generators.items()) if d == k]
        tgt = [g for g, d in sorted(self.generators.items()) if d == k + 1]
        rows = [[ZERO for _ in src] for _ in tgt]
        for j, s in enumerate(src):
            for t, w in self.differential(s).items():
                rows[tgt.index(t)][j] = rows[tgt.index(t)][j] + w
        return rows, src, tgt

    def d_squared_residual(self):
        """Leading valuation of m1 o m1 (None when it vanishes exactly)."""
        worst = None
        for g in self.generators:
            acc = {}
            for t1, w1 in self.differential(g).items():
                for t2, w2 in self.differential(t1).items():
                    acc[t2] = acc.get(t2, ZERO) + w1 * w2
            for t2, w in acc.items():
                if not w.is_zero():
                    v = w.val()
                    worst = v if worst is None else min(worst, v)
        return worst

    def homology_ranks(self):
        """Rank of H^k over the Novikov field, per degree."""
        degs = self.degrees()
        ranks = {}
        d_rank = {}
        for k in degs:
            rows, src, tgt = self.d_matrix(k)
            d_rank[k] = matrix_rank(rows) if src and tgt else 0
        for k in degs:
            dim_k = sum(1 for d in self.generators.values() if d == k)
            ranks[k] = dim_k - d_rank.get(k, 0) - d_rank.get(k - 1, 0)
        return ranks

    def total_homology_rank(self):
        return sum(self.homology_ranks().values())


@dataclass
class MCResult:
    status: str                            # 'obstructed' | 'unobstructed-at-leading-order'
    leading_cochain: tuple | None = None   # (generator, NovikovElement)
    certificate: dict = field(default_factory=dict)

    @property
    def unobstructed(self):
        return self.status != "obstructed"


def mc_leading_order(c: FilteredComplex):
    """Leading-order Maurer-Cartan analysis of the curvature m0.

    Unobstructed when m0 = 0 (tautologically) or when some arrow into the
    leading curvature target supports a positive-valuation cochain whose
    m1 cancels the leading term; otherwise obstructed, with the valuation
    deficit of the best candidate as certificate.
    """
    curv = {g: nov(w) for g, w in c.curvature.items() if not nov(w).is_zero()}
    if not curv:
        return MCResult("unobstructed-at-leading-order",
                        certificate={"reason": "zero curvature (tautologically unobstructed)"})
    lead_val = min(w.val() for w in curv.values())
    targets = {g: w for g, w in curv.items() if w.val() == lead_val}
    best_gap = None
    best = None
    for g, w in targets.items():
        lam0, a0 = w.lead()
        for src, aw in c.arrows_into(g).items():
            mu = lam0 - aw.val()
            gap = -mu
            if best_gap is None or gap < best_gap:
                coeff = -a0 / aw.lead()[1]
                best_gap = gap
                best = (src, T(mu, coeff), g)
    if best is None:
        return MCResult("obstructed", certificate={
            "reason": "no arrow reaches the curvature target",
            "curvature_valuation": lead_val})
    src, cochain, target = best
    if best_gap < 0:
        # strictly positive valuation available: cancels the leading term
        return MCResult("unobstructed-at-leading-order",
                        leading_cochain=(src, cochain),
                        certificate={"cancels": target,
                                     "exponent": cochain.val(),
                                     "curvature_valuation": lead_val})
    return MCResult("obstructed", certificate={
        "reason": "candidate cochain would need non-positive valuation",
        "candidate": src, "target": target,
        "gap": best_gap, "curvature_valuation": lead_val})


# ---------------------------------------------------------------------------
# Registered example complexes
# ---------------------------------------------------------------------------

def build_complex(name, e_max=None, **p):
    """Construct the worked Floer complexes by name.

    whitney(n, A); figure_eight(E); handle(k, n, A, B);
    antisurgery_surgery(A_plus, A_minus); surgery_trace_KAB(E_a, E_b, E);
    intersection_LE_section(E, Eprime, A, B, C, a0=1).
    """
    if name == "whitney":
        n, A = p["n"], p["A"]
        if n < 2 or _frac(A) <= 0:
            raise ValueError("whitney complex needs n >= 2, A > 0")
        gens = {"e": 0, "x": n, "(q-_to_q+)": -1, "(q+_to_q-)": n + 1}
        arrows = [("(q-_to_q+)", "e", T(A, e_max=e_max)),
                  ("x", "(q+_to_q-)", T(A, e_max=e_max))]
        return FilteredComplex(gens, arrows, {}, e_max, label=f"whitney(n={n}, A={A})")

    if name == "figure_eight":
        E = p["E"]
        if _frac(E) <= 0:
            raise ValueError("figure eight complex needs E > 0")
        gens = {"(pi_to_0)": 0, "(0_to_pi)": 1, "e": 0, "x": 1}
        arrows = [
            ("(pi_to_0)", "(0_to_pi)", T(E, 1, e_max=e_max)),
            ("(pi_to_0)", "(0_to_pi)", T(E, -1, e_max=e_max)),
            ("e", "x", nov(1)), ("e", "x", nov(-1)),
        ]
        return FilteredComplex(gens, arrows, {}, e_max, label=f"figure_eight(E={E})")

    if name == "handle":
        k, n, A, B = p["k"], p["n"], p["A"], p["B"]
        if not (0 <= k <= n) or _frac(A) <= 0 or _frac(B) <= 0:
            raise ValueError("handle complex needs 0 <= k <= n and A, B > 0")
        gens = {"x+": k + 1, "x-": n - k - 1, "y": n - k,
                "(q+,1)_to_(q-,1)": k + 1, "(q+,0)_to_(q-,0)": k + 2,
                "(q-,0)_to_(q+,0)": n - k - 1}
        arrows = [("(q+,1)_to_(q-,1)", "(q+,0)_to_(q-,0)", T(B, e_max=e_max)),
                  ("(q-,0)_to_(q+,0)", "y", T(A, e_max=e_max))]
        curl = {"(q+,0)_to_(q-,0)": T(A, e_max=e_max)} if k == 0 else {}
        cx = FilteredComplex(gens, arrows, curl, e_max,
                             label=f"handle(k={k}, n={n}, A={A}, B={B})")
        cx.meta = {"A": _frac(A), "B": _frac(B)}
        return cx

    if name == "antisurgery_surgery":
        # the concatenated anti-surgery/surgery cobordism of two circle
        # pairs: ends' Morse pairs, the neck circle (e0 at 1, x0 at 2 on the
        # 2-dimensional cobordism), the handle points y+-, and the doubled
        # chord copies in degrees 0 and 2
        Ap, Am = p["A_plus"], p["A_minus"]
        if _frac(Ap) <= 0 or _frac(Am) <= 0:
            raise ValueError("need positive teardrop areas")
        gens = {"e0-": 0, "e1-": 0, "x0-": 1, "x1-": 1,
                "e0+": 0, "e1+": 0, "x0+": 1, "x1+": 1,
                "e0": 1, "x0": 2, "y-": 1, "y+": 1,
                "(q+_to_q-)_max": 0, "(q+_to_q-)_min": 2}
        arrows = [
            # cancelling Morse pairs on the circle ends
            ("e0-", "x0-", nov(1)), ("e0-", "x0-", nov(-1)),
            ("e1-", "x1-", nov(1)), ("e1-", "x1-", nov(-1)),
            ("e0+", "x0+", nov(1)), ("e0+", "x0+", nov(-1)),
            ("e1+", "x1+", nov(1)), ("e1+", "x1+", nov(-1)),
            # neck flow lines
            ("e0-", "y-", nov(1)), ("e1-", "y-", nov(-1)),
            ("e0+", "y+", nov(1)), ("e1+", "y+", nov(-1)),
            ("e0", "x0", nov(1)), ("e0", "x0", nov(-1)),
            ("y-", "x0", nov(1)), ("y-", "x0", nov(-1)),
            ("y+", "x0", nov(1)), ("y+", "x0", nov(-1)),
            # teardrop contributions of the two traces
            ("(q+_to_q-)_max", "y-", T(Am, e_max=e_max)),
            ("(q+_to_q-)_max", "y+", T(Ap, e_max=e_max)),
            ("x1-", "(q+_to_q-)_min", T(Am, -1, e_max=e_max)),
            ("x0+", "(q+_to_q-)_min", T(Ap, e_max=e_max)),
        ]
        curv_w = T(Ap, e_max=e_max) + T(Am, -1, e_max=e_max)
        curl = {} if curv_w.is_zero() else {"(q+_to_q-)_min": curv_w}
        cx = FilteredComplex(gens, arrows, curl, e_max,
                             label=f"antisurgery_surgery({Ap}, {Am})")
        cx.meta = {"A_plus": _frac(Ap), "A_minus": _frac(Am)}
        return cx

    if name == "surgery_trace_KAB":
        Ea, Eb, E = _frac(p["E_a"]), _frac(p["E_b"]), _frac(p["E"])
        A = (Ea - 2 * E) / 2
        B = (Ea - Eb) / 2
        if not (0 < Eb < Ea):
            raise ValueError("flux relations need 0 < E_b < E_a")
        if not (0 < 2 * E < Ea):
            raise ValueError("surgery neck needs 0 < 2E < E_a")
        gens = {"e0": 0, "e1": 0, "x0": 1, "x1": 1,
                "e_b": 0, "x_b": 1, "y": 1,
                "(pi_to_0)_a": 0, "(0_to_pi)_a": 2, "(0_to_pi)_b": 1}
        arrows = [
            ("x1", "(0_to_pi)_a", T(A, e_max=e_max)),
            ("(pi_to_0)_a", "y", T(A, e_max=e_max)),
            ("(0_to_pi)_b", "(0_to_pi)_a", T(B, e_max=e_max)),
            # cancelling bottleneck strip pair of area B + E_b
            ("(pi_to_0)_a", "(0_to_pi)_b", T(B + Eb, e_max=e_max)),
            ("(pi_to_0)_a", "(0_to_pi)_b", T(B + Eb, -1, e_max=e_max)),
            # Morse pairs
            ("e0", "x0", nov(1)), ("e0", "x0", nov(-1)),
            ("e1", "x1", nov(1)), ("e1", "x1", nov(-1)),
            ("e_b", "x_b", nov(1)), ("e_b", "x_b", nov(-1)),
        ]
        curl = {"(0_to_pi)_a": T(A, e_max=e_max)}
        cx = FilteredComplex(gens, arrows, curl, e_max,
                             label=f"surgery_trace_KAB({p['E_a']}, {p['E_b']}, {p['E']})")
        cx.meta = {"A": A, "B": B, "E_a": Ea, "E_b": Eb, "E": E}
        return cx

    if name == "intersection_LE_section":
        E, Ep = _frac(p["E"]), _frac(p["Eprime"])
        A, B, Cc = _frac(p["A"]), _frac(p["B"]), _frac(p["C"])
        a0 = _frac(p.get("a0", 1))
        if B + Ep != E / 2 + Cc:
            raise ValueError("areas must satisfy B + E' = E/2 + C")
        D0 = B - Cc
        gens = {"p": 0, "q": 1}
        w = T(A, e_max=e_max) + T(B, -1, e_max=e_max) + T(D0 + Cc, a0, e_max=e_max)
        arrows = [] if w.is_zero() else [("p", "q", w)]
        cx = FilteredComplex(gens, arrows, {}, e_max,
                             label="intersection_LE_section")
        cx.meta = {"D0": D0, "E": E, "Eprime": Ep, "A": A, "B": B, "C": Cc}
        return cx

    raise ValueError(f"unknown complex {name!r}")


# ---------------------------------------------------------------------------
# Flux identities and the continuation data of the trace
# ---------------------------------------------------------------------------

def bounding_cochain_pushforward(E_a, E_b, E):
    """Leading exponent of the bounding cochain of the surgery trace,
    asserted against the flux identity A - B = E_b/2 - E (exact rationals).

    Returns the exponent; raises when the identity fails (algebra bug) or
    when the exponent is not positive (the cochain would be inadmissible).
    """
    Ea, Eb, E = _frac(E_a), _frac(E_b), _frac(E)
    A = (Ea - 2 * E) / 2
    B = (Ea - Eb) / 2
    lhs = A - B
    rhs = Eb / 2 - E
    if lhs != rhs:
        raise ArithmeticError(f"flux identity violated: {lhs} != {rhs}")
    if lhs <= 0:
        raise ValueError(f"exponent {lhs} rejected: bounding cochains need "
                         "positive valuation")
    return lhs


class _FormalSum(dict):
    """Finite formal sum {generator: NovikovElement} with +, scalar *."""

    def __add__(self, other):
        out = _FormalSum(self)
        for g, w in other.items():
            out[g] = out.get(g, ZERO) + w
        return _FormalSum({g: w for g, w in out.items() if not w.is_zero()})

    def scaled(self, w):
        w = nov(w)
        return _FormalSum({g: w * v for g, v in self.items()})


def homotopy_data_check(E_a, E_b, E):
    """Verify pi+ o i+ = id on the four generators of CF(L_{E_b}).

    i+ is the leading-order chain inclusion of the end into the trace
    complex; pi+ projects to the end generators, identifying the doubled
    bottleneck generator via pi+((pi_to_0)_a) = T^B (pi_to_0)_b.
    Returns (passed, details).
    """
    Ea, Eb, E = _frac(E_a), _frac(E_b), _frac(E)
    A = (Ea - 2 * E) / 2
    B = (Ea - Eb) / 2

    def S(*items):
        return _FormalSum({g: nov(w) for g, w in items})

    i_plus = {
        "e_b": S(("e_b", 1), ("e1", 1), ("e0", -1)),
        "x_b": S(("x_b", 1), ("x0", 1)),
        "(pi_to_0)_b": S(("(pi_to_0)_a", T(-B))) + S(("e0", T(A - B))),
        "(0_to_pi)_b": S(("(0_to_pi)_b", 1), ("x1", T(B - A)), ("x0", T(B - A, -1))),
    }
    proj = {
        "e_b": S(("e_b", 1)), "x_b": S(("x_b", 1)),
        "(0_to_pi)_b": S(("(0_to_pi)_b", 1)),
        "(pi_to_0)_a": S(("(pi_to_0)_b", T(B))),
    }

    def pi_plus(sum_):
        out = _FormalSum()
        for g, w in sum_.items():
            if g in proj:
                out = out + proj[g].scaled(w)
        return out

    details = {}
    passed = True
    for g in ("e_b", "x_b", "(pi_to_0)_b", "(0_to_pi)_b"):
        img = pi_plus(i_plus[g])
        expect = S((g, 1))
        ok = img == expect
        details[g] = {"image": {k: repr(v) for k, v in img.items()}, "ok": ok}
        passed &= ok
    return passed, details
