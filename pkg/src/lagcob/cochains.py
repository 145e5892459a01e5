"""Floer generator bookkeeping: generator sets of immersed Lagrangians and
bottlenecked cobordisms, signed Euler characteristics, and composition.

Generator degrees follow the grading module conventions: Morse generators
carry the upward index of their critical point, self-intersection chords
the integer index of the ordered pair.  The admissible Morse data on
handle traces is combinatorial (the standard profile perturbed at the
ends); the tables below are what the filtered algebra consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "Generator", "GeneratorSet", "generators_immersed", "chi_si",
    "generators_bottlenecked", "chi_bot", "compose", "handle_end",
    "random_piece", "random_end",
]


@dataclass(frozen=True)
class Generator:
    kind: str                   # 'morse-critical' | 'self-intersection'
    label: str
    degree: int
    t_coordinate: float | None = None
    base_grading: str | None = None   # 'max' | 'min' at a bottleneck
    excluded: bool = False            # discarded by the I^bot filter


@dataclass
class GeneratorSet:
    generators: list
    context: str = "immersed-lagrangian"
    window: tuple | None = None
    ends: dict = field(default_factory=dict)

    def active(self):
        return [g for g in self.generators if not g.excluded]

    def labels(self):
        labs = [g.label for g in self.generators]
        if len(set(labs)) != len(labs):
            raise ValueError("generator labels must be unique")
        return labs

    def degrees(self):
        return sorted(g.degree for g in self.active())

    def by_label(self, label):
        for g in self.generators:
            if g.label == label:
                return g
        raise KeyError(label)


def _morse(label, degree, **kw):
    return Generator("morse-critical", label, degree, **kw)


def _chord(label, degree, **kw):
    return Generator("self-intersection", label, degree, **kw)


# ---------------------------------------------------------------------------
# Immersed Lagrangians
# ---------------------------------------------------------------------------

def generators_immersed(model, morse_choice="standard"):
    """Floer generators Crit(f) plus ordered self-intersections.

    model: ("whitney", n) | ("circle", E) | ("local_slice", k, n, sign)
    with the standard Morse functions (a coordinate on handle slices,
    height on circles and spheres).
    """
    if morse_choice != "standard":
        raise ValueError("only the standard Morse choice is registered")
    kind = model[0]
    if kind == "whitney":
        n = model[1]
        if n < 2:
            raise ValueError("graded Whitney sphere needs n >= 2")
        gens = [
            _morse("e", 0), _morse("x", n),
            _chord("(q-_to_q+)", -1), _chord("(q+_to_q-)", n + 1),
        ]
    elif kind == "circle":
        gens = [_morse("e", 0), _morse("x", 1)]
    elif kind == "local_slice":
        _, k, n, sign = model
        if not (0 <= k <= n):
            raise ValueError("need 0 <= k <= n")
        if sign == "+":
            gens = [_chord("(q+_to_q-)", k + 1), _chord("(q-_to_q+)", n - k - 1)]
        elif sign == "-":
            gens = [_morse("x+", k + 1), _morse("x-", n - k - 1)]
        else:
            raise ValueError("sign must be '+' or '-'")
    else:
        raise ValueError(f"unregistered model {model!r}")
    return GeneratorSet(gens, context="immersed-lagrangian")


def chi_si(gs: GeneratorSet):
    """Signed count sum (-1)^deg over the (non-excluded) generators."""
    return int(sum((-1) ** g.degree for g in gs.active()))


# ---------------------------------------------------------------------------
# Bottlenecked cobordisms
# ---------------------------------------------------------------------------

def handle_end(k, n, sign, end_id):
    """Generator set of a handle end, with labels carrying the end id."""
    base = generators_immersed(("local_slice", k, n, sign))
    gens = [replace(g, label=f"{end_id}:{g.label}") for g in base.generators]
    return GeneratorSet(gens, context="immersed-lagrangian")


def generators_bottlenecked(K, t_minus, t_plus, admissible_morse_profile="standard"):
    """Bottlenecked Floer generators of a cobordism with double bottlenecks.

    K: ("handle", k, n) for the doubled surgery trace K^{k,n-k+1}_{A,B}
    (ends at the window boundaries; interior handle point y of degree n-k;
    min-graded chords outside [t-, t+] are excluded), or
    ("embedded_suspension", end_gens) for a suspension with embedded ends.
    """
    if admissible_morse_profile != "standard":
        raise ValueError("only the standard admissible profile is registered")
    if K[0] == "embedded_suspension":
        end = K[1]
        if any(g.kind != "morse-critical" for g in end.generators):
            raise ValueError("embedded suspension needs chord-free ends")
        gens = [replace(g, label=f"end:{g.label}") for g in end.generators]
        return GeneratorSet(gens, context="bottlenecked-cobordism",
                            window=(t_minus, t_plus))
    if K[0] != "handle":
        raise ValueError(f"unregistered cobordism {K!r}")
    _, k, n = K
    if not (0 <= k <= n):
        raise ValueError("need 0 <= k <= n")
    if not (t_minus < 0 < t_plus):
        # the interior critical value sits between the window ends
        raise ValueError("window must contain the interior critical values")
    delta = 0.45
    gens = [
        _morse("x+", k + 1),
        _morse("x-", n - k - 1),
        _morse("y", n - k),
        _chord("(q+,1)_to_(q-,1)", k + 1, t_coordinate=delta, base_grading="max"),
        _chord("(q-,1)_to_(q+,1)", n - k, t_coordinate=delta, base_grading="min",
               excluded=True),
        _chord("(q+,0)_to_(q-,0)", k + 2, t_coordinate=-delta, base_grading="min"),
        _chord("(q-,0)_to_(q+,0)", n - k - 1, t_coordinate=-delta, base_grading="max"),
    ]
    gs = GeneratorSet(gens, context="bottlenecked-cobordism",
                      window=(t_minus, t_plus))
    gs.ends = {"plus": handle_end(k, n, "+", "L+"),
               "minus": handle_end(k, n, "-", "L-")}
    return gs


def chi_bot(gs: GeneratorSet):
    """Signed count over the bottlenecked generators (exclusions applied)."""
    return chi_si(gs)


# ---------------------------------------------------------------------------
# Composition
# ---------------------------------------------------------------------------

def compose(gs_top, gs_bottom, shared_end: GeneratorSet):
    """Concatenate bottlenecked generator sets along a shared end.

    At the shared double bottleneck each generator of I(L0) appears once in
    each piece: the Morse points, and per chord its max-graded copy (each
    piece sees the max copy on its outer side, the same generator of the
    concatenation).  Deduplicating them realizes

        chi(K2 o K1) = chi(K1) + chi(K2) - chi_si(L0)

    exactly; the min-graded partners on the interior sides belong to the
    pieces themselves and are inherited unchanged.
    """
    shared_labels = set(shared_end.labels())
    top_labels = set(gs_top.labels())
    bottom_labels = set(gs_bottom.labels())
    missing = shared_labels - (top_labels & bottom_labels)
    if missing:
        raise ValueError(f"shared end generators missing from a piece: {sorted(missing)}")
    for lab in shared_labels:
        if gs_top.by_label(lab).degree != gs_bottom.by_label(lab).degree:
            raise ValueError(f"shared end generator {lab} has mismatched degrees")

    gens = list(gs_top.generators)
    gens += [g for g in gs_bottom.generators if g.label not in shared_labels]
    w = (gs_bottom.window[0] if gs_bottom.window else None,
         gs_top.window[1] if gs_top.window else None)
    out = GeneratorSet(gens, context="bottlenecked-cobordism", window=w)
    out.ends = {"plus": gs_top.ends.get("plus"), "minus": gs_bottom.ends.get("minus")}
    return out


# ---------------------------------------------------------------------------
# Random pieces for property tests
# ---------------------------------------------------------------------------

def random_end(rng, end_id, max_morse=4, max_chords=2, max_deg=5):
    """Random immersed-end generator set (Morse points plus chord pairs)."""
    gens = []
    n = int(rng.integers(1, max_deg))
    for i in range(int(rng.integers(1, max_morse + 1))):
        gens.append(_morse(f"{end_id}:m{i}", int(rng.integers(0, n + 1))))
    for i in range(int(rng.integers(0, max_chords + 1))):
        d = int(rng.integers(0, n + 1))
        gens.append(_chord(f"{end_id}:c{i}>", d))
        gens.append(_chord(f"{end_id}:c{i}<", n - d))
    return GeneratorSet(gens, context="immersed-lagrangian")


def random_piece(rng, end_minus, end_plus, max_interior=3):
    """Random bottlenecked piece between two given ends.

    Contains both ends' Morse points and max-graded chord copies (labels
    shared with the end, so adjacent pieces can be concatenated), the
    piece-internal min-graded partners of each end chord (degree + 1), and
    a few random interior Morse generators.
    """
    gens = []
    tag = f"p{int(rng.integers(1e9))}"
    for side, end in (("lo", end_minus), ("hi", end_plus)):
        for g in end.generators:
            if g.kind == "morse-critical":
                gens.append(g)
            else:
                gens.append(replace(g, base_grading="max"))
                # one min-graded partner per geometric double point sits on
                # the interior copy; the chirality picks the ">"-ordering
                if g.label.endswith(">"):
                    gens.append(replace(g, label=f"{tag}:{side}:{g.label}|min",
                                        degree=g.degree + 1, base_grading="min"))
    for i in range(int(rng.integers(0, max_interior + 1))):
        gens.append(_morse(f"{tag}:y{i}", int(rng.integers(0, 6))))
    gs = GeneratorSet(gens, context="bottlenecked-cobordism", window=(-1.0, 1.0))
    gs.ends = {"plus": end_plus, "minus": end_minus}
    return gs
