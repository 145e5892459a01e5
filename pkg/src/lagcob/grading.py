"""Gradings of Lagrangian planes and integer indices of ordered
self-intersections.

Two oracles are implemented and cross-checked:

* index_by_winding: the phase of det^2 along a path of split Lagrangian
  planes v_i(s) = z_i(s) e_i, with each coordinate loop z_i^2/|z_i^2|
  closed by the positive (counterclockwise) arc.  A path from plane A to
  plane B computes ind(B -> A).
* self_intersection_index: the formula n + theta(q) - theta(p) - 2*angle,
  with per-coordinate angles alpha_j = pi/2 - pc_j/4, where pc_j is the
  positive closure (-arg((w_j/z_j)^2)) mod 2pi of the endpoint frames.
  This is the unique frame-only normalization consistent with the winding
  oracle and the graded lift theta(end) = theta(start) - sweep/(2 pi); it
  gives ind(p->q) + ind(q->p) = n exactly.

Model registries supply the paths, endpoint frames, and graded-lift values
for the standard models (local traces, Whitney spheres, the figure eight,
and the doubled-bottleneck handles).
"""

from __future__ import annotations

import numpy as np

from .immersion import Immersion

__all__ = [
    "LagrangianFrame", "det_squared_phase", "SplitPlanePath",
    "index_by_winding", "kahler_angles", "kahler_angles_split",
    "self_intersection_index", "dual_index",
    "local_trace_chord_index", "local_trace_grading_data",
    "figure_eight_chord_index", "figure_eight_grading_data",
    "handle_chord_index", "frames_along_segments", "split_z_curves",
    "ALPHA", "ALPHA2",
]

ALPHA = np.arctan(2.0)        # phase of 1 + 2i
ALPHA2 = np.arctan(0.5)       # pi/2 - ALPHA
OMEGA_TOL = 1e-10
TIE_TOL = 1e-9


# ---------------------------------------------------------------------------
# Frames and det^2
# ---------------------------------------------------------------------------

class LagrangianFrame:
    """n real-independent vectors spanning a Lagrangian plane in C^n.

    basis is an (n, n) complex matrix whose columns are the vectors.
    """

    def __init__(self, basis):
        M = np.asarray(basis, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("need n vectors in C^n")
        omega = np.imag(np.conj(M.T) @ M)
        if np.max(np.abs(omega)) > OMEGA_TOL:
            raise ValueError(f"frame is not Lagrangian (|omega| = {np.max(np.abs(omega)):.2e})")
        real = np.vstack([M.real, M.imag])
        if np.linalg.matrix_rank(real, tol=1e-10) < M.shape[1]:
            raise ValueError("frame vectors are not R-linearly independent")
        self.basis = M
        self.n = M.shape[0]


def det_squared_phase(frame):
    """Argument in [0, 2 pi) of det(M)^2 / |det(M)|^2."""
    M = frame.basis if isinstance(frame, LagrangianFrame) else LagrangianFrame(frame).basis
    d = np.linalg.det(M)
    return float(np.mod(np.angle(d * d), 2.0 * np.pi))


def unitary_part(frame):
    """Unitary U with U R^n = span(frame): U = M (M^H M)^{-1/2}."""
    M = frame.basis if isinstance(frame, LagrangianFrame) else np.asarray(frame, dtype=complex)
    H = np.conj(M.T) @ M
    w, V = np.linalg.eigh(H)
    inv_sqrt = V @ np.diag(1.0 / np.sqrt(w)) @ np.conj(V.T)
    return M @ inv_sqrt


# ---------------------------------------------------------------------------
# Winding oracle
# ---------------------------------------------------------------------------

class SplitPlanePath:
    """Per-coordinate phase curves z_i(s) of a path of split planes.

    curve: s in [0, 1] -> (m, n) complex, each column nonvanishing.
    """

    def __init__(self, curve, label=""):
        self.curve = curve
        self.label = label

    def sample(self, m):
        s = np.linspace(0.0, 1.0, m)
        Z = self.curve(s)
        return np.atleast_2d(Z)


def _segment_min_modulus(Z):
    """Min over polyline segments of the distance from 0 (catches real-axis
    zero crossings that leave the sampled phases constant)."""
    A, B = Z[:-1], Z[1:]
    D = B - A
    den = np.abs(D) ** 2
    t = np.clip(np.where(den > 0, -((A * np.conj(D)).real) / np.maximum(den, 1e-300), 0.0),
                0.0, 1.0)
    return float(np.min(np.abs(A + t * D)))


def _continuous_sweeps(path: SplitPlanePath, m0=512, max_doublings=8):
    """Total swept arguments of each z_i^2 along the path (unwrap-refined)."""
    m = m0
    for _ in range(max_doublings):
        Z = path.sample(m)
        scale = np.max(np.abs(Z))
        if min(np.min(np.abs(Z)), _segment_min_modulus(Z)) < 1e-8 * scale:
            raise ValueError("a coordinate phase z_i vanishes along the path")
        ang = np.unwrap(np.angle(Z * Z), axis=0)
        steps = np.abs(np.diff(ang, axis=0))
        if np.max(steps) < 0.8:
            return ang[-1] - ang[0]
        m *= 2
    raise RuntimeError("winding path needs too many samples; refine the path")


def index_by_winding(path: SplitPlanePath, closure="positive"):
    """(1/2 pi) * total argument of prod z_i^2/|z_i^2| after closing each
    coordinate loop.

    closure 'positive' completes each loop by the counterclockwise arc
    ((-sweep) mod 2 pi), which reproduces the per-coordinate contributions
    of the handle computation (-2 pi / 0 / +2 pi with alpha = arctan 2).
    A closure arc within TIE_TOL of 0 or 2 pi is ambiguous and raises.
    """
    if closure != "positive":
        raise ValueError("only the positive-arc closure is implemented")
    sweeps = _continuous_sweeps(path)
    total = 0.0
    for sw in np.atleast_1d(sweeps):
        pc = np.mod(-sw, 2.0 * np.pi)
        if min(pc, 2.0 * np.pi - pc) < TIE_TOL and abs(sw) > TIE_TOL:
            raise ValueError("ambiguous closure (endpoint phases coincide)")
        total += sw + pc
    idx = total / (2.0 * np.pi)
    if abs(idx - round(idx)) > 1e-6:
        raise ArithmeticError(f"winding total {idx} is not an integer")
    return int(round(idx))


def theta_sweep(path: SplitPlanePath):
    """Graded-lift difference along the path: theta(end) - theta(start)
    = -(sum of z_i^2 sweeps)/(2 pi)."""
    return -float(np.sum(_continuous_sweeps(path))) / (2.0 * np.pi)


# ---------------------------------------------------------------------------
# Formula oracle
# ---------------------------------------------------------------------------

def kahler_angles_split(z_p, z_q):
    """Angles of the ordered pair of split planes diag(z_p) -> diag(z_q)."""
    z_p = np.asarray(z_p, dtype=complex)
    z_q = np.asarray(z_q, dtype=complex)
    ratio = z_q / z_p
    zeta = np.mod(np.angle(ratio * ratio), 2.0 * np.pi)
    if np.any(np.minimum(zeta, 2.0 * np.pi - zeta) < TIE_TOL):
        raise ValueError("planes share a coordinate line (angle tie)")
    return np.pi / 2.0 - zeta / 4.0


def kahler_angles(frame_p, frame_q):
    """Angles of an ordered pair of transverse Lagrangian planes.

    Computed from the squared relative unitary V V^T (whose eigenvalue
    arguments are the doubled coordinate phases, O(n)-invariantly).
    """
    Up = unitary_part(frame_p)
    Uq = unitary_part(frame_q)
    V = np.conj(Up.T) @ Uq
    lam = np.linalg.eigvals(V @ V.T)
    zeta = np.mod(np.angle(lam), 2.0 * np.pi)
    if np.any(np.minimum(zeta, 2.0 * np.pi - zeta) < TIE_TOL):
        raise ValueError("planes are not transverse enough (angle tie)")
    return np.sort(np.pi / 2.0 - zeta / 4.0)


def self_intersection_index(theta_p, theta_q, angles):
    """ind(p -> q) = n + theta(q) - theta(p) - 2 * (1/pi) sum(angles).

    angles are the per-coordinate Kaehler angles in (0, pi); the result is
    asserted integral to 1e-6 and rounded.
    """
    angles = np.asarray(angles, dtype=float)
    if np.any(angles <= 0.0) or np.any(angles >= np.pi):
        raise ValueError("angles must lie in (0, pi)")
    n = len(angles)
    val = n + theta_q - theta_p - (2.0 / np.pi) * float(np.sum(angles))
    if abs(val - round(val)) > 1e-6:
        raise ArithmeticError(
            f"index {val} is not integral; grading normalization is off")
    return int(round(val))


def dual_index(ind, n):
    """Complementary index: ind(p->q) + ind(q->p) = n."""
    return n - ind


# ---------------------------------------------------------------------------
# Local trace registry
# ---------------------------------------------------------------------------

def _sigma(k, n):
    s = -np.ones(n)
    s[:k] = 1.0
    return s


def _trace_slice_path(k, n, reverse=False):
    """Paper path of slice tangent planes from q_+ to q_- (needs k >= 1):
    z_1 = cos s + 2i cos 2s, z_i = 1 + 2i sigma_i cos s."""
    sig = _sigma(k, n)

    def curve(s):
        s = np.asarray(s, dtype=float)
        th = (1.0 - s) * np.pi if reverse else s * np.pi
        Z = np.empty((len(th), n), dtype=complex)
        Z[:, 0] = np.cos(th) + 2.0j * np.cos(2.0 * th)
        for i in range(1, n):
            Z[:, i] = 1.0 + 2.0j * sig[i] * np.cos(th)
        return Z

    return SplitPlanePath(curve, label=f"trace_slice(k={k}, n={n}, rev={reverse})")


def _trace_k0_path(n, reverse=False):
    """k = 0: path through the handle critical point, in C^{n+1}.

    The positive slice S^0 x D^n is disconnected, so the planes are joined
    through the trace; the winding then computes the K-level chord index
    (the bottleneck-doubled value).
    """
    def curve(s):
        s = np.asarray(s, dtype=float)
        th = (1.0 - s) * np.pi if reverse else s * np.pi
        Z = np.empty((len(th), n + 1), dtype=complex)
        for i in range(n):
            Z[:, i] = 1.0 - 2.0j * np.cos(th)
        Z[:, n] = 2.0 * np.cos(th) - 1.0j
        return Z

    return SplitPlanePath(curve, label=f"trace_k0(n={n}, rev={reverse})")


def local_trace_chord_index(k, n, chord):
    """Winding-oracle index of the ordered chords of L^{k, n-k,+}.

    chord: 'minus_to_plus' for (q_- -> q_+), 'plus_to_minus' for the dual.
    A path from plane A to plane B computes ind(B -> A); for k = 0 the
    K-level winding of the forward chord carries the bottleneck shift +1
    (min-graded copy), which is subtracted to give the slice index.
    """
    if chord not in ("minus_to_plus", "plus_to_minus"):
        raise ValueError("chord must be 'minus_to_plus' or 'plus_to_minus'")
    if k >= 1:
        rev = chord == "plus_to_minus"
        return index_by_winding(_trace_slice_path(k, n, reverse=rev))
    if chord == "minus_to_plus":
        return index_by_winding(_trace_k0_path(n, reverse=False)) - 1
    return index_by_winding(_trace_k0_path(n, reverse=True))


def local_trace_frames(k, n):
    """Split tangent frames of the positive slice at q_+ and q_-."""
    sig = _sigma(k, n)
    z_plus = 1.0 + 2.0j * sig
    z_minus = 1.0 - 2.0j * sig
    return z_plus, z_minus


def local_trace_grading_data(k, n):
    """Graded-lift values and angles feeding the formula oracle.

    theta(q_-) is normalized to 0; theta(q_+) is the det^2 lift along the
    registered path (k >= 1) or the calibrated trace value (k = 0).
    """
    z_plus, z_minus = local_trace_frames(k, n)
    if k >= 1:
        # path runs q_+ -> q_-: theta(q_-) - theta(q_+) = -sweep/2pi
        theta_plus = -theta_sweep(_trace_slice_path(k, n))
    else:
        theta_plus = (2.0 * ALPHA / np.pi) * n - 1.0
    return {
        "theta_plus": theta_plus,
        "theta_minus": 0.0,
        "angles_minus_to_plus": kahler_angles_split(z_minus, z_plus),
        "angles_plus_to_minus": kahler_angles_split(z_plus, z_minus),
    }


def local_trace_formula_index(k, n, chord):
    g = local_trace_grading_data(k, n)
    if chord == "minus_to_plus":
        return self_intersection_index(g["theta_minus"], g["theta_plus"],
                                       g["angles_minus_to_plus"])
    return self_intersection_index(g["theta_plus"], g["theta_minus"],
                                   g["angles_plus_to_minus"])


# ---------------------------------------------------------------------------
# Figure eight registry
# ---------------------------------------------------------------------------

def figure_eight_grading_data(E):
    """Tangent frames and graded lift of the double section of T*S^1.

    Branch tangents at the double point are (2, +-E/8); the lift along the
    curve gives theta(0) - theta(pi) = -2 a / pi with a = arctan(E/16).
    """
    a = np.arctan(E / 16.0)
    z0 = np.array([2.0 + 1.0j * E / 8.0])
    zpi = np.array([2.0 - 1.0j * E / 8.0])
    return {
        "theta_0": -2.0 * a / np.pi,
        "theta_pi": 0.0,
        "frame_0": z0,
        "frame_pi": zpi,
    }


def figure_eight_chord_index(E, chord):
    """Degrees of (pi -> 0) and (0 -> pi), by winding along the curve."""
    g = figure_eight_grading_data(E)

    def curve_fwd(s):
        th = np.pi * np.asarray(s, dtype=float)
        return (2.0 + 1.0j * (E / 8.0) * np.cos(th))[:, None]

    def curve_rev(s):
        th = np.pi * (1.0 - np.asarray(s, dtype=float))
        return (2.0 + 1.0j * (E / 8.0) * np.cos(th))[:, None]

    if chord == "pi_to_0":
        # path from the 0-branch to the pi-branch computes ind(pi -> 0)
        return index_by_winding(SplitPlanePath(curve_fwd))
    if chord == "0_to_pi":
        return index_by_winding(SplitPlanePath(curve_rev))
    raise ValueError("chord must be 'pi_to_0' or '0_to_pi'")


def figure_eight_formula_index(E, chord):
    g = figure_eight_grading_data(E)
    if chord == "pi_to_0":
        ang = kahler_angles_split(g["frame_pi"], g["frame_0"])
        return self_intersection_index(g["theta_pi"], g["theta_0"], ang)
    ang = kahler_angles_split(g["frame_0"], g["frame_pi"])
    return self_intersection_index(g["theta_0"], g["theta_pi"], ang)


# ---------------------------------------------------------------------------
# Numeric frames along immersion paths (doubled-handle registry)
# ---------------------------------------------------------------------------

def frames_along_segments(imm: Immersion, segments, m=257):
    """Tangent frames (Jacobian columns) sampled along a piecewise path."""
    frames = []
    for ci, curve in segments:
        s = np.linspace(0.0, 1.0, m)
        W = curve(s)
        frames.append(imm.charts[ci].jac(W))
    return np.concatenate(frames, axis=0)


def split_z_curves(frames, tol=1e-8):
    """Extract per-coordinate phase curves from split frames.

    Each frame column must be supported on a single ambient coordinate;
    column order may vary (chart seams permute them), so columns are
    matched to their supporting coordinate.  Returns (m, N) complex.
    """
    frames = np.asarray(frames)
    m, N, d = frames.shape
    if N != d:
        raise ValueError("frames must be square to define split planes")
    Z = np.empty((m, N), dtype=complex)
    for i in range(m):
        J = frames[i]
        mag = np.abs(J)
        support = np.argmax(mag, axis=0)          # coordinate per column
        if len(set(support.tolist())) != N:
            raise ValueError("frame is not split (coordinate collision)")
        for col in range(N):
            c = support[col]
            rest = np.delete(mag[:, col], c)
            if rest.size and np.max(rest) > tol * mag[c, col]:
                raise ValueError("frame is not split (mixed column)")
            Z[i, c] = J[c, col]
    return Z


def path_z_curves(imm: Immersion, segments):
    """SplitPlanePath reading its z-curves off the immersion's frames.

    Arbitrary parameters in [0,1] map to (segment, local) pairs, so the
    winding oracle can refine the sampling on demand.
    """
    nseg = len(segments)

    def curve(s):
        s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
        g = s * nseg
        seg_idx = np.minimum(g.astype(int), nseg - 1)
        loc = g - seg_idx
        out = None
        for j, (ci, cv) in enumerate(segments):
            sel = seg_idx == j
            if not np.any(sel):
                continue
            Z = split_z_curves(imm.charts[ci].jac(cv(loc[sel])))
            if out is None:
                out = np.empty((len(s), Z.shape[1]), dtype=complex)
            out[sel] = Z
        return out

    return SplitPlanePath(curve, label="frames")


def handle_chord_index(handle: Immersion, copy, chord):
    """K-level index of a doubled-handle chord, by winding along the
    registered path through the given bottleneck copy.

    copy: 'inner' (kept pair, the paper's 0-labels) or 'outer'; chord as in
    local_trace_chord_index.  The path from the q_+ preimage to the q_-
    preimage computes ind(q_- -> q_+); the reverse path the dual chord.
    """
    segs = handle.meta["teardrop_paths"][copy]
    if chord == "plus_to_minus":
        segs = [(ci, (lambda s, c=curve: c(1.0 - np.asarray(s, dtype=float))))
                for ci, curve in reversed(segs)]
    elif chord != "minus_to_plus":
        raise ValueError("chord must be 'minus_to_plus' or 'plus_to_minus'")
    return index_by_winding(path_z_curves(handle, segs))
