"""Ambient symplectic vector spaces C^n (optionally with periodic real directions).

Coordinates are complex, z_c = q_c + i p_c, and the symplectic form is the
standard sum dq_c ^ dp_c.  A coordinate may be marked as the cobordism
factor; T*S^1 directions are modeled as C with the real part taken modulo a
period.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["AmbientSpace", "pullback_form", "pullback_residual"]


@dataclass(frozen=True)
class AmbientSpace:
    """Product of complex coordinate lines with the standard symplectic form.

    cobordism_slot: index of the coordinate treated as the C cobordism factor.
    base_periods: per-coordinate period of the real direction (None = R).
    """
    n_complex: int
    cobordism_slot: int | None = None
    base_periods: tuple = field(default=None)

    def __post_init__(self):
        if self.n_complex < 1:
            raise ValueError("n_complex must be >= 1")
        if self.cobordism_slot is not None and not (0 <= self.cobordism_slot < self.n_complex):
            raise ValueError("cobordism_slot out of range")
        if self.base_periods is not None:
            if len(self.base_periods) != self.n_complex:
                raise ValueError("base_periods must have one entry per coordinate")
            object.__setattr__(self, "base_periods", tuple(self.base_periods))

    def reduce(self, Z):
        """Reduce periodic real parts into [0, period)."""
        Z = np.asarray(Z, dtype=complex)
        if self.base_periods is None:
            return Z
        out = Z.copy()
        for c, per in enumerate(self.base_periods):
            if per is not None:
                re = np.mod(out[..., c].real, per)
                out[..., c] = re + 1j * out[..., c].imag
        return out

    def distance(self, Z1, Z2):
        """Euclidean ambient distance, shortest over periodic translations."""
        Z1 = np.asarray(Z1, dtype=complex)
        Z2 = np.asarray(Z2, dtype=complex)
        diff = Z1 - Z2
        if self.base_periods is not None:
            diff = diff.copy()
            for c, per in enumerate(self.base_periods):
                if per is not None:
                    re = diff[..., c].real
                    re = re - per * np.round(re / per)
                    diff[..., c] = re + 1j * diff[..., c].imag
        return np.sqrt(np.sum(np.abs(diff) ** 2, axis=-1))

    def omega(self, u, v):
        """Symplectic form on tangent vectors written complexly: sum Im(conj(u) v)."""
        u = np.asarray(u, dtype=complex)
        v = np.asarray(v, dtype=complex)
        return np.sum((np.conj(u) * v).imag, axis=-1)


def pullback_form(J):
    """Pulled-back symplectic form of a complex Jacobian batch.

    J has shape (m, N, d): d real domain directions, N complex coordinates.
    Returns (m, d, d) antisymmetric matrices P_ab = sum_c Im(conj(J_ca) J_cb).
    """
    J = np.asarray(J, dtype=complex)
    return np.einsum("mca,mcb->mab", np.conj(J), J).imag


def pullback_residual(J):
    """Frobenius norm per sample of the pulled-back symplectic form."""
    P = pullback_form(J)
    return np.sqrt(np.sum(P * P, axis=(1, 2)))
