"""Closed-form membership for the tetrablock and the symmetrized bidisc.

A point c = (c1, c2, c3) lies in the open tetrablock iff

    |c1 - conj(c2) c3| + |c1 c2 - c3| < 1 - |c2|^2,

and in its closure iff the non-strict inequality holds.  The same is true
with c1 and c2 exchanged; :func:`tetra_margin` evaluates both and returns
the smaller slack.  The symmetrized bidisc is reached through the embedding
(s, p) -> (s/2, s/2, p).
"""

from __future__ import annotations

import numpy as np

from .core_types import (
    DEFAULT_CONFIG, DenominatorVanishes, ScanConfig, State, Verdict, as_point2, as_point3,
)

__all__ = [
    "psi", "tetra_margin", "tetra_margin_array", "in_G_tetra", "in_Gamma_tetra",
    "bgamma_deviation", "in_bGamma_tetra", "in_G_bidisc", "in_Gamma_bidisc",
    "bidisc_to_tetra",
]


def psi(z: complex, c, tol: float = DEFAULT_CONFIG.tol) -> complex:
    """The Moebius map (c1 - z c3) / (1 - c2 z)."""
    c1, c2, c3 = as_point3(c)
    den = 1.0 - c2 * z
    if abs(den) < tol:
        raise DenominatorVanishes(f"1 - c2*z = {den!r}")
    return (c1 - z * c3) / den


def tetra_margin_array(c1, c2, c3):
    """Vectorized :func:`tetra_margin` over broadcastable arrays."""
    c1 = np.asarray(c1, dtype=complex)
    c2 = np.asarray(c2, dtype=complex)
    c3 = np.asarray(c3, dtype=complex)
    shared = np.abs(c1 * c2 - c3)
    m1 = (1.0 - np.abs(c2) ** 2) - (np.abs(c1 - np.conj(c2) * c3) + shared)
    m2 = (1.0 - np.abs(c1) ** 2) - (np.abs(c2 - np.conj(c1) * c3) + shared)
    return np.minimum(m1, m2)


def tetra_margin(c) -> float:
    c1, c2, c3 = as_point3(c)
    return float(tetra_margin_array(c1, c2, c3))


def in_G_tetra(c, cfg: ScanConfig = DEFAULT_CONFIG) -> Verdict:
    return Verdict.from_margin(tetra_margin(c), cfg)


def in_Gamma_tetra(c, cfg: ScanConfig = DEFAULT_CONFIG) -> Verdict:
    """Same margin as :func:`in_G_tetra`; read the result with
    ``Verdict.in_closure``."""
    return Verdict.from_margin(tetra_margin(c), cfg)


def bgamma_deviation(c) -> float:
    """Largest violation of |c3| = 1, |c2| <= 1, c1 = conj(c2) c3."""
    c1, c2, c3 = as_point3(c)
    return float(max(abs(abs(c3) - 1.0), max(abs(c2) - 1.0, 0.0), abs(c1 - np.conj(c2) * c3)))


def in_bGamma_tetra(c, cfg: ScanConfig = DEFAULT_CONFIG) -> Verdict:
    """Distinguished boundary of the tetrablock.

    An equality-defined set has no interior, so the verdict is two-state:
    Inside when every defining relation holds within ``boundary_band`` and
    Outside otherwise.  ``margin`` is the negated deviation.
    """
    dev = bgamma_deviation(c)
    state = State.INSIDE if dev <= cfg.boundary_band else State.OUTSIDE
    return Verdict(state, -dev, (), cfg)


def bidisc_to_tetra(q) -> np.ndarray:
    s, p = as_point2(q)
    return np.array([s / 2, s / 2, p])


def in_G_bidisc(q, cfg: ScanConfig = DEFAULT_CONFIG) -> Verdict:
    return in_G_tetra(bidisc_to_tetra(q), cfg)


def in_Gamma_bidisc(q, cfg: ScanConfig = DEFAULT_CONFIG) -> Verdict:
    return in_Gamma_tetra(bidisc_to_tetra(q), cfg)
