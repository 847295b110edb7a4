"""The domain in C^5 for the block structure diag(z1, z2, z2).

Points are written xt = (x1, x2, x3, y1, y2).  For A in M_3(C),

    pi312(A) = (a11, det A12 + det A13, det A, a22 + a33, det A23),

and membership is governed by the one-variable rational map

    Psi3(z, xt) = (x3 z^2 - x2 z + x1) / (y2 z^2 - y1 z + 1).

The maps ``phi_eta`` connect this domain with the one in C^7: x lies in
G (resp. Gamma) of C^7 exactly when phi_eta(x) lies in the C^5 domain for
every eta on the unit circle.
"""

from __future__ import annotations

import math

import numpy as np

from .core_types import (
    DEFAULT_CONFIG, DenominatorVanishes, ScanConfig, Verdict, as_complex, as_matrix3,
    as_point5, as_point7, det3,
)
from .domain333 import GOLDEN, TWO_PI, _disc_inf
from .tetrablock import tetra_margin_array

__all__ = [
    "pi312", "psi3", "denominator_root_margin", "sup_psi3_circle", "in_G_312",
    "in_Gamma_312", "bidisc_fiber", "p_fiber", "p_fiber_arrays", "in_Gamma_312_pfiber",
    "phi_eta", "retract_pair", "embed", "eta_bridge_G", "eta_bridge_Gamma",
]


def pi312(A) -> np.ndarray:
    A = as_matrix3(A)
    m12 = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    m13 = A[0, 0] * A[2, 2] - A[0, 2] * A[2, 0]
    m23 = A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1]
    return np.array([A[0, 0], m12 + m13, det3(A), A[1, 1] + A[2, 2], m23])


def psi3(z, xt, tol: float = DEFAULT_CONFIG.tol) -> complex:
    x1, x2, x3, y1, y2 = as_point5(xt)
    den = y2 * z * z - y1 * z + 1.0
    if abs(den) < tol:
        raise DenominatorVanishes(f"Psi3 denominator vanishes at {z!r}")
    return complex((x3 * z * z - x2 * z + x1) / den)


def denominator_root_margin(xt) -> float:
    """1 - max |root| of y2 t^2 - y1 t + 1 taken in reciprocal form.

    The denominator y2 z^2 - y1 z + 1 has no zero in the closed disc exactly
    when both roots of t^2 - y1 t + y2 lie in the open disc, so the margin is
    1 - max |lambda| over those roots (positive when zero-free on the closed
    disc).  Degenerate leading terms need no special case in this form.
    """
    _, _, _, y1, y2 = as_point5(xt)
    disc = np.sqrt(complex(y1 * y1 - 4.0 * y2))
    r = max(abs((y1 + disc) / 2.0), abs((y1 - disc) / 2.0))
    return 1.0 - r


def _circle_sup(xt, n: int, refine: int, rho: float = 1.0):
    x1, x2, x3, y1, y2 = as_point5(xt)

    def f(t):
        z = rho * np.exp(1j * t)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.abs(x3 * z * z - x2 * z + x1) / np.abs(y2 * z * z - y1 * z + 1.0)
        return np.where(np.isnan(v), -np.inf, v)

    t = TWO_PI * (np.arange(n) + GOLDEN) / n
    vals = f(t)
    k = int(np.argmax(vals))
    best, a, h = float(vals[k]), float(t[k]), TWO_PI / n
    for _ in range(refine):
        cand = np.array([a - h, a + h])
        cv = f(cand)
        j = int(np.argmax(cv))
        if cv[j] > best:
            best, a = float(cv[j]), float(cand[j])
        else:
            h *= 0.5
    return best, rho * np.exp(1j * a)


def sup_psi3_circle(xt, cfg: ScanConfig = DEFAULT_CONFIG, rho: float = 1.0):
    """Grid-plus-refinement estimate of sup |Psi3| on the circle of radius rho."""
    return _circle_sup(xt, cfg.torus_n, cfg.refine_iters, rho)


def _is_degenerate(xt, tol) -> bool:
    x1, x2, x3, y1, y2 = as_point5(xt)
    return abs(x3 - x1 * y2) <= tol and abs(x2 - x1 * y1) <= tol


def _margin312(xt, cfg: ScanConfig, closed: bool):
    xt = as_point5(xt)
    rm = denominator_root_margin(xt)
    detail = {"root_margin": rm}
    if rm < -cfg.boundary_band:
        return rm, (), detail
    if _is_degenerate(xt, cfg.tol):
        detail["degenerate"] = True
        return min(rm, 1.0 - abs(xt[0])), (), detail
    if rm > cfg.boundary_band or not closed:
        sup, w = sup_psi3_circle(xt, cfg)
    else:
        sup, w = -math.inf, 0j
        for k in range(1, 13):
            s, ww = sup_psi3_circle(xt, cfg, 1.0 - 2.0 ** (-k))
            if s > sup:
                sup, w = s, ww
    detail["sup"] = sup
    return min(rm, 1.0 - sup), (w,), detail


def in_G_312(xt, cfg: ScanConfig = DEFAULT_CONFIG) -> Verdict:
    """Denominator zero-free on the closed disc and sup_T |Psi3| < 1
    (|x1| < 1 when Psi3 is constant)."""
    m, w, d = _margin312(xt, cfg, closed=False)
    return Verdict.from_margin(m, cfg, w, **d)


def in_Gamma_312(xt, cfg: ScanConfig = DEFAULT_CONFIG) -> Verdict:
    """Denominator zero-free on the open disc and sup over the open disc of
    |Psi3| <= 1; read with ``Verdict.in_closure``."""
    m, w, d = _margin312(xt, cfg, closed=True)
    return Verdict.from_margin(m, cfg, w, **d)


def bidisc_fiber(xt, z1, tol: float = DEFAULT_CONFIG.tol) -> np.ndarray:
    x1, x2, x3, y1, y2 = as_point5(xt)
    z1 = as_complex(z1)
    den = 1.0 - z1 * x1
    if abs(den) < tol:
        raise DenominatorVanishes(f"1 - z1 x1 vanishes at {z1!r}")
    return np.array([(y1 - z1 * x2) / den, (y2 - z1 * x3) / den])


def p_fiber_arrays(xt, z):
    x1, x2, x3, y1, y2 = as_point5(xt)
    z = np.asarray(z, dtype=complex)
    den = 2.0 - y1 * z
    return (2.0 * x1 - z * x2) / den, (y1 - 2.0 * z * y2) / den, (x2 - 2.0 * z * x3) / den


def p_fiber(xt, z, tol: float = DEFAULT_CONFIG.tol) -> np.ndarray:
    _, _, _, y1, _ = as_point5(xt)
    z = as_complex(z)
    if abs(2.0 - y1 * z) < tol:
        raise DenominatorVanishes(f"2 - y1 z vanishes at {z!r}")
    return np.array([complex(v) for v in p_fiber_arrays(xt, z)])


def in_Gamma_312_pfiber(xt, cfg: ScanConfig = DEFAULT_CONFIG) -> Verdict:
    """Independent Gamma test: p_fiber(xt, z) in the closed tetrablock for
    every z of a polar grid of the closed disc.  A pole of the fiber in the
    open disc (|y1| > 2) is Outside evidence."""
    xt = as_point5(xt)
    y1 = abs(xt[3])
    if y1 > 2.0 + cfg.boundary_band:
        return Verdict.from_margin(1.0 - y1 / 2.0, cfg, (), pole=True)

    def margin(z):
        return tetra_margin_array(*p_fiber_arrays(xt, z))

    m, z = _disc_inf(margin, cfg)
    return Verdict.from_margin(m, cfg, (z,))


def phi_eta(x, eta) -> np.ndarray:
    x1, x2, x3, x4, x5, x6, x7 = as_point7(x)
    eta = as_complex(eta)
    return np.array([x1, x3 + eta * x5, eta * x7, x2 + eta * x4, eta * x6])


def retract_pair(x) -> np.ndarray:
    """i2(x) = (x1, x3 + x5, x7, x2 + x4, x6), the map phi_eta at eta = 1."""
    return phi_eta(x, 1.0)


def embed(xt) -> np.ndarray:
    """theta2(xt) = (x1, y1/2, x2/2, y1/2, x2/2, y2, x3), a right inverse of
    :func:`retract_pair`."""
    x1, x2, x3, y1, y2 = as_point5(xt)
    return np.array([x1, y1 / 2, x2 / 2, y1 / 2, x2 / 2, y2, x3])


def _eta_bridge(x, test, cfg: ScanConfig, n_eta: int):
    x = as_point7(x)
    t = TWO_PI * (np.arange(n_eta) + GOLDEN) / n_eta
    margins = [test(phi_eta(x, np.exp(1j * a)), cfg).margin for a in t]
    k = int(np.argmin(margins))
    best, a, h = margins[k], float(t[k]), TWO_PI / n_eta
    for _ in range(min(cfg.refine_iters, 12)):
        cand = [a - h, a + h]
        cm = [test(phi_eta(x, np.exp(1j * c)), cfg).margin for c in cand]
        j = int(np.argmin(cm))
        if cm[j] < best:
            best, a = cm[j], cand[j]
        else:
            h *= 0.5
    return Verdict.from_margin(best, cfg, (np.exp(1j * a),), n_eta=n_eta)


def eta_bridge_G(x, cfg: ScanConfig = DEFAULT_CONFIG, n_eta: int = 64) -> Verdict:
    """G membership of x in C^7 through in_G_312(phi_eta(x)) over an eta grid;
    the margin is the worst over eta."""
    return _eta_bridge(x, in_G_312, cfg, n_eta)


def eta_bridge_Gamma(x, cfg: ScanConfig = DEFAULT_CONFIG, n_eta: int = 64) -> Verdict:
    return _eta_bridge(x, in_Gamma_312, cfg, n_eta)
