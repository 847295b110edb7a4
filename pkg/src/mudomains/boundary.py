"""Candidate distinguished boundaries K (in C^7) and K1 (in C^5).

    K  = {x in Gamma : x1 = conj(x6) x7, x3 = conj(x4) x7, x5 = conj(x2) x7, |x7| = 1}
    K1 = {xt in Gamma : x1 = conj(y2) x3, x2 = conj(y1) x3, |x3| = 1}

Both are equality-defined, so their verdicts are two-state (Inside or
Outside) with ``margin = -deviation``.  The unitary images pi(U(3)) land in
these sets, which is checked by sampling Haar unitaries.
"""

from __future__ import annotations

import numpy as np

from .core_types import (
    DEFAULT_CONFIG, DomainViolation, ScanConfig, State, Verdict, as_complex, as_point5,
    as_point7, derive_seed, random_unitary,
)
from .domain312 import GOLDEN, TWO_PI, in_Gamma_312, phi_eta, pi312
from .domain333 import fiber_arrays, in_Gamma_333, pi333

__all__ = [
    "k_deviation", "k1_deviation", "in_K", "in_K1", "unitary_image_checks",
    "param_K", "param_K1", "fiber_boundary_check", "k_bridge_check",
]


def k_deviation(x) -> float:
    x1, x2, x3, x4, x5, x6, x7 = as_point7(x)
    c = np.conj
    return float(max(
        abs(x1 - c(x6) * x7), abs(x3 - c(x4) * x7), abs(x5 - c(x2) * x7),
        abs(x2 - c(x5) * x7), abs(x4 - c(x3) * x7), abs(abs(x7) - 1.0),
    ))


def k1_deviation(xt) -> float:
    x1, x2, x3, y1, y2 = as_point5(xt)
    c = np.conj
    return float(max(
        abs(x1 - c(y2) * x3), abs(x2 - c(y1) * x3),
        abs(y1 - c(x2) * x3), abs(y2 - c(x1) * x3), abs(abs(x3) - 1.0),
    ))


def _two_state(dev, gamma: Verdict, cfg: ScanConfig, **detail) -> Verdict:
    ok = dev <= cfg.boundary_band and gamma.in_closure
    margin = -dev if gamma.in_closure else min(-dev, gamma.margin)
    return Verdict(State.INSIDE if ok else State.OUTSIDE, float(margin), (), cfg,
                   dict(detail, deviation=dev, gamma_state=gamma.state.value))


def in_K(x, cfg: ScanConfig = DEFAULT_CONFIG) -> Verdict:
    x = as_point7(x)
    return _two_state(k_deviation(x), in_Gamma_333(x, cfg), cfg)


def in_K1(xt, cfg: ScanConfig = DEFAULT_CONFIG) -> Verdict:
    xt = as_point5(xt)
    return _two_state(k1_deviation(xt), in_Gamma_312(xt, cfg), cfg)


def unitary_image_checks(seed: int, n: int, cfg: ScanConfig = DEFAULT_CONFIG) -> dict:
    """Sample n Haar unitaries and test pi333(U) in K and pi312(U) in K1."""
    if n < 1:
        raise DomainViolation("n must be at least 1")
    failures = []
    worst_k = worst_k1 = 0.0
    for k in range(n):
        U = random_unitary(derive_seed(seed, k))
        vk = in_K(pi333(U), cfg)
        vk1 = in_K1(pi312(U), cfg)
        worst_k = max(worst_k, vk.detail["deviation"])
        worst_k1 = max(worst_k1, vk1.detail["deviation"])
        if not (vk.inside and vk1.inside):
            failures.append({"sample": k, "K": vk.state.value, "K1": vk1.state.value})
    return {"n": n, "seed": seed, "ok": not failures, "worst_deviation_K": worst_k,
            "worst_deviation_K1": worst_k1, "failures": failures}


def param_K(d, u) -> np.ndarray:
    """(c4, c5, c6) in the closed tridisc and u on the circle ->
    (conj(c6) u, conj(c5) u, conj(c4) u, c4, c5, c6, u)."""
    c4, c5, c6 = (as_complex(v) for v in d)
    u = as_complex(u)
    if max(abs(c4), abs(c5), abs(c6)) > 1.0 + 1e-12:
        raise DomainViolation("parameters must lie in the closed unit disc")
    if abs(abs(u) - 1.0) > 1e-12:
        raise DomainViolation("u must lie on the unit circle")
    c = np.conj
    return np.array([c(c6) * u, c(c5) * u, c(c4) * u, c4, c5, c6, u])


def param_K1(y1, y2, u) -> np.ndarray:
    """y1 in the closed disc of radius 2, y2 in the closed disc, u on the
    circle -> (conj(y2) u, conj(y1) u, u, y1, y2)."""
    y1, y2, u = as_complex(y1), as_complex(y2), as_complex(u)
    if abs(y1) > 2.0 + 1e-12 or abs(y2) > 1.0 + 1e-12:
        raise DomainViolation("need |y1| <= 2 and |y2| <= 1")
    if abs(abs(u) - 1.0) > 1e-12:
        raise DomainViolation("u must lie on the unit circle")
    return np.array([np.conj(y2) * u, np.conj(y1) * u, u, y1, y2])


# (fiber pair, denominator coefficient indices) per case
_FIBER_CASES = (
    ("Z", "Y", 3, 1),
    ("X", "Y", 0, 1),
    ("Z", "X", 3, 0),
)


def _fiber_bgamma_worst(x, which, on_circle: bool, cfg: ScanConfig) -> float:
    if on_circle:
        z = np.exp(1j * TWO_PI * (np.arange(cfg.torus_n) + GOLDEN) / cfg.torus_n)
    else:
        r = np.linspace(0.0, 1.0, cfg.disc_nr, endpoint=False)[:, None]
        z = (r * np.exp(1j * TWO_PI * (np.arange(cfg.disc_ntheta) + GOLDEN)
                        / cfg.disc_ntheta)[None, :]).ravel()
    with np.errstate(divide="ignore", invalid="ignore"):
        c1, c2, c3 = fiber_arrays(x, which, z)
        dev = np.maximum.reduce([
            np.abs(np.abs(c3) - 1.0),
            np.maximum(np.abs(c2) - 1.0, 0.0),
            np.abs(c1 - np.conj(c2) * c3),
        ])
    dev = dev[np.isfinite(dev)]
    return float(dev.max()) if dev.size else 0.0


def fiber_boundary_check(x, cfg: ScanConfig = DEFAULT_CONFIG) -> dict:
    """Fiberwise distinguished-boundary test.

    For each pair of fibers, when both denominator coefficients have modulus
    below one the fibers are scanned on the circle; when one of them has
    modulus one they are scanned on the open disc.  A pair with a
    coefficient of modulus above one is not applicable.  ``fiber_ok`` holds
    when some applicable case has every scanned fiber in the distinguished
    boundary of the tetrablock, and ``agrees_with_K`` compares that with
    :func:`in_K`.
    """
    x = as_point7(x)
    band = cfg.boundary_band
    cases = []
    for f1, f2, i1, i2 in _FIBER_CASES:
        a, b = abs(x[i1]), abs(x[i2])
        if a > 1.0 + band or b > 1.0 + band:
            cases.append({"fibers": f1 + f2, "domain": "none", "worst_deviation": None})
            continue
        on_circle = a < 1.0 - band and b < 1.0 - band
        worst = max(_fiber_bgamma_worst(x, f1, on_circle, cfg),
                    _fiber_bgamma_worst(x, f2, on_circle, cfg))
        cases.append({"fibers": f1 + f2, "domain": "T" if on_circle else "D",
                      "worst_deviation": worst})
    # |x7| = 1 is part of every case of the characterization
    unimod = abs(abs(x[6]) - 1.0) <= band
    applicable = [c for c in cases if c["worst_deviation"] is not None]
    fiber_ok = unimod and bool(applicable) and any(c["worst_deviation"] <= 1e3 * band
                                                  for c in applicable)
    k = in_K(x, cfg)
    return {"cases": cases, "unimodular_x7": unimod, "fiber_ok": fiber_ok,
            "in_K": k.inside, "agrees_with_K": fiber_ok == k.inside}


def k_bridge_check(x, cfg: ScanConfig = DEFAULT_CONFIG, n_eta: int = 64) -> dict:
    """Compare in_K(x) with the AND over an eta grid of in_K1(phi_eta(x, eta))."""
    x = as_point7(x)
    k = in_K(x, cfg)
    t = TWO_PI * (np.arange(n_eta) + GOLDEN) / n_eta
    worst, worst_eta, all_in = -np.inf, 1.0 + 0j, True
    for a in t:
        eta = np.exp(1j * a)
        v = in_K1(phi_eta(x, eta), cfg)
        all_in = all_in and v.inside
        dev = -v.margin
        if dev > worst:
            worst, worst_eta = dev, eta
    return {"in_K": k.inside, "bridge": all_in, "agree": k.inside == all_in,
            "worst_eta": [float(worst_eta.real), float(worst_eta.imag)], "worst_deviation": float(worst)}
