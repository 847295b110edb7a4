"""Geometric constructions for the C^7 domain.

* the non-convexity witness pair and its midpoint;
* the two-phase contraction H(s, t) of a loop in Gamma to the origin;
* the separating polynomial f_N used for polynomial convexity, and a
  certificate search around it (:func:`separate`);
* the lift of a hyperplane in C^5 to one in C^7 through phi_eta.

f_N is

    f_N(x) = (x2 - z0 x3 - w0 x6 + z0 w0 x7) * det(sum_{k=0}^N (B_x M)^k),

with M = diag(z0, w0) and B_x = [[x1, x1 x4 - x5], [1, x4]].  Every
symmetric function of B_x M depends on x1, x4 and x1 x4 - x5 only, so this
fixed off-diagonal split loses nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core_types import (
    DEFAULT_CONFIG, InvalidArgument, PathLeavesGamma, ScanConfig, SeparationNotCertified,
    TargetNotOutside, as_complex, as_point7, derive_seed, random_contraction,
)
from .domain333 import base_triple, in_Gamma_333, pi333, psi_i_arrays, starlike_scale
from .tetrablock import tetra_margin

__all__ = [
    "NONCONVEX_X", "NONCONVEX_Y", "nonconvexity_witness", "homotopy_H",
    "fn_polynomial", "fn_defect_bound", "SeparationCertificate", "separate",
    "gamma_samples", "hyperplane_lift", "hyperplane_value",
]

NONCONVEX_X = np.array([1, 1j, 1j, 1, 1, 1j, 1j])
NONCONVEX_Y = np.array([-1j, 1, -1j, -1j, -1, 1j, 1])


def nonconvexity_witness(cfg: ScanConfig = DEFAULT_CONFIG):
    """The two points and their midpoint with their Gamma verdicts."""
    mid = (NONCONVEX_X + NONCONVEX_Y) / 2
    verdicts = tuple(in_Gamma_333(p, cfg) for p in (NONCONVEX_X, NONCONVEX_Y, mid))
    return NONCONVEX_X.copy(), NONCONVEX_Y.copy(), mid, verdicts


def homotopy_H(gamma_samples, s: float, cfg: ScanConfig = DEFAULT_CONFIG, verify: bool = True):
    """H(s, t) for every (t, gamma(t)) sample.

    For s <= 1/2 the point is (2 s gamma1(t), 0, ..., 0); for s >= 1/2 it is
    the pivot-1 starlike scaling of gamma(t) by 2s - 1.  With ``verify`` the
    inputs and outputs are checked with :func:`in_Gamma_333`.
    """
    if not 0.0 <= s <= 1.0:
        raise InvalidArgument("s must lie in [0, 1]")
    out = []
    for t, g in gamma_samples:
        g = as_point7(g)
        if verify and not in_Gamma_333(g, cfg).in_closure:
            raise PathLeavesGamma(f"input point at t={t} is outside Gamma")
        if s <= 0.5:
            h = np.zeros(7, dtype=complex)
            h[0] = 2.0 * s * g[0]
        else:
            h = starlike_scale(g, 2.0 * s - 1.0, pivot=1)
        if verify and not in_Gamma_333(h, cfg).in_closure:
            raise PathLeavesGamma(f"H({s}, {t}) is outside Gamma")
        out.append(h)
    return out


def _bm(x, z0, w0):
    x1, x4, x5 = x[0], x[3], x[4]
    return np.array([[x1 * z0, (x1 * x4 - x5) * w0], [z0, x4 * w0]])


def fn_polynomial(x, z0, w0, N: int) -> complex:
    """f_N(x) with the determinant of the truncated geometric sum formed
    directly."""
    x = as_point7(x)
    z0, w0 = as_complex(z0), as_complex(w0)
    if N < 0:
        raise InvalidArgument("N must be non-negative")
    C = _bm(x, z0, w0)
    S = np.eye(2, dtype=complex)
    P = np.eye(2, dtype=complex)
    for _ in range(N):
        P = P @ C
        S = S + P
    num = x[1] - z0 * x[2] - w0 * x[5] + z0 * w0 * x[6]
    return complex(num * (S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]))


def fn_defect_bound(q: float, N: int) -> float:
    """Upper bound of |f_N - Psi^(2)| over Gamma when max(|z0|, |w0|) = q.

    On Gamma every |x_j| <= 1, so the numerator is at most 4, and
    (x1, x4, x5) is realized by some B with ||B|| <= 1, so C = B M has
    ||C|| <= q.  Writing S_N = (I - C^{N+1})(I - C)^{-1},

        |det S_N - 1/det(I - C)| = |det(I - C^{N+1}) - 1| / |det(I - C)|
                                 <= (2 q^{N+1} + q^{2N+2}) / (1 - q)^2.
    """
    p = q ** (N + 1)
    return 4.0 * (2.0 * p + p * p) / (1.0 - q) ** 2


def gamma_samples(seed: int, n: int) -> list:
    """n points of Gamma: pi-images of seeded random contractions with
    norm bound one."""
    return [pi333(random_contraction(derive_seed(seed, k), 1.0)) for k in range(n)]


@dataclass(frozen=True)
class SeparationCertificate:
    kind: str                      # TetraLift | FNPolynomial | Hyperplane
    data: dict
    sup_on_sample: float
    value_at_target: float
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "data": self.data, "sup_on_sample": self.sup_on_sample,
                "value_at_target": self.value_at_target, "provenance": self.provenance}


_TRIPLES = {"(a1,a2,a3)": 3, "(a1,a4,a5)": 2, "(a2,a4,a6)": 1}


def _tetra_lift(a, cfg):
    worst_name, worst_m = None, math.inf
    for name, i in _TRIPLES.items():
        m = tetra_margin(base_triple(a, i))
        if m < worst_m:
            worst_name, worst_m = name, m
    if worst_m >= -cfg.boundary_band:
        return None
    return SeparationCertificate(
        "TetraLift", {"triple": worst_name, "tetra_margin": worst_m},
        sup_on_sample=math.nan, value_at_target=math.nan)


def _fn_search(a, radii, n_phase):
    """Candidate (z0, w0) ordered by the N the uniform bound requires."""
    t = 2.0 * math.pi * np.arange(n_phase) / n_phase
    cands = []
    for rz in radii:
        for rw in radii:
            Z = rz * np.exp(1j * t)[:, None]
            W = rw * np.exp(1j * t)[None, :]
            num, den = psi_i_arrays(2, Z, W, a)
            with np.errstate(divide="ignore", invalid="ignore"):
                val = np.abs(num) / np.abs(den)
            val = np.where(np.isfinite(val), val, 0.0)
            # spectral radius of B_a M from its trace and determinant
            tr = a[0] * Z + a[3] * W
            dt = a[4] * Z * W
            disc = np.sqrt(tr * tr - 4.0 * dt)
            rho = np.maximum(np.abs(tr + disc), np.abs(tr - disc)) / 2.0
            ok = (val > 1.0 + 1e-6) & (rho < 1.0 - 1e-6)
            if not ok.any():
                continue
            score = np.where(ok, val, 0.0)
            k = int(np.argmax(score))
            i, j = divmod(k, n_phase)
            eps = (float(val[i, j]) - 1.0) / 3.0
            q = max(rz, rw)
            N = _choose_N(q, eps)
            cands.append((N, -eps, complex(Z[i, 0]), complex(W[0, j])))
    cands.sort(key=lambda c: (c[0], c[1]))
    return cands


def _choose_N(q, eps, n_max=100000):
    N = 0
    while fn_defect_bound(q, N) >= eps:
        N += 1
        if N > n_max:
            return n_max
    return N


def _fn_certificate(a, cfg, samples, seed, radii, n_phase):
    cands = _fn_search(a, radii, n_phase)
    for N, neg_eps, z0, w0 in cands[:8]:
        eps = -neg_eps
        val = abs(fn_polynomial(a, z0, w0, N)) / (1.0 + eps)
        if not val > 1.0:
            continue
        sup = max(abs(fn_polynomial(y, z0, w0, N)) for y in samples) / (1.0 + eps)
        if sup > 1.0:
            raise SeparationNotCertified(f"f exceeds 1 on a Gamma sample (sup {sup:.6g})")
        return SeparationCertificate(
            "FNPolynomial",
            {"z0": [z0.real, z0.imag], "w0": [w0.real, w0.imag], "N": N, "epsilon": eps},
            sup_on_sample=float(sup), value_at_target=float(val),
            provenance={"samples": len(samples), "seed": seed, "radii": list(radii),
                        "phases": n_phase, "bound": "4(2q^(N+1)+q^(2N+2))/(1-q)^2"})
    return None


def separate(a, cfg: ScanConfig = DEFAULT_CONFIG, strategy: str = "auto", n_samples: int = 1000,
             seed: int = 0, radii=(0.2, 0.35, 0.5, 0.6, 0.7, 0.8, 0.9), n_phase: int = 48):
    """Certificate that a point outside Gamma is outside its polynomial hull.

    ``strategy="case_split"`` follows the proof: a base triple outside the
    closed tetrablock gives a TetraLift certificate, otherwise the f_N
    construction is used.  ``strategy="auto"`` tries the explicit f_N
    polynomial first and falls back to TetraLift, since an explicit
    polynomial is the stronger certificate whenever one is found.

    The f_N certificate is normalized by 1/(1+eps), with N chosen from the
    uniform bound :func:`fn_defect_bound`, and re-verified on ``n_samples``
    seeded Gamma samples.
    """
    a = as_point7(a)
    if strategy not in ("auto", "case_split"):
        raise InvalidArgument("strategy must be 'auto' or 'case_split'")
    v = in_Gamma_333(a, cfg)
    if not v.outside:
        raise TargetNotOutside(f"target verdict is {v.state.value}")
    lift = _tetra_lift(a, cfg)
    if strategy == "case_split" and lift is not None:
        return lift
    samples = gamma_samples(seed, n_samples)
    cert = _fn_certificate(a, cfg, samples, seed, radii, n_phase)
    if cert is not None:
        return cert
    if lift is not None:
        return lift
    raise SeparationNotCertified("no f_N parameters found with |Psi^(2)(a)| > 1")


def hyperplane_lift(l, c, eta):
    """Coefficients of L with L(x) = l(phi_eta(x)) for l = (a1, ..., a5)
    and constant c; returns (7 coefficients, c)."""
    a1, a2, a3, a4, a5 = (as_complex(v) for v in l)
    eta = as_complex(eta)
    if abs(eta) > 1.0 + 1e-12:
        raise InvalidArgument("|eta| must be at most 1")
    return np.array([a1, a4, a2, a4 * eta, a2 * eta, a5 * eta, a3 * eta]), as_complex(c)


def hyperplane_value(coeffs, x) -> complex:
    return complex(np.dot(np.asarray(coeffs, dtype=complex), np.asarray(x, dtype=complex)))
