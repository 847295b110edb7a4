"""Schwarz-lemma necessary conditions, the scalar Pick test and membership
propagation along analytic discs.

For x in G of C^7 and a fiber triple c(z) = (c1, c2, c3)(z),

    G1 = sup_{|z| <= 1} (|c1 - conj(c2) c3| + |c1 c2 - c3|) / (1 - |c2|^2)

over the X fiber, G2 with c1 and c2 exchanged, and H1, H2 (Y fiber), I1, I2
(Z fiber) likewise.  If an analytic map from the disc into Gamma sends 0 to 0
and lambda0 to x, every one of these is at most |lambda0|.  The C^5 version
uses the p-fiber.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_types import (
    DEFAULT_CONFIG, DuplicateNodes, InvalidArgument, Lambda0OutOfRange, ScanConfig,
    TargetNotInG, as_complex, as_point5, as_point7,
)
from .domain312 import in_G_312, p_fiber_arrays
from .domain333 import GOLDEN, TWO_PI, fiber_arrays, in_G_333

__all__ = [
    "schwarz_quantity_array", "sup_quantity", "sup_quantity_312", "SchwarzReport333",
    "SchwarzReport312", "schwarz_necessary_333", "schwarz_necessary_312", "pick_matrix",
    "pick_matrix_psd", "membership_propagation_check",
]

_WHICH = {"G1": ("X", False), "G2": ("X", True), "H1": ("Y", False), "H2": ("Y", True),
          "I1": ("Z", False), "I2": ("Z", True)}


def schwarz_quantity_array(c1, c2, c3):
    """(|c1 - conj(c2) c3| + |c1 c2 - c3|) / (1 - |c2|^2), elementwise."""
    return (np.abs(c1 - np.conj(c2) * c3) + np.abs(c1 * c2 - c3)) / (1.0 - np.abs(c2) ** 2)


def _disc_sup(fn, cfg: ScanConfig):
    nr, nt = cfg.disc_nr, cfg.disc_ntheta
    r = np.linspace(0.0, 1.0, nr)[:, None]
    t = TWO_PI * (np.arange(nt) + GOLDEN) / nt
    vals = fn(r * np.exp(1j * t)[None, :])
    k = int(np.argmax(vals))
    best = float(vals.flat[k])
    rr, tt = float(r[k // nt, 0]), float(t[k % nt])
    hr, ht = 1.0 / (nr - 1), TWO_PI / nt
    for _ in range(cfg.refine_iters):
        cr = np.clip(rr + hr * np.array([1, -1, 0, 0, 1, 1, -1, -1]), 0.0, 1.0)
        ct = tt + ht * np.array([0, 0, 1, -1, 1, -1, 1, -1])
        cv = fn(cr * np.exp(1j * ct))
        j = int(np.argmax(cv))
        if cv[j] > best:
            best, rr, tt = float(cv[j]), float(cr[j]), float(ct[j])
        else:
            hr *= 0.5
            ht *= 0.5
    return best, rr * np.exp(1j * tt)


def _sup_over_fiber(arrays, swap, cfg):
    def fn(z):
        c1, c2, c3 = arrays(z)
        if swap:
            c1, c2 = c2, c1
        return schwarz_quantity_array(c1, c2, c3)

    return _disc_sup(fn, cfg)


def sup_quantity(x, which: str, cfg: ScanConfig = DEFAULT_CONFIG, check: bool = True):
    """One of G1, G2, H1, H2, I1, I2 with its maximizing disc point."""
    x = as_point7(x)
    if which not in _WHICH:
        raise InvalidArgument(f"which must be one of {sorted(_WHICH)}")
    if check and not in_G_333(x, cfg).inside:
        raise TargetNotInG("x is not in G")
    fib, swap = _WHICH[which]
    return _sup_over_fiber(lambda z: fiber_arrays(x, fib, z), swap, cfg)


def sup_quantity_312(xt, which: str, cfg: ScanConfig = DEFAULT_CONFIG, check: bool = True):
    """Gt1 (p-fiber) or Gt2 (p1 and p2 exchanged)."""
    xt = as_point5(xt)
    if which not in ("Gt1", "Gt2"):
        raise InvalidArgument("which must be Gt1 or Gt2")
    if check and not in_G_312(xt, cfg).inside:
        raise TargetNotInG("xt is not in G")
    return _sup_over_fiber(lambda z: p_fiber_arrays(xt, z), which == "Gt2", cfg)


@dataclass(frozen=True)
class SchwarzReport333:
    lambda0: complex
    G1: float
    G2: float
    H1: float
    H2: float
    I1: float
    I2: float
    necessary_ok: bool
    worst: tuple

    def to_json(self) -> dict:
        w = self.worst[1]
        return {"lambda0": [self.lambda0.real, self.lambda0.imag],
                "G1": self.G1, "G2": self.G2, "H1": self.H1, "H2": self.H2,
                "I1": self.I1, "I2": self.I2, "necessary_ok": self.necessary_ok,
                "worst": {"name": self.worst[0], "witness": [w.real, w.imag]}}


@dataclass(frozen=True)
class SchwarzReport312:
    lambda0: complex
    Gt1: float
    Gt2: float
    necessary_ok: bool

    def to_json(self) -> dict:
        return {"lambda0": [self.lambda0.real, self.lambda0.imag], "Gt1": self.Gt1,
                "Gt2": self.Gt2, "necessary_ok": self.necessary_ok}


def _check_lambda0(lambda0):
    lam = as_complex(lambda0)
    if not 0.0 < abs(lam) < 1.0:
        raise Lambda0OutOfRange("need 0 < |lambda0| < 1")
    return lam


def schwarz_necessary_333(lambda0, x, cfg: ScanConfig = DEFAULT_CONFIG) -> SchwarzReport333:
    """``necessary_ok`` false rules out an analytic map D -> Gamma with
    0 -> 0 and lambda0 -> x.  ``necessary_ok`` true proves nothing."""
    lam = _check_lambda0(lambda0)
    x = as_point7(x)
    if not in_G_333(x, cfg).inside:
        raise TargetNotInG("x is not in G")
    vals = {w: sup_quantity(x, w, cfg, check=False) for w in _WHICH}
    name = max(vals, key=lambda k: vals[k][0])
    ok = all(v[0] <= abs(lam) + cfg.boundary_band for v in vals.values())
    return SchwarzReport333(lam, *(float(vals[w][0]) for w in _WHICH), ok,
                            (name, complex(vals[name][1])))


def schwarz_necessary_312(lambda0, xt, cfg: ScanConfig = DEFAULT_CONFIG) -> SchwarzReport312:
    lam = _check_lambda0(lambda0)
    xt = as_point5(xt)
    if not in_G_312(xt, cfg).inside:
        raise TargetNotInG("xt is not in G")
    g1 = sup_quantity_312(xt, "Gt1", cfg, check=False)[0]
    g2 = sup_quantity_312(xt, "Gt2", cfg, check=False)[0]
    return SchwarzReport312(lam, float(g1), float(g2),
                            max(g1, g2) <= abs(lam) + cfg.boundary_band)


def pick_matrix(nodes, values) -> np.ndarray:
    z = np.array([as_complex(v) for v in nodes])
    w = np.array([as_complex(v) for v in values])
    if z.shape != w.shape or z.size == 0:
        raise InvalidArgument("nodes and values must be non-empty and of equal length")
    if np.any(np.abs(z) >= 1.0):
        raise InvalidArgument("nodes must lie in the open disc")
    diff = np.abs(z[:, None] - z[None, :]) + np.eye(z.size)
    if np.any(diff == 0.0):
        raise DuplicateNodes("nodes must be pairwise distinct")
    return (1.0 - np.conj(w)[:, None] * w[None, :]) / (1.0 - np.conj(z)[:, None] * z[None, :])


def pick_matrix_psd(nodes, values, tol: float = 1e-12):
    """(psd, min_eig) for the Pick matrix ((1 - conj(w_i) w_j)/(1 - conj(z_i) z_j))."""
    P = pick_matrix(nodes, values)
    P = 0.5 * (P + P.conj().T)
    lam = float(np.linalg.eigvalsh(P)[0])
    return lam >= -tol, lam


def membership_propagation_check(samples, cfg: ScanConfig = DEFAULT_CONFIG) -> dict:
    """Along a caller-supplied analytic disc: once one sample is strictly in
    G, every sample should be in G (up to the boundary band)."""
    states = []
    for t, p in samples:
        p = np.asarray(p, dtype=complex)
        v = in_G_333(p, cfg) if p.size == 7 else in_G_312(p, cfg)
        states.append((t, v))
    any_inside = any(v.inside for _, v in states)
    violations = [t for t, v in states if any_inside and v.outside]
    band = [t for t, v in states if v.state.value == "BoundaryBand"]
    return {"n": len(states), "any_inside": any_inside, "ok": not violations,
            "violations": violations, "band_flags": band}
