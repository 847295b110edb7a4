"""The domain in C^7 cut out by the diagonal structure diag(z1, z2, z3).

A point x = (x1, ..., x7) lies in G when

    R_x(z) = 1 - x1 z1 - x2 z2 + x3 z1 z2 - x4 z3 + x5 z1 z3 + x6 z2 z3 - x7 z1 z2 z3

has no zero on the closed tridisc, and in Gamma when it has none on the open
tridisc.  For x = pi(A) this polynomial is det(I - A diag(z)).

Three equivalent routes to membership are implemented and kept independent:

* the rational map Psi^(1) over the torus together with the base triple
  (x2, x4, x6) in the tetrablock (``in_G_333``, ``in_Gamma_333``);
* fiberwise tetrablock tests over a closed disc (``in_G_333_fiberwise``);
* a direct zero search of R_x (``rpoly_zero_search``).

The structured singular value is computed by bisection on the weighted
scaling x -> (r x1, r x2, r^2 x3, r x4, r^2 x5, r^2 x6, r^3 x7), which maps
pi(A) to pi(rA).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .core_types import (
    DEFAULT_CONFIG, DenominatorVanishes, FiberBaseOutside, InvalidArgument, ScanConfig,
    Verdict, as_matrix3, as_point7, det3, operator_norm,
)
from .tetrablock import tetra_margin, tetra_margin_array

__all__ = [
    "pi333", "r_poly", "fiber", "fiber_arrays", "psi_i", "psi_i_arrays", "is_degenerate",
    "base_triple", "sup_psi_torus", "in_G_333", "in_G_333_fiberwise", "in_Gamma_333",
    "permute", "PERMUTATIONS", "scale_for_radius", "MuResult", "mu_E333",
    "starlike_scale", "rpoly_zero_search", "find_contractive_preimage",
]

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
TWO_PI = 2.0 * math.pi


def pi333(A) -> np.ndarray:
    A = as_matrix3(A)
    return np.array([
        A[0, 0],
        A[1, 1],
        A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0],
        A[2, 2],
        A[0, 0] * A[2, 2] - A[0, 2] * A[2, 0],
        A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1],
        det3(A),
    ])


def r_poly(x, z):
    """R_x at z = (z1, z2, z3); the z_i may be broadcastable arrays."""
    x1, x2, x3, x4, x5, x6, x7 = as_point7(x)
    z1, z2, z3 = (np.asarray(v, dtype=complex) for v in z)
    out = (1 - x1 * z1 - x2 * z2 + x3 * z1 * z2 - x4 * z3
           + x5 * z1 * z3 + x6 * z2 * z3 - x7 * z1 * z2 * z3)
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# fibers and rational maps

# fiber name -> (denominator coefficient, numerator pairs (a, b) for a - z b)
_FIBERS = {
    "X": (0, ((1, 2), (3, 4), (5, 6))),
    "Y": (1, ((0, 2), (3, 5), (4, 6))),
    "Z": (3, ((0, 4), (1, 5), (2, 6))),
}


def _fiber_key(which) -> str:
    key = str(which).upper()[:1]
    if key not in _FIBERS:
        raise InvalidArgument("fiber must be X, Y or Z")
    return key


def fiber_arrays(x, which, at):
    """Fiber triple components (c1, c2, c3) for an array of parameters,
    without a singularity gate."""
    x = as_point7(x)
    d, pairs = _FIBERS[_fiber_key(which)]
    at = np.asarray(at, dtype=complex)
    den = 1.0 - x[d] * at
    return tuple((x[a] - at * x[b]) / den for a, b in pairs)


def fiber(x, which, at, tol: float = DEFAULT_CONFIG.tol) -> np.ndarray:
    """x~(z1), y~(z2) or z~(z3) for ``which`` = X, Y or Z."""
    x = as_point7(x)
    d, _ = _FIBERS[_fiber_key(which)]
    if abs(1.0 - x[d] * at) < tol:
        raise DenominatorVanishes(f"fiber {which} denominator vanishes at {at!r}")
    return np.array([complex(c) for c in fiber_arrays(x, which, at)])


# map index -> (a, b, c, d, p, q, s) coordinate indices for
# (a - b u - c v + d u v) / (1 - p u - q v + s u v)
_PSI = {
    1: (0, 2, 4, 6, 1, 3, 5),   # variables (z2, z3)
    2: (1, 2, 5, 6, 0, 3, 4),   # variables (z1, z3)
    3: (3, 4, 5, 6, 0, 1, 2),   # variables (z1, z2)
}


def base_triple(x, i: int = 1) -> np.ndarray:
    """x'_{J(i)}: (x2, x4, x6), (x1, x4, x5) or (x1, x2, x3)."""
    x = as_point7(x)
    _, _, _, _, p, q, s = _PSI[i]
    return x[[p, q, s]]


def psi_i_arrays(i: int, u, v, x):
    """Numerator and denominator of Psi^(i) on arrays ``u``, ``v``."""
    x = as_point7(x)
    a, b, c, d, p, q, s = _PSI[i]
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    num = x[a] - x[b] * u - x[c] * v + x[d] * u * v
    den = 1.0 - x[p] * u - x[q] * v + x[s] * u * v
    return num, den


def psi_i(i: int, z, x, tol: float = DEFAULT_CONFIG.tol) -> complex:
    """Psi^(i) at the pair ``z``: (z2, z3) for i=1, (z1, z3) for i=2,
    (z1, z2) for i=3."""
    if i not in _PSI:
        raise InvalidArgument("i must be 1, 2 or 3")
    u, v = z
    num, den = psi_i_arrays(i, u, v, x)
    if abs(den) < tol:
        raise DenominatorVanishes(f"Psi^({i}) denominator vanishes at {z!r}")
    return complex(num / den)


def is_degenerate(x, i: int = 1, tol: float = DEFAULT_CONFIG.tol) -> bool:
    """True when Psi^(i) is the constant x_a (numerator = x_a * denominator)."""
    x = as_point7(x)
    a, b, c, d, p, q, s = _PSI[i]
    return (abs(x[b] - x[a] * x[p]) <= tol and abs(x[c] - x[a] * x[q]) <= tol
            and abs(x[d] - x[a] * x[s]) <= tol)


# ---------------------------------------------------------------------------
# scanning helpers


def _torus_sup(fn, n: int, refine_iters: int, rho: float = 1.0, starts: int = 8):
    """sup of ``fn(u, v)`` (a non-negative array function) over (rho T)^2.

    Grid of n x n phases with golden-ratio offsets, then compass refinement
    from each of the ``starts`` best grid-local maxima.  Several starts
    matter near the boundary of Gamma, where a narrow peak can sit between
    grid nodes while a broader local maximum just below it wins on the grid.  Returns
    (value, (u, v)).  NaN samples are ignored.
    """
    tu = TWO_PI * (np.arange(n) + GOLDEN) / n
    tv = TWO_PI * (np.arange(n) + (2.0 * GOLDEN) % 1.0) / n
    U = rho * np.exp(1j * tu)[:, None]
    V = rho * np.exp(1j * tv)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = fn(U, V)
    vals = np.where(np.isnan(vals), -np.inf, vals)
    # grid-local maxima on the periodic grid, best ``starts`` of them
    peak = np.ones(vals.shape, dtype=bool)
    for du in (-1, 0, 1):
        for dv in (-1, 0, 1):
            if du or dv:
                peak &= vals >= np.roll(np.roll(vals, du, axis=0), dv, axis=1)
    cand = np.flatnonzero(peak)
    if cand.size == 0:
        cand = np.array([int(np.argmax(vals))])
    vals = vals.ravel()
    top = cand[np.argsort(vals[cand])[::-1][:starts]]
    steps = np.array([(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)], float)
    best_all, arg_all = -np.inf, (tu[0], tv[0])
    for k in top:
        best = float(vals[k])
        a, b = tu[k // n], tv[k % n]
        h = TWO_PI / n
        for _ in range(refine_iters):
            ca = a + h * steps[:, 0]
            cb = b + h * steps[:, 1]
            with np.errstate(divide="ignore", invalid="ignore"):
                cv = fn(rho * np.exp(1j * ca), rho * np.exp(1j * cb))
            cv = np.where(np.isnan(cv), -np.inf, cv)
            j = int(np.argmax(cv))
            if cv[j] > best:
                best, a, b = float(cv[j]), ca[j], cb[j]
            else:
                h *= 0.5
        if best > best_all:
            best_all, arg_all = best, (a, b)
    # narrow ridges stall the compass steps; finish with a simplex polish
    def neg(p):
        with np.errstate(divide="ignore", invalid="ignore"):
            v = float(fn(rho * np.exp(1j * p[0]), rho * np.exp(1j * p[1])))
        return -v if np.isfinite(v) else np.inf

    res = minimize(neg, np.array(arg_all), method="Nelder-Mead",
                   options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 400,
                            "initial_simplex": np.array(arg_all) + np.array(
                                [[0.0, 0.0], [1.0 / n, 0.0], [0.0, 1.0 / n]])})
    if np.isfinite(res.fun) and -res.fun > best_all:
        best_all, arg_all = -float(res.fun), tuple(res.x)
    a, b = arg_all
    return best_all, (rho * np.exp(1j * a), rho * np.exp(1j * b))


def _disc_inf(fn, cfg: ScanConfig):
    """inf of the real array function ``fn(z)`` over the closed unit disc on a
    polar grid, refined by compass search.  Returns (value, z)."""
    nr, nt = cfg.disc_nr, cfg.disc_ntheta
    r = np.linspace(0.0, 1.0, nr)[:, None]
    t = TWO_PI * (np.arange(nt) + GOLDEN) / nt
    Z = r * np.exp(1j * t)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = fn(Z)
    vals = np.where(np.isnan(vals), -np.inf, vals)
    k = int(np.argmin(vals))
    best = float(vals.flat[k])
    rr, tt = float(r[k // nt, 0]), float(t[k % nt])
    hr, ht = 1.0 / (nr - 1), TWO_PI / nt
    steps = np.array([(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)], float)
    for _ in range(cfg.refine_iters):
        cr = np.clip(rr + hr * steps[:, 0], 0.0, 1.0)
        ct = tt + ht * steps[:, 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            cv = fn(cr * np.exp(1j * ct))
        cv = np.where(np.isnan(cv), -np.inf, cv)
        j = int(np.argmin(cv))
        if cv[j] < best:
            best, rr, tt = float(cv[j]), cr[j], ct[j]
        else:
            hr *= 0.5
            ht *= 0.5
    return best, rr * np.exp(1j * tt)


def sup_psi_torus(i: int, x, cfg: ScanConfig = DEFAULT_CONFIG, rho: float = 1.0):
    """Grid-plus-refinement estimate of sup |Psi^(i)| over (rho T)^2.

    The estimate is a lower bound of the true supremum.  Raises
    :class:`FiberBaseOutside` when the base triple of Psi^(i) is outside the
    closed tetrablock (the denominator then vanishes inside the bidisc).
    """
    x = as_point7(x)
    if i not in _PSI:
        raise InvalidArgument("i must be 1, 2 or 3")
    tm = tetra_margin(base_triple(x, i))
    if tm < -cfg.boundary_band:
        raise FiberBaseOutside(f"base triple of Psi^({i}) has tetrablock margin {tm:.3e}")

    def absval(u, v):
        num, den = psi_i_arrays(i, u, v, x)
        out = np.abs(num) / np.abs(den)
        # 0/0 points of a degenerate map carry no information
        return np.where((np.abs(den) < cfg.tol) & (np.abs(num) < cfg.tol), np.nan, out)

    return _torus_sup(absval, cfg.torus_n, cfg.refine_iters, rho)


# ---------------------------------------------------------------------------
# membership


def _psi_margin(x, cfg: ScanConfig, closed: bool):
    """(margin, witness, detail) for the Psi^(1) route."""
    base = base_triple(x, 1)
    tm = tetra_margin(base)
    detail = {"base_margin": tm}
    if tm < -cfg.boundary_band:
        return tm, (), detail
    if is_degenerate(x, 1, cfg.tol):
        detail["degenerate"] = True
        return min(tm, 1.0 - abs(x[0])), (), detail
    if tm > cfg.boundary_band or not closed:
        sup, w = sup_psi_torus(1, x, cfg, 1.0)
        radii = [1.0]
    else:
        # base triple on the tetrablock boundary: the denominator may vanish
        # on the torus, so approach it through shrinking tori
        sup, w, radii = -np.inf, (), []
        for k in range(1, 13):
            rho = 1.0 - 2.0 ** (-k)
            s, ww = sup_psi_torus(1, x, cfg, rho)
            radii.append(rho)
            if s > sup:
                sup, w = s, ww
    detail["sup"] = sup
    detail["radii"] = len(radii)
    return min(tm, 1.0 - sup), w, detail


def in_G_333(x, cfg: ScanConfig = DEFAULT_CONFIG) -> Verdict:
    """Base triple (x2, x4, x6) strictly in the tetrablock and
    sup_{T^2} |Psi^(1)| < 1 (|x1| < 1 when Psi^(1) is constant)."""
    x = as_point7(x)
    margin, w, detail = _psi_margin(x, cfg, closed=False)
    return Verdict.from_margin(margin, cfg, w, **detail)


def in_Gamma_333(x, cfg: ScanConfig = DEFAULT_CONFIG) -> Verdict:
    """Base triple in the closed tetrablock and sup over the open bidisc of
    |Psi^(1)| <= 1 (|x1| <= 1 in the constant case).

    When the base triple is strictly inside the tetrablock the denominator is
    zero-free on the closed bidisc, so the open-bidisc supremum equals the
    torus maximum and a single torus scan is used.  Otherwise tori of radius
    1 - 2^-k, k = 1..12, are scanned.  Read the verdict with
    ``Verdict.in_closure``.
    """
    x = as_point7(x)
    margin, w, detail = _psi_margin(x, cfg, closed=True)
    return Verdict.from_margin(margin, cfg, w, **detail)


def in_G_333_fiberwise(x, which="Z", cfg: ScanConfig = DEFAULT_CONFIG) -> Verdict:
    """Every fiber triple over the closed disc lies in the open tetrablock.

    The margin is the infimum of the tetrablock margin over a polar grid of
    the closed disc.  When the fiber denominator coefficient has modulus at
    least one, the fiber has a pole in the closed disc and the margin is
    ``1 - |coefficient|``.
    """
    x = as_point7(x)
    key = _fiber_key(which)
    d, _ = _FIBERS[key]
    coef = abs(x[d])
    if coef >= 1.0:
        return Verdict.from_margin(1.0 - coef, cfg, (), fiber=key, pole=True)

    def margin_at(z):
        return tetra_margin_array(*fiber_arrays(x, key, z))

    m, z = _disc_inf(margin_at, cfg)
    return Verdict.from_margin(m, cfg, (z,), fiber=key)


# ---------------------------------------------------------------------------
# symmetries and scalings

PERMUTATIONS = {
    # exchanges of the polydisc variables
    "P12": (1, 0, 2, 3, 5, 4, 6),
    "P13": (3, 1, 5, 0, 4, 2, 6),
    "P23": (0, 3, 4, 1, 2, 5, 6),
    # the two cyclic relabelings
    "C1": (3, 0, 4, 1, 5, 2, 6),
    "C2": (1, 3, 5, 0, 2, 4, 6),
}


def permute(x, which: str) -> np.ndarray:
    if which not in PERMUTATIONS:
        raise InvalidArgument(f"unknown permutation {which!r}")
    return as_point7(x)[list(PERMUTATIONS[which])].copy()


_WEIGHTS = np.array([1, 1, 2, 1, 2, 2, 3])


def scale_for_radius(x, r: float) -> np.ndarray:
    if r < 0:
        raise InvalidArgument("r must be non-negative")
    return as_point7(x) * (float(r) ** _WEIGHTS)


def starlike_scale(x, r: float, pivot: int = 1) -> np.ndarray:
    """Multiply every coordinate except x_pivot (pivot in {1, 2, 4}) by r."""
    if pivot not in (1, 2, 4):
        raise InvalidArgument("pivot must be 1, 2 or 4")
    if not 0.0 <= r <= 1.0:
        raise InvalidArgument("r must lie in [0, 1]")
    out = as_point7(x) * r
    out[pivot - 1] = as_point7(x)[pivot - 1]
    return out


@dataclass(frozen=True)
class MuResult:
    mu: float
    witness_r: float
    iterations: int
    degenerate: bool

    def to_json(self) -> dict:
        return {"mu": self.mu, "witness_r": self.witness_r,
                "iterations": self.iterations, "degenerate": self.degenerate}


def mu_E333(A, cfg: ScanConfig = DEFAULT_CONFIG) -> MuResult:
    """mu for the diagonal structure by bisection on r, using
    mu(A) <= 1/r  <=>  scale_for_radius(pi(A), r) in Gamma.

    mu(A) = 0 exactly when pi(A) = 0 (R_x is then identically one).
    """
    A = as_matrix3(A)
    x = pi333(A)
    if np.max(np.abs(x)) <= cfg.tol:
        return MuResult(0.0, math.inf, 0, True)

    def inside(r):
        return in_Gamma_333(scale_for_radius(x, r), cfg).margin >= 0.0

    it = 0
    lo = 1.0 / (1.0 + operator_norm(A))
    hi = 2.0 * lo
    while inside(hi):
        it += 1
        lo, hi = hi, 2.0 * hi
        if hi > 1e15:
            # mu is below any resolvable scale; report the bound reached
            return MuResult(1.0 / lo, lo, it, False)
    while (1.0 / lo - 1.0 / hi) > cfg.tol * max(1.0, 1.0 / hi):
        it += 1
        mid = 0.5 * (lo + hi)
        if inside(mid):
            lo = mid
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    return MuResult(1.0 / r, r, it, False)


# ---------------------------------------------------------------------------
# independent routes


def _affine_polish(x, z):
    """R_x is affine in each variable separately, so solving for one
    coordinate with the other two fixed is exact.  Take the solve that stays
    in the closed disc and leaves the smallest residual."""
    best_z, best_v = z, abs(r_poly(x, z))
    for k in range(3):
        z0, z1 = z.copy(), z.copy()
        z0[k], z1[k] = 0.0, 1.0
        alpha = r_poly(x, z0)
        beta = r_poly(x, z1) - alpha
        if beta == 0:
            continue
        zk = -alpha / beta
        if abs(zk) > 1.0:
            continue
        cand = z.copy()
        cand[k] = zk
        v = abs(r_poly(x, cand))
        if v < best_v:
            best_z, best_v = cand, v
    return best_z


def rpoly_zero_search(x, n: int = 64, radii=(0.25, 0.5, 0.75, 0.999), seeds: int = 8,
                      zero_tol: float = 1e-10):
    """Look for a zero of R_x on the closed tridisc.

    Evaluates |R_x| on n^3 torus grids at each radius, then polishes the
    smallest samples with bounded L-BFGS-B in polar coordinates, finishing
    with an exact solve in one coordinate (R_x is affine in each).  Returns a
    dict with ``found`` (a zero located), ``min_abs`` and the best ``z``.
    Finding no zero is evidence, not proof, of membership in G.
    """

    x = as_point7(x)
    t = TWO_PI * (np.arange(n) + GOLDEN) / n
    e = np.exp(1j * t)
    cands = []
    for rho in radii:
        z1 = rho * e[:, None, None]
        z2 = rho * e[None, :, None]
        z3 = rho * e[None, None, :]
        vals = np.abs(r_poly(x, (z1, z2, z3)))
        flat = np.argsort(vals, axis=None)[:seeds]
        for k in flat:
            i, j, l = np.unravel_index(k, vals.shape)
            cands.append((float(vals[i, j, l]), rho, t[i], t[j], t[l]))
    cands.sort()

    def obj(p):
        z = p[:3] * np.exp(1j * p[3:])
        return abs(r_poly(x, z)) ** 2

    best = (math.inf, None)
    for _, rho, a, b, c in cands[:seeds]:
        res = minimize(obj, np.array([rho, rho, rho, a, b, c]), method="L-BFGS-B",
                       bounds=[(0, 1)] * 3 + [(None, None)] * 3,
                       options=dict(ftol=1e-30, gtol=1e-16, maxiter=500))
        z = _affine_polish(x, res.x[:3] * np.exp(1j * res.x[3:]))
        val = abs(r_poly(x, z))
        if val < best[0]:
            best = (val, z)
        if val < zero_tol:
            break
    return {"found": best[0] < zero_tol, "min_abs": best[0],
            "z": [complex(v) for v in best[1]] if best[1] is not None else []}


def find_contractive_preimage(x, seed: int = 0, restarts: int = 8, margin: float = 1e-9):
    """Local search for A with ||A|| < 1 and pi(A) = x.

    Returns (found, A, residual).  A failed search says nothing about
    existence.
    """
    from scipy.optimize import least_squares

    x = as_point7(x)
    rng = np.random.default_rng(seed)

    def unpack(p):
        return (p[:9] + 1j * p[9:]).reshape(3, 3)

    def residual(p):
        A = unpack(p)
        d = pi333(A) - x
        over = max(0.0, operator_norm(A) - (1.0 - margin))
        return np.concatenate([d.real, d.imag, [1e3 * over]])

    best = (math.inf, None)
    for _ in range(restarts):
        p0 = rng.standard_normal(18) * 0.3
        res = least_squares(residual, p0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=4000)
        A = unpack(res.x)
        r = float(np.max(np.abs(pi333(A) - x)))
        if operator_norm(A) < 1.0 and r < best[0]:
            best = (r, A)
        if best[0] < 1e-10:
            break
    found = best[0] < 1e-10
    return found, best[1], best[0]
