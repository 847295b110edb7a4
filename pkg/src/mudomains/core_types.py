"""Shared value types, small fixed-size linear algebra and sampling.

Points and matrices are plain numpy ``complex128`` arrays (shape ``(7,)``,
``(5,)``, ``(3,)``, ``(2,)``, ``(3, 3)``, ``(2, 2)``); the ``as_*``
constructors validate shape and finiteness.  Configuration and results are
frozen dataclasses, so everything here is an immutable value and safe to
share between threads.

Random sampling uses numpy's PCG64 bit generator
(``numpy.random.default_rng(seed)``), created and discarded inside each call.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "MudomError", "DenominatorVanishes", "SingularResolvent", "FiberBaseOutside",
    "DomainViolation", "InvalidArgument", "TargetNotInG", "TargetNotOutside",
    "SeparationNotCertified", "PathLeavesGamma", "Lambda0OutOfRange", "DuplicateNodes",
    "ScanConfig", "State", "Verdict",
    "as_complex", "as_point", "as_point7", "as_point5", "as_point3", "as_point2",
    "as_matrix3", "as_matrix2",
    "det2", "det3", "principal_minor", "operator_norm",
    "random_contraction", "random_unitary", "conjugate_by", "CONJUGATORS",
    "derive_seed", "parallel_map", "thread_cap", "json_complex", "json_vector",
]


class MudomError(Exception):
    """Base class for every error raised by the library."""


class DenominatorVanishes(MudomError):
    pass


class SingularResolvent(MudomError):
    pass


class FiberBaseOutside(MudomError):
    pass


class DomainViolation(MudomError):
    pass


class InvalidArgument(MudomError, ValueError):
    pass


class TargetNotInG(MudomError):
    pass


class TargetNotOutside(MudomError):
    pass


class SeparationNotCertified(MudomError):
    pass


class PathLeavesGamma(MudomError):
    pass


class Lambda0OutOfRange(InvalidArgument):
    pass


class DuplicateNodes(InvalidArgument):
    pass


@dataclass(frozen=True)
class ScanConfig:
    """Grid sizes and tolerances shared by every scan.

    ``torus_n`` phases per circle, ``disc_nr`` x ``disc_ntheta`` polar samples
    of a closed disc, ``refine_iters`` compass-search halvings at the best
    grid cell, ``tol`` for singularity gates and ``boundary_band`` for the
    three-state verdicts.
    """

    torus_n: int = 512
    disc_nr: int = 64
    disc_ntheta: int = 256
    refine_iters: int = 40
    tol: float = 1e-9
    boundary_band: float = 1e-7

    def __post_init__(self):
        if self.torus_n < 8:
            raise InvalidArgument("torus_n must be at least 8")
        if self.disc_nr < 2 or self.disc_ntheta < 8:
            raise InvalidArgument("disc grid too small")
        if self.refine_iters < 0:
            raise InvalidArgument("refine_iters must be non-negative")
        if not self.tol > 0:
            raise InvalidArgument("tol must be positive")
        if not self.boundary_band >= self.tol:
            raise InvalidArgument("boundary_band must be at least tol")

    def with_(self, **changes) -> "ScanConfig":
        return replace(self, **changes)

    def to_json(self) -> dict:
        return {
            "torus_n": self.torus_n, "disc_nr": self.disc_nr,
            "disc_ntheta": self.disc_ntheta, "refine_iters": self.refine_iters,
            "tol": self.tol, "boundary_band": self.boundary_band,
        }


DEFAULT_CONFIG = ScanConfig()


class State(str, enum.Enum):
    INSIDE = "Inside"
    BOUNDARY_BAND = "BoundaryBand"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class Verdict:
    """Three-state membership result.

    ``margin`` is positive inside.  The state is obtained from the margin by
    banding: ``margin > band`` is Inside, ``margin < -band`` is Outside and
    anything in between is BoundaryBand.  For an open set (G) only Inside
    means membership; for a closed set (Gamma) everything except Outside does.
    """

    state: State
    margin: float
    witness: tuple = ()
    config: ScanConfig = field(default=DEFAULT_CONFIG)
    detail: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_margin(cls, margin: float, cfg: ScanConfig, witness=(), **detail) -> "Verdict":
        band = cfg.boundary_band
        if margin > band:
            state = State.INSIDE
        elif margin < -band:
            state = State.OUTSIDE
        else:
            state = State.BOUNDARY_BAND
        return cls(state, float(margin), tuple(complex(w) for w in witness), cfg, detail)

    @property
    def inside(self) -> bool:
        return self.state is State.INSIDE

    @property
    def outside(self) -> bool:
        return self.state is State.OUTSIDE

    @property
    def in_closure(self) -> bool:
        """Membership in the closed set: Inside or BoundaryBand."""
        return self.state is not State.OUTSIDE

    def to_json(self) -> dict:
        out = {
            "state": self.state.value,
            "margin": self.margin,
            "witness": [[w.real, w.imag] for w in self.witness],
            "config": self.config.to_json(),
        }
        if self.detail:
            out["detail"] = self.detail
        return out


# ---------------------------------------------------------------------------
# constructors


def as_complex(v) -> complex:
    if isinstance(v, (list, tuple)) and len(v) == 2:
        v = complex(float(v[0]), float(v[1]))
    c = complex(v)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise InvalidArgument(f"non-finite complex value {c!r}")
    return c


def as_point(values, n: int) -> np.ndarray:
    """Coerce to a finite complex vector of length ``n``.

    Accepts numbers, ``[re, im]`` pairs (the JSON encoding) or complex arrays.
    """
    if isinstance(values, np.ndarray) and values.dtype.kind in "fciu":
        arr = values.astype(complex).reshape(-1)
    else:
        arr = np.array([as_complex(v) for v in values], dtype=complex)
    if arr.shape != (n,):
        raise InvalidArgument(f"expected {n} complex coordinates, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgument("non-finite coordinate")
    return arr


def as_point7(values) -> np.ndarray:
    return as_point(values, 7)


def as_point5(values) -> np.ndarray:
    return as_point(values, 5)


def as_point3(values) -> np.ndarray:
    return as_point(values, 3)


def as_point2(values) -> np.ndarray:
    return as_point(values, 2)


def _as_square(values, n: int) -> np.ndarray:
    if isinstance(values, np.ndarray) and values.dtype.kind in "fciu":
        arr = values.astype(complex)
    else:
        values = list(values)
        if len(values) == n * n:
            # flat row-major list of complex entries
            flat = [as_complex(v) for v in values]
        else:
            # n rows of n complex entries
            flat = []
            for row in values:
                if not isinstance(row, (list, tuple, np.ndarray)) or len(row) != n:
                    raise InvalidArgument(f"expected a {n}x{n} matrix")
                flat.extend(as_complex(v) for v in row)
        arr = np.array(flat, dtype=complex)
    arr = arr.reshape(n, n) if arr.size == n * n else arr
    if arr.shape != (n, n):
        raise InvalidArgument(f"expected a {n}x{n} matrix")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgument("non-finite matrix entry")
    return arr


def as_matrix3(values) -> np.ndarray:
    return _as_square(values, 3)


def as_matrix2(values) -> np.ndarray:
    return _as_square(values, 2)


# ---------------------------------------------------------------------------
# fixed-size algebra


def det2(B) -> complex:
    return complex(B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0])


def det3(A) -> complex:
    """Cofactor expansion along the first row."""
    return complex(
        A[0, 0] * (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
        - A[0, 1] * (A[1, 0] * A[2, 2] - A[1, 2] * A[2, 0])
        + A[0, 2] * (A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0])
    )


_MINOR_PAIRS = {(1, 2), (1, 3), (2, 3)}


def principal_minor(A, rows) -> complex:
    """2x2 principal minor on the 1-based index pair ``rows``."""
    rows = tuple(int(r) for r in rows)
    if rows not in _MINOR_PAIRS:
        raise InvalidArgument(f"rows must be one of {sorted(_MINOR_PAIRS)}")
    i, j = rows[0] - 1, rows[1] - 1
    return complex(A[i, i] * A[j, j] - A[i, j] * A[j, i])


def _largest_eig_herm2(H) -> float:
    a, d = H[0, 0].real, H[1, 1].real
    b2 = abs(H[0, 1]) ** 2
    half = 0.5 * (a + d)
    return half + math.sqrt(max(0.25 * (a - d) ** 2 + b2, 0.0))


def _largest_eig_herm3(H) -> float:
    # Trigonometric solution of the characteristic cubic of a Hermitian
    # matrix, followed by one Newton step on that cubic.
    p1 = abs(H[0, 1]) ** 2 + abs(H[0, 2]) ** 2 + abs(H[1, 2]) ** 2
    d = np.real(np.diag(H))
    q = d.sum() / 3.0
    p2 = ((d - q) ** 2).sum() + 2.0 * p1
    if p2 <= 0.0:
        return float(q)
    p = math.sqrt(p2 / 6.0)
    B = (H - q * np.eye(3)) / p
    r = det3(B).real / 2.0
    r = min(1.0, max(-1.0, r))
    phi = math.acos(r) / 3.0
    lam = q + 2.0 * p * math.cos(phi)
    c2 = -d.sum()
    c1 = (d[0] * d[1] + d[0] * d[2] + d[1] * d[2]
          - abs(H[0, 1]) ** 2 - abs(H[0, 2]) ** 2 - abs(H[1, 2]) ** 2)
    c0 = -det3(H).real
    f = ((lam + c2) * lam + c1) * lam + c0
    fp = (3.0 * lam + 2.0 * c2) * lam + c1
    if fp > 0.0:
        step = f / fp
        if abs(step) < 1e-6 * max(1.0, abs(lam)):
            lam -= step
    return float(lam)


def operator_norm(A) -> float:
    """Largest singular value of a 2x2 or 3x3 matrix in closed form."""
    A = np.asarray(A, dtype=complex)
    H = A.conj().T @ A
    if A.shape == (2, 2):
        lam = _largest_eig_herm2(H)
    elif A.shape == (3, 3):
        lam = _largest_eig_herm3(H)
    else:
        raise InvalidArgument("operator_norm supports 2x2 and 3x3 only")
    return math.sqrt(max(lam, 0.0))


# ---------------------------------------------------------------------------
# sampling


def derive_seed(seed: int, *keys: int) -> int:
    """A 63-bit seed derived from ``seed`` and integer keys (for sample k of
    a seeded batch)."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *[int(k) for k in keys]])
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def _ginibre(rng: np.random.Generator, n: int = 3) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)


def random_contraction(seed: int, norm_bound: float) -> np.ndarray:
    """Ginibre matrix rescaled to operator norm ``norm_bound * (1 - u)`` with
    ``u`` uniform in (0, 0.5]."""
    if not 0.0 < norm_bound <= 1.0:
        raise InvalidArgument("norm_bound must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    G = _ginibre(rng)
    u = 0.5 * (1.0 - rng.random())
    return G * (norm_bound * (1.0 - u) / operator_norm(G))


def random_unitary(seed: int) -> np.ndarray:
    """Haar unitary: QR of a complex Ginibre matrix with the phases of
    diag(R) moved into Q."""
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(_ginibre(rng))
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph[None, :]


_J1 = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
_J1_CYC = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
_J2_CYC = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]])

CONJUGATORS = {
    # name: (left, right)
    "J1J1": (_J1, _J1),
    "J1J2": (_J1_CYC, _J2_CYC),
    "J1tJ2t": (_J2_CYC, _J1_CYC),
}


def conjugate_by(A, which: str) -> np.ndarray:
    """``L A R`` for the permutation pair named ``which``.

    J1J1 reverses both index orders; J1J2 yields
    [[a33,a31,a32],[a13,a11,a12],[a23,a21,a22]]; J1tJ2t yields
    [[a22,a23,a21],[a32,a33,a31],[a12,a13,a11]].  Implemented as index
    shuffles, so the result is bit-exact.
    """
    if which not in CONJUGATORS:
        raise InvalidArgument(f"unknown conjugation {which!r}")
    L, R = CONJUGATORS[which]
    rows = np.argmax(L, axis=1)
    cols = np.argmax(R, axis=0)
    A = np.asarray(A, dtype=complex)
    return A[np.ix_(rows, cols)].copy()


# ---------------------------------------------------------------------------
# parallelism


def thread_cap() -> int:
    raw = os.environ.get("MUDOM_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn: Callable, items: Iterable, threads: int | None = None) -> list:
    """Ordered map, threaded up to ``MUDOM_THREADS`` workers.  Results do not
    depend on the number of workers."""
    items = list(items)
    n = thread_cap() if threads is None else max(1, threads)
    if n == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def json_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def json_vector(v: Sequence) -> list:
    return [json_complex(z) for z in v]
