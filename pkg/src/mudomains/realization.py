"""Block linear-fractional maps of 3x3 matrices and their norm identities.

For a block split A = [[A11, A12], [A21, A22]] and a diagonal X,

    M_A(X) = A11 + A12 X (I - A22 X)^{-1} A21.

With gamma = (I - A22 X)^{-1} A21 and eta = [I; X gamma] one has
A eta = [M_A(X); gamma], which yields the exact identity

    I - M_A(W)^* M_A(Z) = gamma(W)^* (I - W^* Z) gamma(Z)
                          + eta(W)^* (I - A^* A) eta(Z).

The defects of this identity for the (1,2) split (``identity_defect_2d``)
and the (2,1) split (``identity_defect_1d``) are exposed as operations.
"""

from __future__ import annotations

import enum

import numpy as np

from .core_types import (
    DEFAULT_CONFIG, InvalidArgument, SingularResolvent, as_matrix3, conjugate_by,
)

__all__ = [
    "BlockSplit", "GammaEta", "mobius", "g_of_A", "f_of_A",
    "gamma_eta_2d", "gamma_eta_1d", "identity_defect_2d", "identity_defect_1d",
    "cascade",
]


class BlockSplit(enum.Enum):
    ONE_PLUS_TWO = 1   # A11 is 1x1, X is 2x2
    TWO_PLUS_ONE = 2   # A11 is 2x2, X is 1x1


class GammaEta:
    __slots__ = ("gamma", "eta")

    def __init__(self, gamma, eta):
        self.gamma = gamma
        self.eta = eta

    def __repr__(self):
        return f"GammaEta(gamma={self.gamma!r}, eta={self.eta!r})"


def _inverse_small(M, tol):
    """Closed-form inverse of a 1x1 or 2x2 matrix with a determinant gate."""
    if M.shape == (1, 1):
        d = M[0, 0]
        if abs(d) <= tol:
            raise SingularResolvent(f"|det| = {abs(d):.3e}")
        return np.array([[1.0 / d]])
    if M.shape == (2, 2):
        d = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        if abs(d) <= tol:
            raise SingularResolvent(f"|det| = {abs(d):.3e}")
        return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]]) / d
    raise InvalidArgument("resolvent block must be 1x1 or 2x2")


def _split(A, k):
    return A[:k, :k], A[:k, k:], A[k:, :k], A[k:, k:]


def mobius(A, X, split=BlockSplit.ONE_PLUS_TWO, tol: float = DEFAULT_CONFIG.tol):
    """LFT value of ``A`` at ``X``.

    ``split`` is a :class:`BlockSplit` for 3x3 input, or an integer giving the
    size of the top-left block (so a 2x2 matrix with ``split=1`` is the scalar
    case).  Scalars are accepted for 1x1 ``X``.  Returns a numpy array with
    the shape of ``A11``.
    """
    A = np.asarray(A, dtype=complex)
    k = split.value if isinstance(split, BlockSplit) else int(split)
    n = A.shape[0]
    if A.shape != (n, n) or not 0 < k < n:
        raise InvalidArgument("bad block split")
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    if X.shape != (n - k, n - k):
        raise InvalidArgument(f"X must be {n - k}x{n - k}")
    A11, A12, A21, A22 = _split(A, k)
    R = _inverse_small(np.eye(n - k) - A22 @ X, tol)
    return A11 + A12 @ X @ R @ A21


def g_of_A(A, z2, z3, tol: float = DEFAULT_CONFIG.tol) -> complex:
    """G_A(diag(z2, z3)) for the (1,2) split."""
    A = as_matrix3(A)
    return complex(mobius(A, np.diag([z2, z3]), BlockSplit.ONE_PLUS_TWO, tol)[0, 0])


def f_of_A(A, z3, tol: float = DEFAULT_CONFIG.tol) -> np.ndarray:
    """F_A(z3), the 2x2 LFT for the (2,1) split."""
    A = as_matrix3(A)
    return mobius(A, [[z3]], BlockSplit.TWO_PLUS_ONE, tol)


def gamma_eta_2d(A, z2, z3, tol: float = DEFAULT_CONFIG.tol) -> GammaEta:
    A = as_matrix3(A)
    X = np.diag([z2, z3]).astype(complex)
    C = np.eye(2) - A[1:, 1:] @ X
    gamma = _inverse_small(C, tol) @ A[1:, 0]
    eta = np.concatenate([[1.0], X @ gamma])
    return GammaEta(gamma, eta)


def gamma_eta_1d(A, z3, tol: float = DEFAULT_CONFIG.tol) -> GammaEta:
    A = as_matrix3(A)
    d = 1.0 - A[2, 2] * z3
    if abs(d) <= tol:
        raise SingularResolvent(f"|1 - a33 z3| = {abs(d):.3e}")
    gamma = (A[2, :2] / d).reshape(1, 2)
    eta = np.vstack([np.eye(2), z3 * gamma])
    return GammaEta(gamma, eta)


def identity_defect_2d(A, z2, z3, w2, w3, tol: float = DEFAULT_CONFIG.tol) -> float:
    A = as_matrix3(A)
    gz, gw = g_of_A(A, z2, z3, tol), g_of_A(A, w2, w3, tol)
    lhs = 1.0 - np.conj(gw) * gz
    ez, ew = gamma_eta_2d(A, z2, z3, tol), gamma_eta_2d(A, w2, w3, tol)
    weight = np.array([1.0 - np.conj(w2) * z2, 1.0 - np.conj(w3) * z3])
    D = np.eye(3) - A.conj().T @ A
    rhs = np.sum(np.conj(ew.gamma) * weight * ez.gamma) + ew.eta.conj() @ D @ ez.eta
    return float(abs(lhs - rhs))


def identity_defect_1d(A, z3, w3, tol: float = DEFAULT_CONFIG.tol) -> float:
    """Largest entry of the 2x2 defect matrix."""
    A = as_matrix3(A)
    Fz, Fw = f_of_A(A, z3, tol), f_of_A(A, w3, tol)
    lhs = np.eye(2) - Fw.conj().T @ Fz
    ez, ew = gamma_eta_1d(A, z3, tol), gamma_eta_1d(A, w3, tol)
    D = np.eye(3) - A.conj().T @ A
    rhs = (1.0 - np.conj(w3) * z3) * (ew.gamma.conj().T @ ez.gamma) + ew.eta.conj().T @ D @ ez.eta
    return float(np.max(np.abs(lhs - rhs)))


def _two_stage(A, outer, inner, tol):
    F = f_of_A(A, inner, tol)
    return complex(mobius(F, [[outer]], 1, tol)[0, 0])


def cascade(A, z2, z3, variant: int = 1, tol: float = DEFAULT_CONFIG.tol) -> complex:
    """Two-stage evaluation G_{F_A(z3)}(z2).

    ``variant`` selects which rational map of pi(A) is produced:

    * 1: G_{F_A(z3)}(z2), equal to Psi^(1)(z2, z3);
    * 3: G_{F_{A~}(w)}(v) with A~ = J1 A J2, read as Psi^(3)(z1=z2, z2=z3);
    * 2: G_{F_{B~}(w)}(v) with B~ = J1~ A J2~, read as Psi^(2)(z1=z3, z3=z2).

    In every variant the first argument is the outer (scalar) variable and the
    second is fed to F.
    """
    A = as_matrix3(A)
    if variant == 1:
        return _two_stage(A, z2, z3, tol)
    if variant == 3:
        return _two_stage(conjugate_by(A, "J1J2"), z2, z3, tol)
    if variant == 2:
        return _two_stage(conjugate_by(A, "J1tJ2t"), z2, z3, tol)
    raise InvalidArgument("variant must be 1, 2 or 3")
