"""Exact linear algebra over the residue ring Z_d.

Matrices are plain ``numpy.int64`` arrays paired with an explicit modulus.
All results are returned as canonical residues in ``[0, d)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod

import numpy as np

from .errors import (
    Inconsistent,
    InternalContractViolation,
    LimitExceeded,
    NotInvertible,
    ShapeMismatch,
)

MAX_MODULUS = 2**15
MAX_DIMENSION = 2**10


def check_limits(d: int, *shape: int) -> None:
    """Reject moduli or sizes for which int64 arithmetic could overflow."""
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise LimitExceeded(f"modulus must be an integer >= 2, got {d!r}")
    if d > 2 * MAX_MODULUS:
        # 2d moduli for phases are allowed, hence the factor 2
        raise LimitExceeded(f"modulus {d} exceeds {2 * MAX_MODULUS}")
    for s in shape:
        if s > MAX_DIMENSION:
            raise LimitExceeded(f"dimension {s} exceeds {MAX_DIMENSION}")


def residues(a, d: int) -> np.ndarray:
    """Return a fresh int64 copy of ``a`` reduced into ``[0, d)``."""
    return np.mod(np.asarray(a, dtype=np.int64), d)


@dataclass(frozen=True, eq=False)
class ResidueMatrix:
    """An integer matrix with a declared modulus, stored as canonical residues."""

    entries: np.ndarray
    modulus: int

    def __post_init__(self):
        check_limits(self.modulus, *np.shape(self.entries))
        arr = residues(self.entries, self.modulus)
        if arr.ndim != 2:
            raise ShapeMismatch(f"expected a 2-d array, got shape {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __eq__(self, other):
        if not isinstance(other, ResidueMatrix):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.modulus, self.entries.shape, self.entries.tobytes()))

    def __matmul__(self, other: ResidueMatrix) -> ResidueMatrix:
        if self.modulus != other.modulus:
            raise ShapeMismatch("moduli differ")
        return ResidueMatrix(self.entries @ other.entries, self.modulus)

    def inverse(self) -> ResidueMatrix:
        return ResidueMatrix(invert_matrix(self.entries, self.modulus), self.modulus)

    def smith(self) -> SmithDecomposition:
        return smith_normal_form(self.entries, self.modulus)

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, u, v)`` with ``g = gcd(a, b) >= 0`` and ``u*a + v*b = g``."""
    a, b = int(a), int(b)
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def inverse_mod(r: int, d: int) -> int:
    """Multiplicative inverse of ``r`` modulo ``d``."""
    g, u, _ = ext_gcd(int(r) % d, d)
    if g != 1:
        raise NotInvertible(f"{r} has no inverse modulo {d} (gcd {g})")
    return u % d


def is_unit(r: int, d: int) -> bool:
    return gcd(int(r), d) == 1


def unit_to_divisor(r: int, d: int) -> tuple[int, int]:
    """Return ``(g, u)`` with ``g = gcd(r, d)``, ``u`` a unit and ``r = u*g (mod d)``.

    For ``r = 0`` this gives ``(d, 1)``.
    """
    r = int(r) % d
    g = gcd(r, d)
    if r == 0:
        return d, 1
    step = d // g
    u = (r // g) % step if step > 1 else 1
    while gcd(u, d) != 1:
        u += step
    return g, u % d


@dataclass(frozen=True)
class SmithDecomposition:
    """``K @ A @ L == F (mod d)`` with ``F`` diagonal in canonical form.

    Nonzero diagonal entries are positive divisors of ``d`` forming a
    divisibility chain; zero entries (the divisor ``d`` itself) come last.
    """

    F: np.ndarray
    K: np.ndarray
    L: np.ndarray
    rank: int
    modulus: int

    @property
    def diagonal(self) -> np.ndarray:
        return np.diagonal(self.F).copy()

    def divisors(self) -> list[int]:
        """Diagonal entries with zero read as ``d``."""
        return [int(f) if f else self.modulus for f in self.diagonal]


def smith_normal_form(A, d: int | None = None) -> SmithDecomposition:
    """Smith normal form of ``A`` over Z_d.

    Pivots are chosen to minimize ``gcd(entry, d)``, first in row-major order.
    Row operations accumulate into ``K`` and column operations into ``L``.
    """
    if isinstance(A, ResidueMatrix):
        d = A.modulus if d is None else d
        A = A.entries
    if d is None:
        raise TypeError("modulus required")
    A = residues(A, d)
    if A.ndim != 2:
        raise ShapeMismatch(f"expected a 2-d array, got shape {A.shape}")
    check_limits(d, *A.shape)
    rows, cols = A.shape
    K = np.eye(rows, dtype=np.int64)
    L = np.eye(cols, dtype=np.int64)

    def swap_rows(i, j):
        if i != j:
            A[[i, j]] = A[[j, i]]
            K[[i, j]] = K[[j, i]]

    def swap_cols(i, j):
        if i != j:
            A[:, [i, j]] = A[:, [j, i]]
            L[:, [i, j]] = L[:, [j, i]]

    def row_combo(i, j, a, b, c, e):
        # rows (i, j) <- (a*r_i + b*r_j, c*r_i + e*r_j)
        for M in (A, K):
            ri, rj = M[i].copy(), M[j].copy()
            M[i] = (a * ri + b * rj) % d
            M[j] = (c * ri + e * rj) % d

    def col_combo(i, j, a, b, c, e):
        for M in (A, L):
            ci, cj = M[:, i].copy(), M[:, j].copy()
            M[:, i] = (a * ci + b * cj) % d
            M[:, j] = (c * ci + e * cj) % d

    def normalize_pivot(t):
        _, u = unit_to_divisor(A[t, t], d)
        if u != 1:
            s = inverse_mod(u, d)
            A[t] = (s * A[t]) % d
            K[t] = (s * K[t]) % d

    t = 0
    while t < min(rows, cols):
        sub = A[t:, t:]
        if not sub.any():
            break
        gs = np.gcd(sub, d)
        i, j = divmod(int(np.argmin(gs)), sub.shape[1])
        swap_rows(t, t + i)
        swap_cols(t, t + j)
        normalize_pivot(t)
        while True:
            changed = False
            for i in range(t + 1, rows):
                b = int(A[i, t])
                if not b:
                    continue
                p = int(A[t, t])
                if b % p == 0:
                    A[i] = (A[i] - (b // p) * A[t]) % d
                    K[i] = (K[i] - (b // p) * K[t]) % d
                else:
                    g, s, v = ext_gcd(p, b)
                    row_combo(t, i, s, v, -(b // g), p // g)
                    normalize_pivot(t)
                    changed = True
            for j in range(t + 1, cols):
                b = int(A[t, j])
                if not b:
                    continue
                p = int(A[t, t])
                if b % p == 0:
                    A[:, j] = (A[:, j] - (b // p) * A[:, t]) % d
                    L[:, j] = (L[:, j] - (b // p) * L[:, t]) % d
                else:
                    g, s, v = ext_gcd(p, b)
                    col_combo(t, j, s, v, -(b // g), p // g)
                    normalize_pivot(t)
                    changed = True
            if changed:
                continue
            p = int(A[t, t])
            rest = A[t + 1:, t + 1:]
            bad = np.argwhere(rest % p != 0)
            if len(bad) == 0:
                break
            i = t + 1 + int(bad[0][0])
            row_combo(t, i, 1, 1, 0, 1)
        t += 1

    F = A
    diag = np.diagonal(F)
    rank = int(np.count_nonzero(diag))
    _check_smith(F, d)
    return SmithDecomposition(F=F, K=K, L=L, rank=rank, modulus=d)


def _check_smith(F: np.ndarray, d: int) -> None:
    off = F.copy()
    k = min(F.shape)
    off[np.arange(k), np.arange(k)] = 0
    if off.any():
        raise InternalContractViolation("Smith form not diagonal")
    diag = [int(x) for x in np.diagonal(F)]
    nz = [x for x in diag if x]
    if diag[: len(nz)] != nz:
        raise InternalContractViolation("zero diagonal entries must come last")
    for x in nz:
        if d % x:
            raise InternalContractViolation(f"diagonal entry {x} does not divide {d}")
    for a, b in zip(nz, nz[1:]):
        if b % a:
            raise InternalContractViolation("divisibility chain broken")


def invert_matrix(A, d: int | None = None) -> np.ndarray:
    """Inverse of a square matrix modulo ``d``."""
    if isinstance(A, ResidueMatrix):
        d = A.modulus if d is None else d
        A = A.entries
    A = residues(A, d)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"square matrix required, got shape {A.shape}")
    if A.shape[0] == 0:
        return A.copy()
    snf = smith_normal_form(A, d)
    if not np.all(np.diagonal(snf.F) == 1 % d):
        raise NotInvertible(f"matrix is singular modulo {d}")
    return (snf.L @ snf.K) % d


@dataclass(frozen=True)
class MixedModulusSystem:
    """``coefficient @ x == rhs`` where row ``j`` is read modulo ``moduli[j]``.

    The unknown ``x`` lives in ``Z_{solution_moduli[0]} x ... ``; every modulus
    divides ``d``.
    """

    coefficient: np.ndarray
    rhs: np.ndarray
    moduli: np.ndarray
    solution_moduli: np.ndarray
    d: int

    def __post_init__(self):
        B = np.asarray(self.coefficient, dtype=np.int64)
        m, n = B.shape
        for name, vec, size in (("rhs", self.rhs, m), ("moduli", self.moduli, m),
                                ("solution_moduli", self.solution_moduli, n)):
            if np.shape(vec) != (size,):
                raise ShapeMismatch(f"{name} must have length {size}")
        for q in list(self.moduli) + list(self.solution_moduli):
            if q <= 0 or self.d % int(q):
                raise ShapeMismatch(f"modulus {q} does not divide {self.d}")

    def residual(self, x) -> np.ndarray:
        """Per-row residual ``(B x - y) mod q``."""
        B = residues(self.coefficient, self.d)
        x = np.asarray(x, dtype=np.int64)
        q = np.asarray(self.moduli, dtype=np.int64)
        return np.mod(B @ x - np.asarray(self.rhs, dtype=np.int64), q)


def solve_mixed_modulus(system: MixedModulusSystem) -> np.ndarray:
    """Unique solution in ``G_qbar`` of a mixed-modulus system.

    Rows are scaled by ``d / q_j`` so every equation lives modulo ``d``; the
    Smith form of the scaled matrix then decouples the unknowns.
    """
    d = system.d
    B = residues(system.coefficient, d)
    m, n = B.shape
    q = np.asarray(system.moduli, dtype=np.int64)
    qbar = np.asarray(system.solution_moduli, dtype=np.int64)
    y = np.asarray(system.rhs, dtype=np.int64)

    Z = d // q
    ZB = (Z[:, None] * B) % d
    Zy = (Z * y) % d
    snf = smith_normal_form(ZB, d)
    y_prime = (snf.K @ Zy) % d
    diag = np.diagonal(snf.F)

    x_prime = np.zeros(n, dtype=np.int64)
    for i in range(m):
        f = int(diag[i]) if i < len(diag) else 0
        yi = int(y_prime[i])
        if f == 0:
            if yi:
                raise Inconsistent("system has no solution")
            continue
        if yi % f:
            raise Inconsistent("system has no solution")
        x_prime[i] = yi // f

    # uniqueness in G_qbar: the scaled kernel must be exactly qbar-periodic
    kernel = prod(int(f) if f else d for f in diag) * d ** max(n - m, 0)
    period = prod(d // int(v) for v in qbar)
    for i in range(n):
        col = np.zeros(n, dtype=np.int64)
        col[i] = qbar[i]
        if ((ZB @ col) % d).any():
            raise InternalContractViolation("solution group is not well defined for this system")
    if kernel != period:
        raise InternalContractViolation(
            f"solution not unique: kernel size {kernel} vs expected {period}"
        )

    x = np.mod(snf.L @ x_prime, qbar)
    if system.residual(x).any():
        raise InternalContractViolation("back-substitution failed")
    return x
