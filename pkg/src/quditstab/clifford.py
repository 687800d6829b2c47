"""Clifford operations as pairs ``(C, h)``.

``C`` is a symplectic 2n x 2n matrix over Z_d whose k-th column is the image
of ``XZ(E_k)`` under conjugation, and ``h`` in Z_{2d}^{2n} holds the zeta
exponents of those images. The global phase is not represented.

Quadratic expressions that mix Z_d data into Z_{2d} phases are always
evaluated on canonical lifts in ``[0, d)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    EvenDimension,
    IndexOutOfRange,
    NotSymplectic,
    PhaseParityViolation,
    ShapeMismatch,
)
from .pauli import PauliElement, p_matrix, u_matrix
from .zmod import check_limits, invert_matrix, inverse_mod, residues


def vdiag(M: np.ndarray) -> np.ndarray:
    return np.diagonal(M).copy()


@lru_cache(maxsize=None)
def _quad_mask(k: int) -> np.ndarray:
    mask = np.triu(np.full((k, k), 2, dtype=np.int64), 1) + np.eye(k, dtype=np.int64)
    mask.flags.writeable = False
    return mask


def quad_matrix(M: np.ndarray) -> np.ndarray:
    """``2*Pupps(M) + Pdiag(M)``: twice the strict upper triangle plus the diagonal."""
    return M * _quad_mask(M.shape[0])


def gram_u(C: np.ndarray, d: int) -> np.ndarray:
    """``C.T @ U @ C (mod d)``."""
    n = C.shape[0] // 2
    return (C[n:].T @ C[:n]) % d


@dataclass(frozen=True, eq=False)
class CliffordOp:
    d: int
    C: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        check_limits(self.d)
        C = residues(self.C, self.d)
        h = residues(self.h, 2 * self.d)
        if C.ndim != 2 or C.shape[0] != C.shape[1] or C.shape[0] % 2:
            raise ShapeMismatch(f"C must be 2n x 2n, got {C.shape}")
        if h.shape != (C.shape[0],):
            raise ShapeMismatch(f"h must have length {C.shape[0]}, got {h.shape}")
        C.flags.writeable = False
        h.flags.writeable = False
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "h", h)

    @property
    def n(self) -> int:
        return self.C.shape[0] // 2

    @classmethod
    def identity(cls, n: int, d: int) -> CliffordOp:
        return cls(d, np.eye(2 * n, dtype=np.int64), np.zeros(2 * n, dtype=np.int64))

    def is_identity(self) -> bool:
        return np.array_equal(self.C, np.eye(2 * self.n, dtype=np.int64)) and not self.h.any()

    def __eq__(self, other):
        if not isinstance(other, CliffordOp):
            return NotImplemented
        return (self.d == other.d and np.array_equal(self.C, other.C)
                and np.array_equal(self.h, other.h))

    def __hash__(self):
        return hash((self.d, self.C.tobytes(), self.h.tobytes()))

    def __repr__(self):
        return f"CliffordOp(d={self.d}, C={self.C.tolist()}, h={self.h.tolist()})"

    def __call__(self, x: PauliElement) -> PauliElement:
        return conjugate_pauli(self, x)


def is_symplectic(C: np.ndarray, d: int) -> bool:
    n = C.shape[0] // 2
    P = p_matrix(n, d)
    return np.array_equal((C.T @ P @ C) % d, P)


def validate(C, h, d: int) -> CliffordOp:
    """Build a :class:`CliffordOp`, checking symplecticity and phase parity."""
    op = CliffordOp(d, C, h)
    if not is_symplectic(op.C, d):
        raise NotSymplectic("C.T P C != P (mod d)")
    parity = ((d - 1) * vdiag(gram_u(op.C, d)) + op.h) % 2
    if parity.any():
        raise PhaseParityViolation(f"h fails the parity condition at {np.flatnonzero(parity).tolist()}")
    return op


def _check_pair(a, b) -> None:
    if a.d != b.d or a.n != b.n:
        raise DimensionMismatch(f"(d={a.d}, n={a.n}) vs (d={b.d}, n={b.n})")


def conjugate_pauli(q: CliffordOp, x: PauliElement) -> PauliElement:
    """Image ``Q x Q^dagger``."""
    _check_pair(q, x)
    d = q.d
    M = gram_u(q.C, d)
    a = x.a
    eps = x.delta + int((q.h - vdiag(M)) @ a) + int(a @ quad_matrix(M) @ a)
    return PauliElement(d, q.C @ a, eps)


def phase_transport(C: np.ndarray, M: np.ndarray) -> np.ndarray:
    """``Vdiag(C.T (2 Pupps(M) + Pdiag(M)) C) - C.T Vdiag(M)``, exact integers."""
    W = quad_matrix(M)
    return (C * (W @ C)).sum(axis=0) - C.T @ vdiag(M)


def compose(outer: CliffordOp, inner: CliffordOp) -> CliffordOp:
    """The operation "apply ``inner``, then ``outer``"."""
    _check_pair(outer, inner)
    d = outer.d
    C, h = inner.C, inner.h
    M = gram_u(outer.C, d)
    h2 = h + C.T @ outer.h + phase_transport(C, M)
    return CliffordOp(d, outer.C @ C, h2)


def symplectic_inverse(C: np.ndarray, d: int) -> np.ndarray:
    n = C.shape[0] // 2
    P = p_matrix(n, d)
    return (-P @ C.T @ P) % d


def invert(q: CliffordOp) -> CliffordOp:
    d = q.d
    Ci = symplectic_inverse(q.C, d)
    N = gram_u(Ci, d)
    v = q.h + phase_transport(q.C, N)
    # C^{-T} must invert C^T modulo 2d here; the lift of the mod-d inverse is
    # off by multiples of d when d is even.
    CiT = invert_matrix(q.C.T, 2 * d) if d % 2 == 0 else Ci.T
    return CliffordOp(d, Ci, -(CiT @ v))


def from_pauli(x: PauliElement) -> CliffordOp:
    """Conjugation by ``XZ(a)``; the phase of ``x`` is irrelevant."""
    n, d = x.n, x.d
    return CliffordOp(d, np.eye(2 * n, dtype=np.int64), -2 * (p_matrix(n, d) @ x.a))


def from_linear_transform(T, d: int) -> CliffordOp:
    """The basis map ``|x> -> |T x>``."""
    T = residues(T, d)
    n = T.shape[0]
    Ti = invert_matrix(T, d)
    C = np.zeros((2 * n, 2 * n), dtype=np.int64)
    C[:n, :n] = T
    C[n:, n:] = Ti.T
    return CliffordOp(d, C, np.zeros(2 * n, dtype=np.int64))


def embed(op: CliffordOp, targets: Sequence[int], n: int) -> CliffordOp:
    """Place an operation on ``len(targets)`` qudits into an n-qudit register.

    ``targets`` are 1-based and strictly increasing.
    """
    k = op.n
    targets = list(targets)
    if len(targets) != k:
        raise DimensionMismatch(f"{k}-qudit op needs {k} targets, got {len(targets)}")
    if any(t < 1 or t > n for t in targets):
        raise IndexOutOfRange(f"targets {targets} outside 1..{n}")
    if any(b <= a for a, b in zip(targets, targets[1:])):
        raise IndexOutOfRange(f"targets {targets} must be strictly increasing")
    idx = [t - 1 for t in targets] + [t - 1 + n for t in targets]
    C = np.eye(2 * n, dtype=np.int64)
    C[np.ix_(idx, idx)] = op.C
    h = np.zeros(2 * n, dtype=np.int64)
    h[idx] = op.h
    return CliffordOp(op.d, C, h)


def fourier(target: int, n: int, d: int) -> CliffordOp:
    """Discrete Fourier transform on qudit ``target`` (1-based)."""
    one = CliffordOp(d, [[0, -1], [1, 0]], [0, 0])
    return embed(one, [target], n)


def fourier_inverse(target: int, n: int, d: int) -> CliffordOp:
    one = CliffordOp(d, [[0, 1], [-1, 0]], [0, 0])
    return embed(one, [target], n)


def phase_gate(target: int, n: int, d: int, power: int = 1) -> CliffordOp:
    """``power``-th power of ``|x> -> zeta**(x(x+d)) |x>`` on one qudit.

    Conjugation sends ``X`` to ``zeta**(g(d+1)) X Z**g`` and fixes ``Z``. For
    even ``d`` the power matters modulo ``2d``, not ``d``.
    """
    g = int(power) % (2 * d)
    one = CliffordOp(d, [[1, 0], [g, 1]], [g * (d + 1), 0])
    return embed(one, [target], n)


def sum_gate(control: int, target: int, n: int, d: int) -> CliffordOp:
    """``|x>|y> -> |x>|x+y>`` with ``x`` on ``control``."""
    T = np.eye(n, dtype=np.int64)
    T[target - 1, control - 1] = 1
    return from_linear_transform(T, d)


def gate_power(q: CliffordOp, k: int) -> CliffordOp:
    out = CliffordOp.identity(q.n, q.d)
    for _ in range(k):
        out = compose(q, out)
    return out


# -- half-phase representation for odd d ---------------------------------

@dataclass(frozen=True, eq=False)
class OddCliffordForm:
    """``(C, g)`` with ``g = h / 2`` in Z_d; only meaningful for odd ``d``."""

    d: int
    C: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        if self.d % 2 == 0:
            raise EvenDimension(f"d={self.d} is even")
        C = residues(self.C, self.d)
        g = residues(self.g, self.d)
        C.flags.writeable = False
        g.flags.writeable = False
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "g", g)

    @property
    def n(self) -> int:
        return self.C.shape[0] // 2

    def __eq__(self, other):
        if not isinstance(other, OddCliffordForm):
            return NotImplemented
        return (self.d == other.d and np.array_equal(self.C, other.C)
                and np.array_equal(self.g, other.g))

    def __hash__(self):
        return hash((self.d, self.C.tobytes(), self.g.tobytes()))


def half(d: int) -> int:
    """``2**-1`` modulo odd ``d``."""
    if d % 2 == 0:
        raise EvenDimension(f"2 has no inverse modulo even d={d}")
    return (d + 1) // 2


def to_odd_form(q: CliffordOp) -> OddCliffordForm:
    return OddCliffordForm(q.d, q.C, half(q.d) * q.h)


def from_odd_form(o: OddCliffordForm) -> CliffordOp:
    return CliffordOp(o.d, o.C, 2 * o.g)


def odd_conjugate_pauli(o: OddCliffordForm, a, delta: int) -> tuple[np.ndarray, int]:
    """Image of ``omega**delta XZ(a)``; returns ``(b, epsilon)`` with epsilon in Z_d."""
    d, i2 = o.d, half(o.d)
    a = residues(a, d)
    M = gram_u(o.C, d)
    U = u_matrix(o.n)
    eps = delta + int((o.g - i2 * vdiag(M)) @ a) + i2 * int(a @ (M - U) @ a)
    return (o.C @ a) % d, eps % d


def odd_compose(outer: OddCliffordForm, inner: OddCliffordForm) -> OddCliffordForm:
    _check_pair(outer, inner)
    d, i2 = outer.d, half(outer.d)
    C = inner.C
    M2 = gram_u(outer.C, d)
    U = u_matrix(outer.n)
    g = inner.g + C.T @ outer.g + i2 * (vdiag(C.T @ (M2 - U) @ C) - C.T @ vdiag(M2))
    return OddCliffordForm(d, outer.C @ C, g)


def odd_invert(o: OddCliffordForm) -> OddCliffordForm:
    d, i2 = o.d, half(o.d)
    Ci = symplectic_inverse(o.C, d)
    g = -(Ci.T @ o.g) + i2 * (Ci.T @ vdiag(gram_u(o.C, d)) + vdiag(gram_u(Ci, d)))
    return OddCliffordForm(d, Ci, g)


def scale_gate(target: int, r: int, n: int, d: int) -> CliffordOp:
    """``|x> -> |r x>`` on one qudit; ``r`` must be a unit."""
    inverse_mod(r, d)
    T = np.eye(n, dtype=np.int64)
    T[target - 1, target - 1] = r
    return from_linear_transform(T, d)
