"""The generalized Pauli group on n qudits.

An element is ``zeta**delta * XZ(a)`` with ``a = [v; w]`` in Z_d^{2n}
(``v`` holds X exponents, ``w`` Z exponents) and ``delta`` in Z_{2d}.
``zeta`` is a square root of ``omega = exp(2*pi*i/d)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, ShapeMismatch
from .zmod import check_limits, residues


@lru_cache(maxsize=None)
def _u_matrix(n: int) -> np.ndarray:
    U = np.zeros((2 * n, 2 * n), dtype=np.int64)
    U[n:, :n] = np.eye(n, dtype=np.int64)
    U.flags.writeable = False
    return U


def u_matrix(n: int) -> np.ndarray:
    """``U = [[0, 0], [I, 0]]``, so that ``a.T @ U @ b = w_a . v_b``."""
    return _u_matrix(n)


def p_matrix(n: int, d: int) -> np.ndarray:
    """Symplectic form ``P = U - U.T (mod d)``."""
    U = u_matrix(n)
    return np.mod(U - U.T, d)


@dataclass(frozen=True)
class SymplecticForm:
    """Bundles ``U`` and ``P`` for a given ``(n, d)``."""

    n: int
    d: int

    @property
    def U(self) -> np.ndarray:
        return u_matrix(self.n)

    @property
    def P(self) -> np.ndarray:
        return p_matrix(self.n, self.d)


def upper_form(a: np.ndarray, b: np.ndarray) -> int:
    """``a.T @ U @ b`` on canonical lifts, as an exact integer."""
    n = len(a) // 2
    return int(a[n:] @ b[:n])


@dataclass(frozen=True, eq=False)
class PauliElement:
    d: int
    a: np.ndarray
    delta: int = 0

    def __post_init__(self):
        check_limits(self.d)
        a = residues(self.a, self.d)
        if a.ndim != 1 or len(a) % 2:
            raise ShapeMismatch(f"a must be a vector of even length, got shape {a.shape}")
        a.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "delta", int(self.delta) % (2 * self.d))

    @classmethod
    def identity(cls, n: int, d: int) -> PauliElement:
        return cls(d, np.zeros(2 * n, dtype=np.int64))

    @classmethod
    def from_xz(cls, d: int, v, w, delta: int = 0) -> PauliElement:
        return cls(d, np.concatenate([np.asarray(v), np.asarray(w)]), delta)

    @property
    def n(self) -> int:
        return len(self.a) // 2

    @property
    def v(self) -> np.ndarray:
        return self.a[: self.n]

    @property
    def w(self) -> np.ndarray:
        return self.a[self.n:]

    def is_identity(self) -> bool:
        return self.delta == 0 and not self.a.any()

    def __eq__(self, other):
        if not isinstance(other, PauliElement):
            return NotImplemented
        return (self.d == other.d and self.delta == other.delta
                and np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((self.d, self.delta, self.a.tobytes()))

    def __mul__(self, other: PauliElement) -> PauliElement:
        return multiply(self, other)

    def __pow__(self, k: int) -> PauliElement:
        return power(self, k)

    def __repr__(self):
        return f"PauliElement(d={self.d}, a={self.a.tolist()}, delta={self.delta})"

    def inverse(self) -> PauliElement:
        return inverse(self)


def _check_pair(x: PauliElement, y: PauliElement) -> None:
    if x.d != y.d or x.n != y.n:
        raise DimensionMismatch(f"(d={x.d}, n={x.n}) vs (d={y.d}, n={y.n})")


def multiply(x: PauliElement, y: PauliElement) -> PauliElement:
    """Product ``x @ y`` as operators."""
    _check_pair(x, y)
    phase = x.delta + y.delta + 2 * upper_form(x.a, y.a)
    return PauliElement(x.d, x.a + y.a, phase)


def inverse(x: PauliElement) -> PauliElement:
    neg = residues(-x.a, x.d)
    return PauliElement(x.d, neg, -x.delta - 2 * upper_form(x.a, neg))


def power(x: PauliElement, k: int) -> PauliElement:
    if k < 0:
        return power(inverse(x), -k)
    out = PauliElement.identity(x.n, x.d)
    for _ in range(k):
        out = multiply(out, x)
    return out


def commutation_exponent(x: PauliElement, y: PauliElement) -> int:
    """Exponent ``e`` of omega in ``XZ(a) XZ(b) = omega**e XZ(b) XZ(a)``."""
    _check_pair(x, y)
    return (upper_form(x.a, y.a) - upper_form(y.a, x.a)) % x.d


def order(x: PauliElement) -> int:
    """Smallest ``k >= 1`` with ``x**k`` the identity, found by iteration."""
    acc = x
    for k in range(1, 2 * x.d + 1):
        if acc.is_identity():
            return k
        acc = multiply(acc, x)
    raise AssertionError("order exceeds 2d")  # unreachable for valid elements


def apply_to_basis(x: PauliElement, label) -> tuple[int, np.ndarray]:
    """Action on ``|label>``: returns ``(zeta exponent, new label)``."""
    label = residues(label, x.d)
    if label.shape != (x.n,):
        raise DimensionMismatch(f"label must have length {x.n}")
    phase = (x.delta + 2 * int(x.w @ label)) % (2 * x.d)
    return phase, (label + x.v) % x.d
