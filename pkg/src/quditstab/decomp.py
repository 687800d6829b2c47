"""Decomposition of Clifford operations into one- and two-qudit gates.

The symplectic matrix is reduced to the identity column pair by column pair
(``k`` and ``n+k``) using elementary row operations; gcd passes based on
Euclid's algorithm take care of columns without an invertible entry. The
gate list is the reversed sequence of inverses, followed by a single Pauli
correction that fixes ``h``.

Qudit indices in gates are 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import ceil, gcd, log2
from typing import Iterable, Union

import numpy as np

from . import clifford as cl
from .clifford import CliffordOp
from .errors import (
    IndexOutOfRange,
    InternalContractViolation,
    InvalidOperation,
    InvalidParameter,
    QuditError,
)
from .pauli import PauliElement, p_matrix
from .zmod import inverse_mod, residues


@dataclass(frozen=True)
class QuditSwap:
    i: int
    j: int


@dataclass(frozen=True)
class ScaleRow:
    """``|x_i> -> |r x_i>`` for a unit ``r``."""
    i: int
    r: int


@dataclass(frozen=True)
class AddRow:
    """Adds ``factor`` times row ``source`` to row ``target`` (upper block).

    As a state map: ``x_target += factor * x_source``. ``AddRow(1, 2, 1)`` is SUM.
    """
    source: int
    target: int
    factor: int


@dataclass(frozen=True)
class Fourier:
    i: int


@dataclass(frozen=True)
class FourierInverse:
    i: int


@dataclass(frozen=True)
class PhasePower:
    i: int
    g: int


@dataclass(frozen=True, eq=False)
class PauliCorrection:
    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))

    def __eq__(self, other):
        return isinstance(other, PauliCorrection) and self.a == other.a

    def __hash__(self):
        return hash(("PauliCorrection", self.a))


ElementaryGate = Union[QuditSwap, ScaleRow, AddRow, Fourier, FourierInverse, PhasePower,
                       PauliCorrection]

GATE_TYPES = {cls.__name__: cls for cls in
              (QuditSwap, ScaleRow, AddRow, Fourier, FourierInverse, PhasePower, PauliCorrection)}


def gate_qudits(gate: ElementaryGate) -> tuple[int, ...]:
    match gate:
        case QuditSwap(i, j):
            return (i, j)
        case AddRow(s, t, _):
            return (s, t)
        case PauliCorrection():
            return ()
        case _:
            return (gate.i,)


def check_gate(gate: ElementaryGate, n: int, d: int) -> None:
    """Raise :class:`InvalidParameter` / :class:`IndexOutOfRange` for a malformed gate."""
    for q in gate_qudits(gate):
        if not 1 <= q <= n:
            raise IndexOutOfRange(f"{gate} acts outside qudits 1..{n}")
    match gate:
        case QuditSwap(i, j) | AddRow(i, j, _) if i == j:
            raise InvalidParameter(f"{gate} needs two distinct qudits")
        case ScaleRow(_, r) if gcd(int(r), d) != 1:
            raise InvalidParameter(f"ScaleRow factor {r} is not invertible modulo {d}")
        case PauliCorrection(a) if len(a) != 2 * n:
            raise InvalidParameter(f"PauliCorrection needs {2 * n} entries")


def _linear_gate(T: np.ndarray, Tinv: np.ndarray, d: int) -> CliffordOp:
    n = T.shape[0]
    C = np.zeros((2 * n, 2 * n), dtype=np.int64)
    C[:n, :n] = T
    C[n:, n:] = Tinv.T
    return CliffordOp(d, C, np.zeros(2 * n, dtype=np.int64))


@lru_cache(maxsize=65536)
def gate_to_clifford(gate: ElementaryGate, n: int, d: int) -> CliffordOp:
    """The embedded ``(C, h)`` of one elementary gate."""
    check_gate(gate, n, d)
    T = np.eye(n, dtype=np.int64)
    Tinv = np.eye(n, dtype=np.int64)
    match gate:
        case QuditSwap(i, j):
            T[[i - 1, j - 1]] = T[[j - 1, i - 1]]
            return _linear_gate(T, T, d)
        case ScaleRow(i, r):
            T[i - 1, i - 1] = r % d
            Tinv[i - 1, i - 1] = inverse_mod(r, d)
            return _linear_gate(T, Tinv, d)
        case AddRow(s, t, g):
            T[t - 1, s - 1] = g % d
            Tinv[t - 1, s - 1] = (-g) % d
            return _linear_gate(T, Tinv, d)
        case Fourier(i):
            return cl.fourier(i, n, d)
        case FourierInverse(i):
            return cl.fourier_inverse(i, n, d)
        case PhasePower(i, g):
            return cl.phase_gate(i, n, d, g)
        case PauliCorrection(a):
            return cl.from_pauli(PauliElement(d, a))
    raise InvalidParameter(f"unknown gate {gate!r}")


def inverse_gate(gate: ElementaryGate, d: int) -> ElementaryGate:
    """The inverse gate, exactly, including the phase vector."""
    match gate:
        case QuditSwap():
            return gate
        case ScaleRow(i, r):
            return ScaleRow(i, inverse_mod(r, d))
        case AddRow(s, t, g):
            return AddRow(s, t, (-g) % d)
        case Fourier(i):
            return FourierInverse(i)
        case FourierInverse(i):
            return Fourier(i)
        case PhasePower(i, g):
            # x(x+d) is odd for odd x when d is even, so g is only periodic mod 2d
            return PhasePower(i, (-g) % (d if d % 2 else 2 * d))
        case PauliCorrection(a):
            return PauliCorrection(tuple((-x) % d for x in a))
    raise InvalidParameter(f"unknown gate {gate!r}")


@dataclass(frozen=True)
class GateSequence:
    """Gates applied left to right: ``gates[0]`` acts on the state first."""

    d: int
    n: int
    gates: tuple[ElementaryGate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            check_gate(g, self.n, self.d)

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)


def fold(seq: GateSequence) -> CliffordOp:
    op = CliffordOp.identity(seq.n, seq.d)
    for g in seq.gates:
        op = cl.compose(gate_to_clifford(g, seq.n, seq.d), op)
    return op


def gate_bound(n: int, d: int) -> int:
    """Ceiling on the decomposition length: ``64 n^2 (ceil(log2 d) + 1)``."""
    return 64 * n * n * (ceil(log2(d)) + 1)


class _Reducer:
    """Left-multiplies elementary row operations onto ``M`` until it is ``I``."""

    def __init__(self, C: np.ndarray, d: int):
        self.M = residues(C, d)
        self.d = d
        self.n = C.shape[0] // 2
        self.applied: list[ElementaryGate] = []

    # each primitive updates M exactly as left multiplication by the gate's C
    def swap(self, i, j):
        if i == j:
            return
        n, M = self.n, self.M
        M[[i, j]] = M[[j, i]]
        M[[n + i, n + j]] = M[[n + j, n + i]]
        self.applied.append(QuditSwap(i + 1, j + 1))

    def scale(self, i, r):
        r %= self.d
        if r == 1:
            return
        n, M, d = self.n, self.M, self.d
        M[i] = (r * M[i]) % d
        M[n + i] = (inverse_mod(r, d) * M[n + i]) % d
        self.applied.append(ScaleRow(i + 1, r))

    def add(self, s, t, g):
        """Row ``t`` += g row ``s``; row ``n+s`` -= g row ``n+t``."""
        g %= self.d
        if g == 0:
            return
        n, M, d = self.n, self.M, self.d
        M[t] = (M[t] + g * M[s]) % d
        M[n + s] = (M[n + s] - g * M[n + t]) % d
        self.applied.append(AddRow(s + 1, t + 1, g))

    def fourier(self, i):
        n, M, d = self.n, self.M, self.d
        upper, lower = M[i].copy(), M[n + i].copy()
        M[i] = (-lower) % d
        M[n + i] = upper
        self.applied.append(Fourier(i + 1))

    def fourier_inverse(self, i):
        n, M, d = self.n, self.M, self.d
        upper, lower = M[i].copy(), M[n + i].copy()
        M[i] = lower
        M[n + i] = (-upper) % d
        self.applied.append(FourierInverse(i + 1))

    def phase(self, i, g):
        """Row ``n+i`` += g row ``i``."""
        g %= self.d
        if g == 0:
            return
        n, M, d = self.n, self.M, self.d
        M[n + i] = (M[n + i] + g * M[i]) % d
        self.applied.append(PhasePower(i + 1, g))

    def shear_up(self, i, g):
        """Row ``i`` += g row ``n+i`` (a Fourier-conjugated phase power)."""
        g %= self.d
        if g == 0:
            return
        self.fourier(i)
        self.phase(i, -g)
        self.fourier_inverse(i)

    # -- column reduction ---------------------------------------------------
    def _unit(self, x) -> bool:
        return gcd(int(x), self.d) == 1

    def _signed(self, x) -> int:
        x = int(x) % self.d
        return x - self.d if 2 * x > self.d else x

    def _euclid_vertical(self, i, col):
        """Leave gcd(M[i], M[n+i]) (up to a unit) in row ``i``, zero in ``n+i``."""
        n, M = self.n, self.M
        while M[n + i, col]:
            u = self._signed(M[i, col])
            if u == 0:
                self.fourier_inverse(i)
                continue
            lo = int(M[n + i, col])
            q = round(lo / u)
            self.phase(i, -q)
            if M[n + i, col]:
                self.fourier_inverse(i)

    def _euclid_horizontal(self, k, i, col):
        """Leave gcd(M[k], M[i]) in row ``k`` and zero in row ``i`` (upper block)."""
        M = self.M
        while M[i, col]:
            u = self._signed(M[k, col])
            if u == 0:
                self.swap(k, i)
                continue
            q = round(int(M[i, col]) / u)
            self.add(k, i, -q)
            if M[i, col]:
                self.swap(k, i)

    def _bring_unit(self, k, col):
        n, M = self.n, self.M
        if self._unit(M[k, col]):
            return
        for i in range(k + 1, n):
            if self._unit(M[i, col]):
                self.swap(k, i)
                return
        for i in range(k, n):
            if self._unit(M[n + i, col]):
                self.swap(k, i)
                self.fourier(k)
                return
        for i in range(k, n):
            self._euclid_vertical(i, col)
        for i in range(k + 1, n):
            self._euclid_horizontal(k, i, col)
        if not self._unit(M[k, col]):
            raise InternalContractViolation("column gcd is not a unit; C is not invertible")

    def reduce_column(self, k):
        """Turn column ``k`` into ``E_k``; rows of earlier qudits are untouched."""
        n, M, d = self.n, self.M, self.d
        self._bring_unit(k, k)
        self.scale(k, inverse_mod(int(M[k, k]), d))
        for i in range(k + 1, n):
            self.add(k, i, -int(M[i, k]))
        self.phase(k, -int(M[n + k, k]))
        if M[n + k + 1:, k].any():
            self.fourier(k)
            for i in range(k + 1, n):
                self.add(i, k, int(M[n + i, k]))
            self.fourier_inverse(k)

    def reduce_partner(self, k):
        """Turn column ``n+k`` into ``E_{n+k}`` once column ``k`` is ``E_k``."""
        n, M = self.n, self.M
        c = n + k
        if M[c, c] != 1:
            raise InternalContractViolation("symplecticity did not give a unit partner pivot")
        if M[k + 1:n, c].any():
            # rows i += g * row n+k, through an upper-block add under Fourier on k
            self.fourier(k)
            for i in range(k + 1, n):
                self.add(k, i, int(M[i, c]))
            self.fourier_inverse(k)
        for i in range(k + 1, n):
            self.add(i, k, int(M[n + i, c]))
        self.shear_up(k, -int(M[k, c]))

    def run(self) -> list[ElementaryGate]:
        n, d = self.n, self.d
        eye = np.eye(2 * n, dtype=np.int64)
        for k in range(n):
            self.reduce_column(k)
            self.reduce_partner(k)
            idx = [k, n + k]
            if not (np.array_equal(self.M[:, idx], eye[:, idx])
                    and np.array_equal(self.M[idx], eye[idx])):
                raise InternalContractViolation(f"qudit {k + 1} not reduced to identity")
        return self.applied


def decompose(q: CliffordOp) -> GateSequence:
    """Gate sequence whose fold reproduces ``q`` exactly (``C`` and ``h``)."""
    try:
        q = cl.validate(q.C, q.h, q.d)
    except QuditError as exc:
        raise InvalidOperation(str(exc)) from exc
    n, d = q.n, q.d
    applied = _Reducer(np.array(q.C), d).run()
    gates = [inverse_gate(g, d) for g in reversed(applied)]
    partial = fold(GateSequence(d, n, gates))
    if not np.array_equal(partial.C, q.C):
        raise InternalContractViolation("reduction does not reproduce C")
    diff = (q.h - partial.h) % (2 * d)
    if (diff % 2).any():
        raise InternalContractViolation("phase difference is odd")
    c = (q.C @ p_matrix(n, d) @ (diff // 2)) % d
    if c.any() or gates:
        gates.append(PauliCorrection(tuple(int(x) for x in c)))
    if len(gates) == 1 and not any(gates[0].a):
        gates = []
    return GateSequence(d, n, gates)


def gate_count(seq: GateSequence | Iterable) -> int:
    return len(list(seq))
