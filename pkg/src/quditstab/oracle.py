"""Dense state-vector ground truth, built from the state maps of each gate.

Nothing here reads ``(C, h)``: Pauli operators come from the clock and shift
definitions and gates from their action on basis states, so the results can
be used to check the symbolic formulas.

Conventions: ``omega = exp(2*pi*i/d)``, ``zeta = exp(i*pi/d)``. Qudit 1 is the
most significant digit of a basis index.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .decomp import (
    AddRow,
    ElementaryGate,
    Fourier,
    FourierInverse,
    GateSequence,
    PauliCorrection,
    PhasePower,
    QuditSwap,
    ScaleRow,
    check_gate,
)
from .errors import DimensionCap, ShapeMismatch
from .pauli import PauliElement

DEFAULT_CAP = 4096
TOL = 1e-9


@lru_cache(maxsize=None)
def zeta_powers(d: int) -> np.ndarray:
    """``zeta**k`` for ``k = 0 .. 2d-1``, one exp call per exponent."""
    k = np.arange(2 * d)
    out = np.exp(1j * np.pi * k / d)
    out.flags.writeable = False
    return out


def _check_cap(n: int, d: int, cap: int) -> int:
    dim = d**n
    if dim > cap:
        raise DimensionCap(f"d**n = {dim} exceeds cap {cap}")
    return dim


@lru_cache(maxsize=64)
def basis_labels(n: int, d: int) -> np.ndarray:
    """All labels in index order, shape ``(d**n, n)``."""
    idx = np.arange(d**n)
    labels = np.empty((d**n, n), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        labels[:, i] = idx % d
        idx = idx // d
    labels.flags.writeable = False
    return labels


def label_index(labels: np.ndarray, d: int) -> np.ndarray:
    labels = np.atleast_2d(labels)
    weights = d ** np.arange(labels.shape[1] - 1, -1, -1)
    return (labels % d) @ weights


def _column(v: np.ndarray, ndim: int) -> np.ndarray:
    return v.reshape((-1,) + (1,) * (ndim - 1))


def _apply_monomial(psi: np.ndarray, targets, phases) -> np.ndarray:
    """``|x> -> phases[x] |targets[x]>`` on the first axis of ``psi``.

    ``targets=None`` means a diagonal map; ``phases=None`` a pure permutation.
    """
    if targets is None:
        return psi * _column(phases, psi.ndim)
    source = np.empty_like(targets)
    source[targets] = np.arange(len(targets))
    out = np.take(psi, source, axis=0)
    if phases is not None:
        out *= _column(phases[source], psi.ndim)
    return out


def apply_pauli(x: PauliElement, psi: np.ndarray) -> np.ndarray:
    """``zeta**delta XZ(a)`` on the first axis of ``psi``."""
    n, d = x.n, x.d
    labels = basis_labels(n, d)
    exps = (x.delta + 2 * (labels @ x.w)) % (2 * d)
    return _apply_monomial(np.asarray(psi, dtype=complex), label_index(labels + x.v, d),
                           zeta_powers(d)[exps])


def pauli_operator(x: PauliElement, cap: int = DEFAULT_CAP) -> np.ndarray:
    dim = _check_cap(x.n, x.d, cap)
    return apply_pauli(x, np.eye(dim, dtype=complex))


def _fourier_matrix(d: int, inverse: bool = False) -> np.ndarray:
    k = np.arange(d)
    exps = (2 * np.outer(k, k)) % (2 * d)
    F = zeta_powers(d)[exps] / np.sqrt(d)
    return F.conj().T if inverse else F


def _apply_single(psi: np.ndarray, U: np.ndarray, i: int, n: int, d: int) -> np.ndarray:
    t = psi.reshape(d**i, d, -1)
    return np.matmul(U, t).reshape(psi.shape)


def apply_gate(gate: ElementaryGate, psi: np.ndarray, n: int, d: int) -> np.ndarray:
    """Action of one elementary gate on the first axis of ``psi``."""
    check_gate(gate, n, d)
    psi = np.asarray(psi, dtype=complex)
    labels = basis_labels(n, d)
    match gate:
        case QuditSwap(i, j):
            new = labels.copy()
            new[:, [i - 1, j - 1]] = labels[:, [j - 1, i - 1]]
            return _apply_monomial(psi, label_index(new, d), None)
        case ScaleRow(i, r):
            new = labels.copy()
            new[:, i - 1] = (r * labels[:, i - 1]) % d
            return _apply_monomial(psi, label_index(new, d), None)
        case AddRow(s, t, g):
            new = labels.copy()
            new[:, t - 1] = (labels[:, t - 1] + g * labels[:, s - 1]) % d
            return _apply_monomial(psi, label_index(new, d), None)
        case Fourier(i):
            return _apply_single(psi, _fourier_matrix(d), i - 1, n, d)
        case FourierInverse(i):
            return _apply_single(psi, _fourier_matrix(d, inverse=True), i - 1, n, d)
        case PhasePower(i, g):
            x = labels[:, i - 1]
            exps = (g * x * (x + d)) % (2 * d)
            return _apply_monomial(psi, None, zeta_powers(d)[exps])
        case PauliCorrection(a):
            return apply_pauli(PauliElement(d, a), psi)
    raise ShapeMismatch(f"unknown gate {gate!r}")


def gate_operator(gate: ElementaryGate, n: int, d: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    dim = _check_cap(n, d, cap)
    return apply_gate(gate, np.eye(dim, dtype=complex), n, d)


def apply_sequence(seq: GateSequence, psi: np.ndarray) -> np.ndarray:
    for g in seq.gates:
        psi = apply_gate(g, psi, seq.n, seq.d)
    return psi


def sequence_operator(seq: GateSequence, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Unitary of a gate sequence (first gate applied first)."""
    dim = _check_cap(seq.n, seq.d, cap)
    return apply_sequence(seq, np.eye(dim, dtype=complex))


def equal_up_to_global_phase(A: np.ndarray, B: np.ndarray, tol: float = TOL) -> bool:
    """True iff ``A = c B`` for a unit scalar ``c``, taken from B's largest entry."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise ShapeMismatch(f"{A.shape} vs {B.shape}")
    k = np.argmax(np.abs(B))
    b = B.flat[k]
    if abs(b) <= tol:
        return bool(np.all(np.abs(A) <= tol))
    c = A.flat[k] / b
    if abs(abs(c) - 1) > tol:
        return False
    return bool(np.max(np.abs(A - c * B)) <= tol)


def conjugate(U: np.ndarray, A: np.ndarray) -> np.ndarray:
    """``U A U^dagger``."""
    if U.shape != A.shape:
        raise ShapeMismatch(f"{U.shape} vs {A.shape}")
    return U @ A @ U.conj().T


def is_unitary(U: np.ndarray, tol: float = TOL) -> bool:
    return bool(np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0]))) <= tol)


def basis_state(label, d: int) -> np.ndarray:
    label = np.asarray(label)
    psi = np.zeros(d ** len(label), dtype=complex)
    psi[label_index(label, d)[0]] = 1
    return psi
