"""Random objects for property tests: gate sequences, Clifford ops, stabilizer states.

Random Clifford operations are products of random elementary gates, not
uniform samples of the Clifford group.
"""
from __future__ import annotations

from math import gcd

import numpy as np

from .clifford import CliffordOp
from .decomp import (
    AddRow,
    Fourier,
    FourierInverse,
    GateSequence,
    PauliCorrection,
    PhasePower,
    QuditSwap,
    ScaleRow,
    fold,
)
from .errors import QuditError

GATES_PER_QUDIT = 20


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_gate(n: int, d: int, rng=None):
    rng = _rng(rng)
    kinds = ["ScaleRow", "Fourier", "FourierInverse", "PhasePower", "PauliCorrection"]
    if n > 1:
        kinds += ["QuditSwap", "AddRow"]
    kind = kinds[rng.integers(len(kinds))]
    i = int(rng.integers(1, n + 1))
    if kind in ("QuditSwap", "AddRow"):
        j = int(rng.integers(1, n))
        j = j + 1 if j >= i else j
        if kind == "QuditSwap":
            return QuditSwap(i, j)
        return AddRow(i, j, int(rng.integers(1, d)))
    if kind == "ScaleRow":
        units = [r for r in range(1, d) if gcd(r, d) == 1]
        return ScaleRow(i, units[rng.integers(len(units))])
    if kind == "Fourier":
        return Fourier(i)
    if kind == "FourierInverse":
        return FourierInverse(i)
    if kind == "PhasePower":
        return PhasePower(i, int(rng.integers(1, d)) if d > 1 else 0)
    return PauliCorrection(tuple(int(x) for x in rng.integers(0, d, 2 * n)))


def random_sequence(n: int, d: int, rng=None, length: int | None = None) -> GateSequence:
    """``length`` random gates; defaults to ``GATES_PER_QUDIT * n``."""
    rng = _rng(rng)
    length = GATES_PER_QUDIT * n if length is None else length
    return GateSequence(d, n, [random_gate(n, d, rng) for _ in range(length)])


def random_clifford(n: int, d: int, rng=None, length: int | None = None) -> CliffordOp:
    return fold(random_sequence(n, d, rng, length))


def adversarial_clifford(n: int, d: int, rng=None, tries: int = 10_000) -> CliffordOp:
    """Random op whose first column has no invertible entry.

    Exists only when ``d`` has at least two distinct prime factors.
    """
    rng = _rng(rng)
    for _ in range(tries):
        q = random_clifford(n, d, rng)
        if all(gcd(int(x), d) != 1 for x in q.C[:, 0]):
            return q
    raise QuditError(f"no adversarial op found for n={n}, d={d}")


def divisors(d: int) -> list[int]:
    return [k for k in range(1, d + 1) if d % k == 0]


def product_stabilizer(spacings, d: int):
    """Generators of ``prod_i sum_j |s_i j>`` for divisors ``s_i`` of ``d``.

    Qudit ``i`` is stabilized by ``X**s_i`` and ``Z**(d/s_i)``; generators that
    are the identity are dropped.
    """
    n = len(spacings)
    cols = []
    for i, s in enumerate(spacings):
        if d % s:
            raise QuditError(f"{s} does not divide {d}")
        if s % d:
            c = np.zeros(2 * n, dtype=np.int64)
            c[i] = s
            cols.append(c)
        if (d // s) % d:
            c = np.zeros(2 * n, dtype=np.int64)
            c[n + i] = d // s
            cols.append(c)
    S = np.stack(cols, axis=1)
    return S, np.zeros(S.shape[1], dtype=np.int64)


def random_stabilizer(n: int, d: int, rng=None, length: int | None = None):
    """Random product state with per-qudit divisor spacing, then a random Clifford."""
    from .stabilizer import StabilizerGenerators, apply_clifford

    rng = _rng(rng)
    divs = divisors(d)
    spacings = [divs[rng.integers(len(divs))] for _ in range(n)]
    S, f = product_stabilizer(spacings, d)
    st = StabilizerGenerators(d, S, f)
    return apply_clifford(st, random_clifford(n, d, rng, length))
