import numpy as np
import pytest

from quditstab import clifford as cl
from quditstab import oracle
from quditstab.clifford import CliffordOp
from quditstab.decomp import decompose
from quditstab.errors import (
    DimensionMismatch,
    EvenDimension,
    IndexOutOfRange,
    NotSymplectic,
    PhaseParityViolation,
)
from quditstab.pauli import PauliElement, commutation_exponent
from quditstab.sampling import random_clifford


def basis_pauli(k, n, d):
    a = np.zeros(2 * n, dtype=np.int64)
    a[k] = 1
    return PauliElement(d, a)


def test_validate_examples():
    cl.validate(np.eye(2, dtype=int), [0, 0], 3)
    with pytest.raises(PhaseParityViolation):
        cl.validate(np.eye(2, dtype=int), [1, 0], 3)
    # for one qudit C^T P C = det(C) P, so this shear is symplectic
    cl.validate([[1, 1], [0, 1]], [0, 0], 3)
    for h in ([0, 0], [2, 4]):
        with pytest.raises(NotSymplectic):
            cl.validate([[1, 1], [0, 2]], h, 3)


def test_conjugate_examples():
    F = CliffordOp(3, [[0, 2], [1, 0]], [0, 0])
    assert cl.conjugate_pauli(F, PauliElement(3, [1, 1])) == PauliElement(3, [2, 1], 4)
    S = CliffordOp(2, [[1, 0], [1, 1]], [3, 0])
    assert cl.conjugate_pauli(S, PauliElement(2, [1, 0])) == PauliElement(2, [1, 1], 3)
    x = PauliElement(5, [1, 3, 2, 4], 7)
    assert cl.conjugate_pauli(CliffordOp.identity(2, 5), x) == x


def test_compose_examples(rng):
    F = cl.fourier(1, 1, 3)
    FF = cl.compose(F, F)
    assert FF.C.tolist() == [[2, 0], [0, 2]] and FF.h.tolist() == [0, 0]
    assert cl.compose(F, cl.invert(F)).is_identity()
    q = random_clifford(2, 6, rng)
    I = CliffordOp.identity(2, 6)
    assert cl.compose(q, I) == q and cl.compose(I, q) == q
    with pytest.raises(DimensionMismatch):
        cl.compose(F, cl.fourier(1, 1, 5))


def test_invert_examples():
    F = cl.fourier(1, 1, 3)
    assert cl.invert(F).C.tolist() == [[0, 1], [2, 0]]
    assert cl.invert(CliffordOp.identity(2, 4)).is_identity()
    S = CliffordOp(3, [[1, 0], [1, 1]], [4, 0])
    Si = cl.invert(S)
    assert Si.C.tolist() == [[1, 0], [2, 1]]
    assert cl.compose(Si, S).is_identity() and cl.compose(S, Si).is_identity()


def test_from_pauli():
    assert cl.from_pauli(PauliElement(3, [0, 0])).is_identity()
    assert cl.from_pauli(PauliElement(3, [1, 0])).h.tolist() == [0, 4]
    assert cl.from_pauli(PauliElement(4, [0, 1])).h.tolist() == [2, 0]


def test_from_pauli_matches_group_conjugation(rng):
    d, n = 6, 2
    for _ in range(30):
        x = PauliElement(d, rng.integers(0, d, 4), int(rng.integers(12)))
        y = PauliElement(d, rng.integers(0, d, 4), int(rng.integers(12)))
        assert cl.conjugate_pauli(cl.from_pauli(x), y) == x * y * x.inverse()


def test_linear_transform():
    assert cl.from_linear_transform(np.eye(2, dtype=int), 5).is_identity()
    for d in (2, 3, 5):
        sum_op = cl.from_linear_transform([[1, 0], [1, 1]], d)
        assert sum_op.C.tolist() == [[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, d - 1], [0, 0, 0, 1]]
        assert not sum_op.h.any()
    Pi = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    op = cl.from_linear_transform(Pi, 4)
    assert np.array_equal(op.C, np.block([[Pi, 0 * Pi], [0 * Pi, Pi]]))


def test_fourier():
    H = cl.fourier(1, 1, 2)
    assert H.C.tolist() == [[0, 1], [1, 0]] and not H.h.any()
    F = cl.fourier(2, 2, 3)
    assert F.C[0].tolist() == [1, 0, 0, 0] and F.C[2].tolist() == [0, 0, 1, 0]
    F1 = cl.fourier(1, 1, 3)
    acc = CliffordOp.identity(1, 3)
    for _ in range(4):
        acc = cl.compose(F1, acc)
    assert acc.is_identity()
    with pytest.raises(IndexOutOfRange):
        cl.fourier(3, 2, 3)


def test_phase_gate():
    assert cl.phase_gate(1, 1, 5, 0).is_identity()
    S = cl.phase_gate(1, 1, 2, 1)
    assert cl.conjugate_pauli(S, PauliElement(2, [1, 0])) == PauliElement(2, [1, 1], 3)
    S2 = cl.phase_gate(1, 1, 4, 2)
    assert S2.C.tolist() == [[1, 0], [2, 1]]
    S1 = cl.phase_gate(1, 1, 4, 1)
    assert S2 == cl.compose(S1, S1)
    with pytest.raises(IndexOutOfRange):
        cl.phase_gate(0, 1, 4, 1)


def test_phase_gate_power_equals_repeated(rng):
    for d in (3, 4, 6):
        for g in range(2 * d):
            acc = CliffordOp.identity(2, d)
            for _ in range(g):
                acc = cl.compose(cl.phase_gate(2, 2, d, 1), acc)
            assert cl.phase_gate(2, 2, d, g) == acc


def test_odd_form_examples(rng):
    assert not cl.to_odd_form(CliffordOp.identity(1, 3)).g.any()
    assert cl.to_odd_form(cl.from_pauli(PauliElement(3, [1, 0]))).g.tolist() == [0, 2]
    q = random_clifford(2, 5, rng)
    assert cl.from_odd_form(cl.to_odd_form(q)) == q
    with pytest.raises(EvenDimension):
        cl.to_odd_form(CliffordOp.identity(1, 4))


@pytest.mark.parametrize("d", [3, 5, 7, 9])
def test_odd_formulas_agree(d, rng):
    for _ in range(60):
        n = int(rng.integers(1, 4))
        a, b = random_clifford(n, d, rng), random_clifford(n, d, rng)
        oa, ob = cl.to_odd_form(a), cl.to_odd_form(b)
        assert cl.to_odd_form(cl.compose(a, b)) == cl.odd_compose(oa, ob)
        assert cl.to_odd_form(cl.invert(a)) == cl.odd_invert(oa)
        x = PauliElement(d, rng.integers(0, d, 2 * n), 2 * int(rng.integers(d)))
        y = cl.conjugate_pauli(a, x)
        bb, eps = cl.odd_conjugate_pauli(oa, x.a, x.delta // 2)
        assert np.array_equal(bb, y.a) and 2 * eps == y.delta


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 8])
def test_closure_and_homomorphism(d, rng):
    for _ in range(40):
        n = int(rng.integers(1, 4))
        q1, q2 = random_clifford(n, d, rng), random_clifford(n, d, rng)
        for q in (cl.compose(q1, q2), cl.invert(q1)):
            cl.validate(q.C, q.h, d)
        assert cl.compose(cl.invert(q1), q1).is_identity()
        x = PauliElement(d, rng.integers(0, d, 2 * n), int(rng.integers(2 * d)))
        y = PauliElement(d, rng.integers(0, d, 2 * n), int(rng.integers(2 * d)))
        assert cl.conjugate_pauli(cl.compose(q2, q1), x) == cl.conjugate_pauli(
            q2, cl.conjugate_pauli(q1, x))
        assert commutation_exponent(x, y) == commutation_exponent(
            cl.conjugate_pauli(q1, x), cl.conjugate_pauli(q1, y))


def _eps_with_lifts(C, h, a, delta, d):
    n = C.shape[0] // 2
    M = C[n:].T @ C[:n]
    return (delta + (h - cl.vdiag(M)) @ a + a @ cl.quad_matrix(M) @ a) % (2 * d)


@pytest.mark.parametrize("d", [2, 4, 6])
def test_conjugation_is_lift_independent(d, rng):
    for _ in range(40):
        n = int(rng.integers(1, 3))
        q = random_clifford(n, d, rng)
        x = PauliElement(d, rng.integers(0, d, 2 * n), int(rng.integers(2 * d)))
        base = _eps_with_lifts(q.C, q.h, x.a, x.delta, d)
        shiftC = q.C + d * rng.integers(0, 2, q.C.shape)
        shifta = x.a + d * rng.integers(0, 2, x.a.shape)
        assert _eps_with_lifts(shiftC, q.h, shifta, x.delta, d) == base
        assert base == cl.conjugate_pauli(q, x).delta


@pytest.mark.parametrize("d,n", [(2, 1), (2, 3), (3, 2), (4, 2), (5, 1), (6, 2), (8, 2), (16, 2)])
def test_conjugation_matches_oracle(d, n, rng):
    for _ in range(8):
        q = random_clifford(n, d, rng)
        U = oracle.sequence_operator(decompose(q))
        for k in range(2 * n):
            x = basis_pauli(k, n, d)
            lhs = oracle.conjugate(U, oracle.pauli_operator(x))
            assert np.max(np.abs(lhs - oracle.pauli_operator(cl.conjugate_pauli(q, x)))) < 1e-9
