import numpy as np
import pytest

from quditstab import clifford as cl
from quditstab import oracle
from quditstab.clifford import CliffordOp
from quditstab.decomp import (
    AddRow,
    Fourier,
    FourierInverse,
    GateSequence,
    PauliCorrection,
    PhasePower,
    QuditSwap,
    ScaleRow,
    decompose,
    fold,
    gate_bound,
    gate_count,
    gate_to_clifford,
    inverse_gate,
)
from quditstab.errors import IndexOutOfRange, InvalidOperation, InvalidParameter
from quditstab.sampling import adversarial_clifford, random_clifford, random_gate


def test_gate_to_clifford_examples():
    F = gate_to_clifford(Fourier(1), 1, 3)
    assert F.C.tolist() == [[0, 2], [1, 0]] and not F.h.any()
    S = gate_to_clifford(AddRow(1, 2, 1), 2, 5)
    assert S == cl.from_linear_transform([[1, 0], [1, 1]], 5)
    for g in range(4):
        assert gate_to_clifford(PhasePower(1, g), 1, 4).C.tolist() == [[1, 0], [g, 1]]


def test_gate_parameter_checks():
    with pytest.raises(InvalidParameter):
        gate_to_clifford(ScaleRow(1, 2), 1, 4)
    with pytest.raises(IndexOutOfRange):
        gate_to_clifford(Fourier(3), 2, 3)
    with pytest.raises((IndexOutOfRange, InvalidParameter)):
        gate_to_clifford(QuditSwap(1, 1), 2, 3)


@pytest.mark.parametrize("d", [2, 3, 4, 6, 9])
def test_every_gate_is_valid_and_matches_oracle(d, rng):
    n = 2
    for _ in range(40):
        g = random_gate(n, d, rng)
        q = gate_to_clifford(g, n, d)
        cl.validate(q.C, q.h, d)
        assert cl.compose(gate_to_clifford(inverse_gate(g, d), n, d), q).is_identity()
        U = oracle.gate_operator(g, n, d)
        for k in range(2 * n):
            a = np.zeros(2 * n, dtype=np.int64)
            a[k] = 1
            x = cl.PauliElement(d, a)
            lhs = oracle.conjugate(U, oracle.pauli_operator(x))
            assert np.allclose(lhs, oracle.pauli_operator(cl.conjugate_pauli(q, x)), atol=1e-9)


def test_fold_examples():
    assert fold(GateSequence(3, 2, ())).is_identity()
    assert fold(GateSequence(5, 1, (Fourier(1), FourierInverse(1)))).is_identity()
    assert fold(GateSequence(3, 1, (PhasePower(1, 1),) * 3)).is_identity()


def test_decompose_identity_is_empty():
    for d, n in [(2, 1), (6, 3)]:
        assert decompose(CliffordOp.identity(n, d)).gates == ()


def test_decompose_examples():
    F = cl.fourier(1, 1, 5)
    assert fold(decompose(F)) == F
    S = cl.sum_gate(1, 2, 2, 4)
    seq = decompose(S)
    assert fold(seq) == S
    assert oracle.equal_up_to_global_phase(oracle.sequence_operator(seq),
                                           oracle.gate_operator(AddRow(1, 2, 1), 2, 4))


def test_decompose_ends_with_correction(rng):
    q = random_clifford(2, 6, rng)
    seq = decompose(q)
    assert isinstance(seq.gates[-1], PauliCorrection)
    assert sum(isinstance(g, PauliCorrection) for g in seq.gates) == 1


def test_decompose_rejects_invalid():
    with pytest.raises(InvalidOperation):
        decompose(CliffordOp(3, [[1, 1], [0, 2]], [0, 0]))


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 9, 12])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_round_trip(d, n, rng):
    bound = gate_bound(n, d)
    for _ in range(25):
        q = random_clifford(n, d, rng)
        seq = decompose(q)
        assert fold(seq) == q
        assert gate_count(seq) <= bound


@pytest.mark.parametrize("d", [6, 10, 12])
def test_round_trip_without_unit_pivot(d, rng):
    for _ in range(15):
        n = int(rng.integers(1, 4))
        q = adversarial_clifford(n, d, rng)
        assert not any(np.gcd(int(x), d) == 1 for x in q.C[:, 0])
        assert fold(decompose(q)) == q


@pytest.mark.parametrize("d,n", [(2, 2), (3, 2), (4, 2), (6, 1), (2, 4), (6, 3)])
def test_decomposition_matches_dense(d, n, rng):
    for _ in range(5):
        seq0 = GateSequence(d, n, tuple(random_gate(n, d, rng) for _ in range(10 * n)))
        seq = decompose(fold(seq0))
        assert oracle.equal_up_to_global_phase(oracle.sequence_operator(seq),
                                               oracle.sequence_operator(seq0))
