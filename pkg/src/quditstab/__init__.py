"""Pauli, Clifford and stabilizer computations for qudits of any dimension d.

Everything is exact modular arithmetic over Z_d and Z_{2d}; the ``oracle``
module provides dense complex matrices for cross-checking.
"""
from .clifford import CliffordOp, compose, conjugate_pauli, invert, validate
from .decomp import GateSequence, decompose, fold
from .errors import QuditError
from .pauli import PauliElement
from .stabilizer import (
    StabilizerGenerators,
    StateExpansion,
    apply_clifford,
    expand,
    minimize_generators,
    normal_form,
    validate_stabilizer,
)
from .zmod import ResidueMatrix, smith_normal_form, solve_mixed_modulus

__all__ = [
    "CliffordOp",
    "GateSequence",
    "PauliElement",
    "QuditError",
    "ResidueMatrix",
    "StabilizerGenerators",
    "StateExpansion",
    "apply_clifford",
    "compose",
    "conjugate_pauli",
    "decompose",
    "expand",
    "fold",
    "invert",
    "minimize_generators",
    "normal_form",
    "smith_normal_form",
    "solve_mixed_modulus",
    "validate",
    "validate_stabilizer",
]
