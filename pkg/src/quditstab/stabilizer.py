"""Stabilizer states given by generator matrices and phase vectors.

A state is described by generators ``zeta**f_k XZ(S_k)``: the columns of a
2n x m matrix ``S`` over Z_d and a vector ``f`` over Z_{2d}. This module
validates such descriptions, brings them to a minimal generating set, moves
them through Clifford operations and expands the state in the standard basis
as a sum of ``zeta``-phased basis vectors.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

import numpy as np

from .clifford import (
    CliffordOp,
    OddCliffordForm,
    gram_u,
    half,
    phase_transport,
    vdiag,
)
from .errors import (
    DimensionMismatch,
    InternalContractViolation,
    LabelPhaseMismatch,
    NonCommuting,
    PhaseConditionViolation,
    PhaseParityViolation,
    ShapeMismatch,
    WrongGroupSize,
)
from .pauli import PauliElement, u_matrix
from .zmod import (
    MixedModulusSystem,
    check_limits,
    invert_matrix,
    residues,
    smith_normal_form,
    solve_mixed_modulus,
)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class StabilizerGenerators:
    """Generators ``zeta**f[k] XZ(S[:, k])``; not validated on construction."""

    d: int
    S: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        check_limits(self.d)
        S = residues(self.S, self.d)
        f = residues(self.f, 2 * self.d)
        if S.ndim != 2 or S.shape[0] % 2 or S.shape[0] == 0:
            raise ShapeMismatch(f"S must be 2n x m, got shape {S.shape}")
        if f.shape != (S.shape[1],):
            raise ShapeMismatch(f"f must have length {S.shape[1]}, got shape {f.shape}")
        check_limits(self.d, *S.shape)
        object.__setattr__(self, "S", _freeze(S))
        object.__setattr__(self, "f", _freeze(f))

    @property
    def n(self) -> int:
        return self.S.shape[0] // 2

    @property
    def m(self) -> int:
        return self.S.shape[1]

    def generators(self) -> list[PauliElement]:
        return [PauliElement(self.d, self.S[:, k], int(self.f[k])) for k in range(self.m)]

    def __eq__(self, other):
        if not isinstance(other, StabilizerGenerators):
            return NotImplemented
        return (self.d == other.d and np.array_equal(self.S, other.S)
                and np.array_equal(self.f, other.f))

    def __hash__(self):
        return hash((self.d, self.S.shape, self.S.tobytes(), self.f.tobytes()))

    def __repr__(self):
        return f"StabilizerGenerators(d={self.d}, S={self.S.tolist()}, f={self.f.tolist()})"


def _as_generators(S, f=None, d: int | None = None) -> StabilizerGenerators:
    if isinstance(S, StabilizerGenerators):
        return S
    if d is None:
        raise ShapeMismatch("d is required when S is a plain array")
    S = np.asarray(S)
    if f is None:
        f = np.zeros(S.shape[1] if S.ndim == 2 else 0, dtype=np.int64)
    return StabilizerGenerators(d, S, f)


def gram(st: StabilizerGenerators) -> np.ndarray:
    """``S.T @ U @ S (mod d)``."""
    return gram_u(st.S, st.d)


def change_generators(st: StabilizerGenerators, R) -> StabilizerGenerators:
    """New generating set ``S R`` with the phases of the corresponding products."""
    d = st.d
    R = residues(R, d)
    if R.shape != (st.m, st.m):
        raise ShapeMismatch(f"R must be {st.m} x {st.m}, got {R.shape}")
    invert_matrix(R, d)
    return combine_generators(st, R)


def combine_generators(st: StabilizerGenerators, R) -> StabilizerGenerators:
    """Column ``k`` is the product over ``j`` of ``(generator j)**R[j, k]``, in order of ``j``.

    ``R`` may be any integer matrix with ``m`` rows; with ``R`` invertible this
    is :func:`change_generators`.
    """
    R = np.asarray(R, dtype=np.int64)
    f = R.T @ st.f + phase_transport(R, gram(st))
    return StabilizerGenerators(st.d, st.S @ R, f)


def apply_clifford(st: StabilizerGenerators, q: CliffordOp) -> StabilizerGenerators:
    """Generators of ``Q S Q^dagger``."""
    if q.d != st.d or q.n != st.n:
        raise DimensionMismatch(f"op (d={q.d}, n={q.n}) vs state (d={st.d}, n={st.n})")
    S = st.S
    f = st.f + S.T @ q.h + phase_transport(S, gram_u(q.C, q.d))
    return StabilizerGenerators(st.d, q.C @ S, f)


def column_orders(S: np.ndarray, d: int) -> list[int]:
    """Additive order of each column of ``S`` in Z_d^{2n}."""
    out = []
    for col in S.T:
        g = d
        for x in col:
            g = np.gcd(g, int(x))
        out.append(d // int(g))
    return out


def _check_commuting(st: StabilizerGenerators) -> None:
    G = gram(st)
    if ((G - G.T) % st.d).any():
        raise NonCommuting("generators do not commute: S^T P S != 0 (mod d)")


def _check_power_phases(st: StabilizerGenerators) -> None:
    """Every power of a generator that is proportional to the identity must be it."""
    d = st.d
    G = vdiag(gram(st))
    for k, order in enumerate(column_orders(st.S, d)):
        # r runs over the positive integer multiples of the order up to d
        for r in range(order, d + 1, order):
            if ((r - 1) * r * int(G[k]) + r * int(st.f[k])) % (2 * d):
                raise PhaseConditionViolation(
                    f"generator {k + 1} raised to {r} is a nontrivial multiple of the identity"
                )


def _minimize(st: StabilizerGenerators) -> StabilizerGenerators:
    d = st.d
    snf = smith_normal_form(st.S, d)
    full = combine_generators(st, snf.L)
    diag = np.zeros(st.m, dtype=np.int64)
    diag[: len(snf.diagonal)] = snf.diagonal
    keep = diag != 0
    dropped = full.f[~keep]
    if dropped.any():
        raise PhaseConditionViolation(
            "the generated group contains a nontrivial multiple of the identity"
        )
    # the original generators must come back exactly; otherwise some power of
    # them differs from its reconstruction by a phase
    back = combine_generators(full, invert_matrix(snf.L, d))
    if not np.array_equal(back.S, st.S) or not np.array_equal(back.f, st.f):
        raise PhaseConditionViolation(
            "the generated group contains a nontrivial multiple of the identity"
        )
    return StabilizerGenerators(d, full.S[:, keep], full.f[keep])


def _validate_minimal(st: StabilizerGenerators) -> None:
    size = prod(column_orders(st.S, st.d))
    if size != st.d**st.n:
        raise WrongGroupSize(f"group has {size} elements, expected d^n = {st.d ** st.n}")
    _check_power_phases(st)


def validate_stabilizer(S, f=None, d: int | None = None) -> StabilizerGenerators:
    """Check that the generators describe a stabilizer state; returns them unchanged."""
    st = _as_generators(S, f, d)
    _check_commuting(st)
    _validate_minimal(_minimize(st))
    return st


def minimize_generators(S, f=None, d: int | None = None) -> StabilizerGenerators:
    """Minimal generating set of the same group, found with the Smith form of ``S``."""
    st = _as_generators(S, f, d)
    _check_commuting(st)
    out = _minimize(st)
    _validate_minimal(out)
    return out


def is_minimal(st: StabilizerGenerators) -> bool:
    """No column vanishes and no nontrivial combination of columns does either.

    True iff the product of column orders equals the size of the generated
    subgroup of Z_d^{2n}.
    """
    d = st.d
    orders = column_orders(st.S, d)
    if 1 in orders:
        return False
    span = prod(d // int(f) if f else 1 for f in smith_normal_form(st.S, d).diagonal)
    return span == prod(orders)


def generated_group(st: StabilizerGenerators) -> set[tuple[int, tuple[int, ...]]]:
    """All elements ``(delta, a)`` of the group, by running every exponent over Z_{2d}.

    Exponential in ``m``; meant for cross-checks on small inputs.
    """
    d = st.d
    out = set()
    for r in itertools.product(range(2 * d), repeat=st.m):
        col = combine_generators(st, np.array(r, dtype=np.int64).reshape(-1, 1))
        out.add((int(col.f[0]), tuple(int(x) for x in col.S[:, 0])))
    return out


@dataclass(frozen=True, eq=False)
class ExpansionForm:
    """Data of the standard-basis expansion.

    ``Q = T^{-1} S1 R`` is in Smith form and ``B = T.T S2 R``, where ``S1`` and
    ``S2`` are the upper and lower halves of the minimal generator matrix.
    """

    d: int
    T: np.ndarray
    R: np.ndarray
    Q: np.ndarray
    B: np.ndarray
    f_prime: np.ndarray
    qbar: np.ndarray
    q: np.ndarray
    y: np.ndarray
    M: np.ndarray
    p: np.ndarray
    x_star: np.ndarray
    rank: int

    @property
    def n(self) -> int:
        return self.T.shape[0]

    @property
    def m(self) -> int:
        return self.R.shape[0]


def _split_smith(st: StabilizerGenerators):
    d, n = st.d, st.n
    snf = smith_normal_form(st.S[:n], d)
    T = invert_matrix(snf.K, d)
    R = snf.L
    Q = snf.F
    B = (T.T @ st.S[n:] @ R) % d
    if ((Q.T @ B - B.T @ Q) % d).any():
        raise InternalContractViolation("Q^T B is not symmetric")
    qbar = np.array([int(Q[k, k]) or d for k in range(n)], dtype=np.int64)
    q = np.concatenate([qbar, np.full(st.m - n, d, dtype=np.int64)])
    rank = int(np.count_nonzero(np.diagonal(Q)))
    return T, R, Q, B, qbar, q, rank


def _minimal(st: StabilizerGenerators) -> StabilizerGenerators:
    st2 = minimize_generators(st)
    if st2.m < st.n:
        raise InternalContractViolation("minimal generating set smaller than n")
    return st2


def normal_form(st: StabilizerGenerators) -> ExpansionForm:
    st = _minimal(st)
    d, n = st.d, st.n
    T, R, Q, B, qbar, q, rank = _split_smith(st)
    # the basis relabelling is a linear Clifford op with zero phase vector, and
    # it fixes U, so only the generator change touches the phases
    fp = combine_generators(st, R).f

    num = fp.copy()
    num[:n] += (d - qbar) * np.diagonal(B)[:n]
    if (num % 2).any():
        raise InternalContractViolation("odd numerator in the offset equation")
    y = np.mod(-(num // 2), q)
    x_star = solve_mixed_modulus(MixedModulusSystem(B.T, y, q, qbar, d))

    Qb, Bb = Q[:, :n], B[:, :n]
    M = (Qb @ Bb) % d
    p = np.mod(fp[:n] - vdiag(M) + 2 * (Bb.T @ x_star), 2 * d)
    return ExpansionForm(d, T, R, Q, B, fp, qbar, q, y, M, p, x_star, rank)


@dataclass(frozen=True, eq=False)
class StateExpansion:
    """``normalization * sum_j exp(2 pi i exponents[j] / phase_modulus) |labels[j]>``.

    ``phase_modulus`` is ``2d`` for powers of zeta and ``d`` for powers of omega.
    """

    d: int
    exponents: np.ndarray
    labels: np.ndarray
    normalization: float
    phase_modulus: int

    @property
    def n(self) -> int:
        return self.labels.shape[1]

    def __len__(self) -> int:
        return len(self.exponents)

    def terms(self) -> list[tuple[int, tuple[int, ...]]]:
        return [(int(e), tuple(int(x) for x in lab))
                for e, lab in zip(self.exponents, self.labels)]

    def indices(self) -> np.ndarray:
        weights = self.d ** np.arange(self.n - 1, -1, -1)
        return self.labels @ weights

    def dense(self) -> np.ndarray:
        psi = np.zeros(self.d**self.n, dtype=complex)
        amps = np.exp(2j * np.pi * self.exponents / self.phase_modulus)
        np.add.at(psi, self.indices(), self.normalization * amps)
        return psi

    def in_zeta_exponents(self) -> StateExpansion:
        if self.phase_modulus == 2 * self.d:
            return self
        return StateExpansion(self.d, 2 * self.exponents, self.labels,
                              self.normalization, 2 * self.d)

    def same_terms(self, other: StateExpansion) -> bool:
        a, b = self.in_zeta_exponents(), other.in_zeta_exponents()
        return (a.d == b.d and np.array_equal(a.labels, b.labels)
                and np.array_equal(a.exponents, b.exponents))

    def same_up_to_phase(self, other: StateExpansion) -> bool:
        """Same labels, and the exponents differ by one constant."""
        a, b = self.in_zeta_exponents(), other.in_zeta_exponents()
        if a.d != b.d or not np.array_equal(a.labels, b.labels):
            return False
        diff = (a.exponents - b.exponents) % a.phase_modulus
        return bool(np.all(diff == diff[0])) if len(diff) else True


def _sorted_expansion(d, exponents, labels, normalization, modulus) -> StateExpansion:
    labels = np.asarray(labels, dtype=np.int64).reshape(len(exponents), -1)
    weights = d ** np.arange(labels.shape[1] - 1, -1, -1)
    order = np.argsort(labels @ weights, kind="stable")
    return StateExpansion(d, _freeze(np.asarray(exponents, dtype=np.int64)[order]),
                          _freeze(labels[order]), float(normalization), modulus)


def _grid(moduli) -> np.ndarray:
    """All vectors of the box ``Z_{m_1} x ... x Z_{m_k}``, shape ``(prod, k)``."""
    moduli = [int(x) for x in moduli]
    if not moduli:
        return np.zeros((1, 0), dtype=np.int64)
    mesh = np.meshgrid(*[np.arange(x, dtype=np.int64) for x in moduli], indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def _quadratic(t: np.ndarray, M: np.ndarray, p: np.ndarray, modulus: int) -> np.ndarray:
    return (np.einsum("ti,ij,tj->t", t, M, t) + t @ p) % modulus


def _raw_terms(form: ExpansionForm, M, p, modulus):
    d, n = form.d, form.n
    t = _grid([d] * n)
    exps = _quadratic(t, M, p, modulus)
    labels = ((t @ form.Q[:, :n].T + form.x_star) % d) @ form.T.T % d
    return exps, labels


def _dedup_terms(form: ExpansionForm, M, p, modulus):
    d, r = form.d, form.rank
    sizes = d // form.qbar[:r]
    t = _grid(sizes)
    exps = _quadratic(t, M[:r, :r], p[:r], modulus)
    inner = np.tile(form.x_star, (len(t), 1))
    inner[:, :r] += t * np.diagonal(form.Q)[:r]
    labels = (inner % d) @ form.T.T % d
    return exps, labels, float(np.prod(sizes, dtype=float)) ** -0.5


def expand(st: StabilizerGenerators) -> StateExpansion:
    """The state as a sum of distinct basis vectors with equal weights, sorted by label."""
    form = normal_form(st)
    exps, labels, norm = _dedup_terms(form, form.M, form.p, 2 * form.d)
    return _sorted_expansion(form.d, exps, labels, norm, 2 * form.d)


def expand_raw(st: StabilizerGenerators) -> StateExpansion:
    """One term per ``t`` in Z_d^n, repeated labels included, in ``t`` order."""
    form = normal_form(st)
    exps, labels = _raw_terms(form, form.M, form.p, 2 * form.d)
    return StateExpansion(form.d, _freeze(exps), _freeze(labels),
                          len(exps) ** -0.5, 2 * form.d)


def expand_generic(st: StabilizerGenerators) -> StateExpansion:
    """One term per ``t`` in Z_d^m, built straight from ``S`` and ``f``.

    The offset still comes from the normal form.
    """
    st = _minimal(st)
    d, n = st.d, st.n
    form = normal_form(st)
    x = (form.T @ form.x_star) % d
    S1, S2 = st.S[:n], st.S[n:]
    M = (S1.T @ S2) % d
    p = np.mod(st.f - vdiag(M) + 2 * (S2.T @ x), 2 * d)
    t = _grid([d] * st.m)
    exps = _quadratic(t, M, p, 2 * d)
    labels = (t @ S1.T + x) % d
    return StateExpansion(d, _freeze(exps), _freeze(labels), len(exps) ** -0.5, 2 * d)


def collapse(raw: StateExpansion) -> StateExpansion:
    """Merge repeated labels; their phases must agree exactly."""
    idx = raw.indices()
    uniq, first, inverse = np.unique(idx, return_index=True, return_inverse=True)
    exps = raw.exponents[first]
    if not np.array_equal(exps[inverse], raw.exponents):
        bad = int(np.flatnonzero(exps[inverse] != raw.exponents)[0])
        raise LabelPhaseMismatch(f"label {raw.labels[bad].tolist()} appears with different phases")
    return StateExpansion(raw.d, _freeze(exps.copy()), _freeze(raw.labels[first].copy()),
                          len(uniq) ** -0.5, raw.phase_modulus)


def generator_residual(st: StabilizerGenerators, psi: np.ndarray) -> float:
    """Largest deviation ``|g psi - psi|`` over the generators, applied densely."""
    from .oracle import apply_pauli

    return max((float(np.max(np.abs(apply_pauli(g, psi) - psi))) for g in st.generators()),
               default=0.0)


# ---- odd dimensions: phases as powers of omega ------------------------------

@dataclass(frozen=True, eq=False)
class OddStabilizerForm:
    """Generators ``omega**b[k] XZ(S[:, k])`` for odd ``d``."""

    d: int
    S: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        half(self.d)
        S = residues(self.S, self.d)
        b = residues(self.b, self.d)
        if S.ndim != 2 or S.shape[0] % 2 or b.shape != (S.shape[1],):
            raise ShapeMismatch(f"S {S.shape} and b {b.shape} do not match")
        object.__setattr__(self, "S", _freeze(S))
        object.__setattr__(self, "b", _freeze(b))

    @property
    def n(self) -> int:
        return self.S.shape[0] // 2

    @property
    def m(self) -> int:
        return self.S.shape[1]

    def __eq__(self, other):
        if not isinstance(other, OddStabilizerForm):
            return NotImplemented
        return (self.d == other.d and np.array_equal(self.S, other.S)
                and np.array_equal(self.b, other.b))

    def __hash__(self):
        return hash((self.d, self.S.shape, self.S.tobytes(), self.b.tobytes()))


def to_odd_stabilizer_form(st: StabilizerGenerators) -> OddStabilizerForm:
    half(st.d)
    if (st.f % 2).any():
        raise PhaseParityViolation("odd zeta exponent has no omega counterpart")
    return OddStabilizerForm(st.d, st.S, st.f // 2)


def from_odd_stabilizer_form(o: OddStabilizerForm) -> StabilizerGenerators:
    return StabilizerGenerators(o.d, o.S, 2 * o.b)


def odd_change_generators(o: OddStabilizerForm, R) -> OddStabilizerForm:
    d, i2 = o.d, half(o.d)
    R = residues(R, d)
    if R.shape != (o.m, o.m):
        raise ShapeMismatch(f"R must be {o.m} x {o.m}, got {R.shape}")
    invert_matrix(R, d)
    G = gram_u(o.S, d)
    b = R.T @ (o.b - i2 * vdiag(G)) + i2 * vdiag(R.T @ G @ R)
    return OddStabilizerForm(d, o.S @ R, b)


def odd_apply_clifford(o: OddStabilizerForm, q: OddCliffordForm) -> OddStabilizerForm:
    if q.d != o.d or q.n != o.n:
        raise DimensionMismatch(f"op (d={q.d}, n={q.n}) vs state (d={o.d}, n={o.n})")
    d, i2 = o.d, half(o.d)
    M = gram_u(q.C, d)
    S = o.S
    b = o.b + S.T @ (q.g - i2 * vdiag(M)) + i2 * vdiag(S.T @ (M - u_matrix(o.n)) @ S)
    return OddStabilizerForm(d, q.C @ S, b)


def odd_normal_form(o: OddStabilizerForm) -> ExpansionForm:
    """Like :func:`normal_form` with ``f_prime``, ``y``, ``M``, ``p`` over Z_d as omega powers."""
    st = _minimal(from_odd_stabilizer_form(o))
    d, n, i2 = st.d, st.n, half(st.d)
    T, R, Q, B, qbar, q, rank = _split_smith(st)
    bp = odd_change_generators(to_odd_stabilizer_form(st), R).b
    y = np.mod(-bp, q)
    x_star = solve_mixed_modulus(MixedModulusSystem(B.T, y, q, qbar, d))
    Qb, Bb = Q[:, :n], B[:, :n]
    M = (i2 * (Qb @ Bb)) % d
    p = np.mod(bp[:n] - vdiag(M) + Bb.T @ x_star, d)
    return ExpansionForm(d, T, R, Q, B, bp, qbar, q, y, M, p, x_star, rank)


def odd_expand(o: OddStabilizerForm) -> StateExpansion:
    """Deduplicated expansion with omega exponents."""
    form = odd_normal_form(o)
    exps, labels, norm = _dedup_terms(form, form.M, form.p, form.d)
    return _sorted_expansion(form.d, exps, labels, norm, form.d)
