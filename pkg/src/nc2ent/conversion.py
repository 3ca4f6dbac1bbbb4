"""Discrete non-classicality conversion: split the Gram matrix of a linearly
independent classical set into two positive factors, synthesize the unitary
that sends each classical state to a product state, and check that the
Schmidt rank of converted states equals the number of classical terms the
input needs (its classical rank)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    GramMatrix,
    Operator,
    RANK_RTOL,
    StateVector,
    factor_gram,
    gram_of,
    hadamard,
    random_state,
    schmidt_decompose,
    synthesize_unitary,
)

INDEPENDENCE_TOL = 1e-10   # min Gram eigenvalue required for linear independence
SPLIT_TOL = 1e-10          # reproduction of the classical Gram by the factor product
EPS_BISECT_RTOL = 1e-10
EPS_CAP = 1e6              # beyond this the feasible range is reported as infinite


@dataclass(frozen=True)
class ClassicalSet:
    """Ordered family of D linearly independent unit vectors spanning C^D."""

    states: tuple[StateVector, ...]
    gram: GramMatrix = field(init=False)

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise ValueError("classical set must be nonempty")
        dim = states[0].dim
        if any(s.dim != dim for s in states):
            raise ValueError("classical states must share one dimension")
        if len(states) != dim:
            raise ValueError(
                f"need exactly {dim} states in dimension {dim}, got {len(states)}"
            )
        gram = gram_of(list(states))
        if gram.min_eigenvalue() <= INDEPENDENCE_TOL:
            raise ValueError(
                "classical states are not linearly independent "
                f"(min Gram eigenvalue {gram.min_eigenvalue():.3e})"
            )
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "gram", gram)

    @property
    def dim(self) -> int:
        return self.states[0].dim


@dataclass(frozen=True)
class SplitSpec:
    """One way of splitting the classical overlaps between two subsystems:
    gram_d has constant off-diagonal 1/(1+eps), gram_e carries the classical
    overlaps scaled by (1+eps), and their entrywise product reproduces the
    classical Gram."""

    epsilon: float
    gram_d: GramMatrix
    gram_e: GramMatrix
    d_states: tuple[StateVector, ...]
    e_states: tuple[StateVector, ...]


@dataclass(frozen=True)
class Conversion:
    """Conversion unitary on the bipartite output space together with the
    reference-state embedding |psi> -> |psi> (x) |ref> of the input space."""

    unitary: Operator
    reference: StateVector
    dim: int

    def embed(self, psi: StateVector) -> np.ndarray:
        if psi.dim != self.dim:
            raise ValueError(f"input has dimension {psi.dim}, expected {self.dim}")
        return np.kron(psi.amplitudes, self.reference.amplitudes)

    def convert(self, psi: StateVector) -> StateVector:
        """Apply the conversion to a pure input; output lives on C^D (x) C^D."""
        return StateVector(self.unitary.matrix @ self.embed(psi))

    def convert_density(self, rho: np.ndarray) -> np.ndarray:
        """Apply the conversion to a density operator on the input space."""
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.dim, self.dim):
            raise ValueError(f"density operator has shape {rho.shape}, expected square dim {self.dim}")
        embedded = np.kron(rho, self.reference.projector())
        u = self.unitary.matrix
        return u @ embedded @ u.conj().T


def uniform_overlap_gram(lam: float, dim: int) -> GramMatrix:
    """Gram matrix with unit diagonal and every off-diagonal entry lam;
    positive definite iff lam < 1 (eigenvalues 1-lam and 1+(dim-1)lam)."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"off-diagonal overlap must lie in [0, 1], got {lam}")
    g = np.full((dim, dim), complex(lam))
    np.fill_diagonal(g, 1.0)
    return GramMatrix(g)


def scaled_overlap_entries(gram: GramMatrix, factor: float) -> np.ndarray:
    """Entries of the Gram with off-diagonal overlaps multiplied by factor
    (not validated: the result may fail to be PSD)."""
    g = gram.entries * factor
    np.fill_diagonal(g, 1.0)
    return g


def epsilon_max(cs: ClassicalSet) -> float:
    """Supremum of eps for which scaling the classical overlaps by (1+eps)
    keeps the Gram positive definite.

    Located by bisection on the minimum-eigenvalue sign to relative tolerance
    1e-10; returns inf when the scaled Gram stays positive definite up to
    eps = 1e6 (e.g. orthogonal classical states).
    """
    def min_eig(eps: float) -> float:
        m = scaled_overlap_entries(cs.gram, 1.0 + eps)
        return float(np.linalg.eigvalsh(m)[0])

    lo, hi = 0.0, 1.0
    while min_eig(hi) > 0.0:
        lo = hi
        hi *= 2.0
        if hi > EPS_CAP:
            return math.inf
    while hi - lo > EPS_BISECT_RTOL * max(hi, 1.0):
        mid = 0.5 * (lo + hi)
        if min_eig(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def default_epsilon(cs: ClassicalSet) -> float:
    """Interior default: half the feasible range, or 1.0 when it is infinite."""
    emax = epsilon_max(cs)
    return 1.0 if math.isinf(emax) else emax / 2.0


def make_split(cs: ClassicalSet, epsilon: float, boundary_ok: bool = False) -> SplitSpec:
    """Split the classical Gram into the constant-overlap factor (overlap
    1/(1+eps)) and the scaled-overlap factor, and factor both into explicit
    state families.

    Requires both factors positive definite; with boundary_ok the degenerate
    endpoints (eps = 0 or a singular scaled factor) are admitted for probing.
    """
    if epsilon < 0.0 or (epsilon == 0.0 and not boundary_ok):
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    d = cs.dim
    mu = 1.0 / (1.0 + epsilon)
    m = scaled_overlap_entries(cs.gram, 1.0 + epsilon)
    min_eig = float(np.linalg.eigvalsh(m)[0])
    floor = -1e-10 if boundary_ok else INDEPENDENCE_TOL
    if min_eig < floor:
        raise ValueError(
            f"epsilon={epsilon} is infeasible: scaled Gram has min eigenvalue "
            f"{min_eig:.3e} (feasible range is eps < {epsilon_max(cs):.6g})"
        )
    gram_d = uniform_overlap_gram(mu, d)
    gram_e = GramMatrix(m)
    d_states = tuple(factor_gram(gram_d))
    e_states = tuple(factor_gram(gram_e))
    product = hadamard(gram_d, gram_e)
    if np.max(np.abs(product.entries - cs.gram.entries)) > SPLIT_TOL:
        raise ValueError("factor Grams fail to reproduce the classical Gram")
    return SplitSpec(epsilon=float(epsilon), gram_d=gram_d, gram_e=gram_e,
                     d_states=d_states, e_states=e_states)


def build_conversion(cs: ClassicalSet, split: SplitSpec,
                     reference: StateVector | None = None) -> Conversion:
    """Synthesize the conversion unitary mapping |c_i> (x) |ref> to
    |d_i> (x) |e_i> for every classical state.

    The Grams of the two families match by construction (the reference
    contributes a constant factor 1, and the product-family Gram is the
    entrywise product of the factor Grams), so a unitary exists. The default
    reference is the first classical state.
    """
    if reference is None:
        reference = cs.states[0]
    if reference.dim != cs.dim:
        raise ValueError(f"reference has dimension {reference.dim}, expected {cs.dim}")
    if len(split.d_states) != cs.dim:
        raise ValueError("split size does not match the classical set")
    from_states = [c.tensor(reference) for c in cs.states]
    to_states = [d.tensor(e) for d, e in zip(split.d_states, split.e_states)]
    unitary = synthesize_unitary(from_states, to_states)
    return Conversion(unitary=unitary, reference=reference, dim=cs.dim)


def classical_rank(psi: StateVector, cs: ClassicalSet) -> int:
    """Number of classical states needed to expand psi: the expansion is
    unique by linear independence, and coefficients below 1e-10 times the
    largest count as zero."""
    if psi.dim != cs.dim:
        raise ValueError(f"state has dimension {psi.dim}, expected {cs.dim}")
    basis = np.column_stack([c.amplitudes for c in cs.states])
    coeffs = np.linalg.solve(basis, psi.amplitudes)
    mags = np.abs(coeffs)
    return int(np.sum(mags > RANK_RTOL * mags.max()))


def convert_state(conv: Conversion, psi: StateVector) -> StateVector:
    return conv.convert(psi)


def convert_density(conv: Conversion, rho: np.ndarray) -> np.ndarray:
    return conv.convert_density(rho)


def random_classical_set(dim: int, rng: np.random.Generator,
                         min_gram_eig: float = 1e-3) -> ClassicalSet:
    """Random linearly independent classical set, resampled until the Gram is
    well conditioned (min eigenvalue above min_gram_eig)."""
    for _ in range(200):
        states = tuple(random_state(dim, rng) for _ in range(dim))
        gram = gram_of(list(states))
        if gram.min_eigenvalue() > min_gram_eig:
            return ClassicalSet(states=states)
    raise RuntimeError("failed to sample a well-conditioned classical set")


def random_superposition(cs: ClassicalSet, support: int,
                         rng: np.random.Generator) -> tuple[StateVector, int]:
    """Random superposition of `support` distinct classical states; returns the
    state and its classical rank (equal to `support` for generic coefficients)."""
    if not 1 <= support <= cs.dim:
        raise ValueError(f"support must lie in 1..{cs.dim}")
    idx = rng.choice(cs.dim, size=support, replace=False)
    coeffs = rng.standard_normal(support) + 1j * rng.standard_normal(support)
    vec = sum(c * cs.states[i].amplitudes for c, i in zip(coeffs, idx))
    psi = StateVector.normalized(vec)
    return psi, classical_rank(psi, cs)


@dataclass(frozen=True)
class RankEqualityReport:
    """Outcome of the Schmidt-rank vs classical-rank property check."""

    trials: int
    passes: int
    failures: list[dict]
    max_gram_residual: float
    max_unitarity_residual: float

    @property
    def all_passed(self) -> bool:
        return self.passes == self.trials and not self.failures


def verify_rank_equality(cs: ClassicalSet, conv: Conversion, trials: int = 100,
                         seed: int | None = 0) -> RankEqualityReport:
    """For random superpositions of random support sizes, check that the
    Schmidt rank of the converted state equals the classical rank of the
    input. Failures are collected, not raised."""
    rng = np.random.default_rng(seed)
    d = cs.dim
    failures: list[dict] = []
    passes = 0
    u = conv.unitary.matrix
    unit_res = float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))
    converted = [conv.convert(c) for c in cs.states]
    gram_res = float(np.max(np.abs(gram_of(converted).entries - cs.gram.entries)))
    for trial in range(trials):
        support = int(rng.integers(1, d + 1))
        psi, r_c = random_superposition(cs, support, rng)
        out = conv.convert(psi)
        sd = schmidt_decompose(out, d, d)
        if sd.rank == r_c:
            passes += 1
        else:
            failures.append({"trial": trial, "support": support,
                             "classical_rank": r_c, "schmidt_rank": sd.rank})
    return RankEqualityReport(trials=trials, passes=passes, failures=failures,
                              max_gram_residual=gram_res,
                              max_unitarity_residual=unit_res)
