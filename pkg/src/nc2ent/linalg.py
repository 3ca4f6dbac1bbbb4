"""Dense complex linear algebra core: state vectors, Gram matrices, unitary
synthesis from inner-product constraints, and bipartite entanglement
diagnostics (Schmidt decomposition, entropy, negativity)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Construction tolerances for value types.
NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
UNIT_DIAG_TOL = 1e-12
PSD_TOL = 1e-10          # min eigenvalue >= -PSD_TOL counts as PSD
EIG_ZERO_TOL = 1e-12     # eigenvalues below this are clamped to zero in factorizations

# Operation tolerances.
RANK_RTOL = 1e-10        # singular/eigen values below RANK_RTOL * largest are zero
GRAM_MATCH_TOL = 1e-8    # Gram equality required for unitary synthesis
UNITARY_TOL = 1e-10
DENSITY_TOL = 1e-10
ENTROPY_CUT = 1e-12      # Schmidt coefficients below this are dropped from entropy sums


class GramMismatchError(ValueError):
    """Raised when two state families have unequal Gram matrices, so no unitary
    can map one family onto the other."""


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class StateVector:
    """Unit vector in a finite-dimensional complex space.

    Construction rejects unnormalized input (norm must be 1 within 1e-12);
    use :meth:`normalized` to build from raw amplitudes.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.asarray(self.amplitudes, dtype=complex).reshape(-1))
        if amps.size == 0:
            raise ValueError("state vector must have positive dimension")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(
                f"state vector is not normalized (norm={norm!r}); "
                "use StateVector.normalized() to normalize explicitly"
            )
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        """Build a state from raw amplitudes, normalizing them first."""
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def overlap(self, other: "StateVector") -> complex:
        """Inner product <self|other>."""
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def projector(self) -> np.ndarray:
        """Rank-1 density operator |psi><psi|."""
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def tensor(self, other: "StateVector") -> "StateVector":
        """Product state self (x) other."""
        return StateVector(np.kron(self.amplitudes, other.amplitudes))


def basis_state(dim: int, k: int) -> StateVector:
    """Standard basis vector |k> in the given dimension."""
    if not 0 <= k < dim:
        raise ValueError(f"basis index {k} out of range for dimension {dim}")
    amps = np.zeros(dim, dtype=complex)
    amps[k] = 1.0
    return StateVector(amps)


def random_state(dim: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector.normalized(z)


@dataclass(frozen=True)
class GramMatrix:
    """Overlap table of a normalized state family: Hermitian, PSD, unit diagonal."""

    entries: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.entries, dtype=complex)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError(f"Gram matrix must be square, got shape {g.shape}")
        if np.max(np.abs(g - g.conj().T)) > HERMITIAN_TOL:
            raise ValueError("Gram matrix is not Hermitian within tolerance")
        if np.max(np.abs(np.diag(g) - 1.0)) > UNIT_DIAG_TOL:
            raise ValueError("Gram matrix does not have unit diagonal")
        if np.linalg.eigvalsh(g)[0] < -PSD_TOL:
            raise ValueError("Gram matrix is not positive semidefinite")
        object.__setattr__(self, "entries", _frozen(g))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries)[0])


@dataclass(frozen=True)
class Operator:
    """Dense complex matrix; unitarity or Hermiticity is asserted by the
    operations that require it, not here."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2:
            raise ValueError(f"operator must be a matrix, got ndim={m.ndim}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        if self.rows != self.cols:
            return False
        delta = self.matrix @ self.matrix.conj().T - np.eye(self.rows)
        return float(np.max(np.abs(delta))) <= tol


@dataclass(frozen=True)
class SchmidtData:
    """Schmidt decomposition of a bipartite pure state across a declared cut.

    coefficients are the descending singular values; left/right vectors are
    the columns of U and rows of Vh from the SVD of the coefficient matrix.
    """

    coefficients: np.ndarray
    left_vectors: np.ndarray   # shape (dimA, m), columns orthonormal
    right_vectors: np.ndarray  # shape (m, dimB), rows orthonormal
    cut: tuple[int, int]
    rank: int = field(init=False)

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float)
        if np.any(np.diff(coeffs) > 0):
            raise ValueError("Schmidt coefficients must be descending")
        total = float(np.sum(coeffs**2))
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"Schmidt coefficients are not normalized (sum sq = {total!r})")
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "left_vectors", _frozen(self.left_vectors))
        object.__setattr__(self, "right_vectors", _frozen(self.right_vectors))
        cutoff = RANK_RTOL * coeffs[0] if coeffs.size else 0.0
        object.__setattr__(self, "rank", int(np.sum(coeffs > cutoff)))

    def reconstruct(self) -> np.ndarray:
        """Rebuild the bipartite amplitude vector sum_k c_k (left_k x right_k)."""
        m = (self.left_vectors * self.coefficients) @ self.right_vectors
        return m.reshape(-1)


def gram_of(states: list[StateVector]) -> GramMatrix:
    """Gram matrix of a state family: G_ij = <state_i|state_j>."""
    if not states:
        raise ValueError("need at least one state")
    dim = states[0].dim
    if any(s.dim != dim for s in states):
        raise ValueError("all states must share one dimension")
    mat = np.column_stack([s.amplitudes for s in states])
    return GramMatrix(mat.conj().T @ mat)


def hadamard(g1: GramMatrix, g2: GramMatrix) -> GramMatrix:
    """Entrywise product of two Gram matrices; PSD by the Schur product
    theorem, and the Gram of the corresponding product-state family."""
    if g1.n != g2.n:
        raise ValueError(f"size mismatch: {g1.n} vs {g2.n}")
    return GramMatrix(g1.entries * g2.entries)


def factor_gram(g: GramMatrix) -> list[StateVector]:
    """Factor G = C^dag C and return the columns of C as unit vectors.

    Uses the principal square root C = sqrt(L) V^dag from the eigendecomposition
    G = V L V^dag, which is deterministic and order-independent; eigenvalues
    below 1e-12 are clamped to zero (inputs below -1e-10 are rejected).
    """
    w, v = np.linalg.eigh(g.entries)
    if w[0] < -PSD_TOL:
        raise ValueError(f"matrix is not PSD (min eigenvalue {w[0]!r})")
    w = np.where(w < EIG_ZERO_TOL, 0.0, w)
    c = np.sqrt(w)[:, None] * v.conj().T
    return [StateVector(c[:, i]) for i in range(g.n)]


def _orthonormalize(vectors: np.ndarray, pivots: list[int] | None = None):
    """Gram-Schmidt in index order. With pivots=None, reveal the rank at the
    relative threshold RANK_RTOL and return (frame, pivots); otherwise reuse
    the given pivot decisions so two equal-Gram families produce frames with
    identical expansion coefficients.
    """
    dim, n = vectors.shape
    scale = max(float(np.max(np.linalg.norm(vectors, axis=0))), 1.0)
    frame: list[np.ndarray] = []
    chosen: list[int] = []
    for i in range(n):
        v = vectors[:, i].copy()
        for q in frame:
            v -= np.vdot(q, v) * q
        if pivots is None:
            if np.linalg.norm(v) > RANK_RTOL * scale:
                frame.append(v / np.linalg.norm(v))
                chosen.append(i)
        elif i in pivots:
            norm = np.linalg.norm(v)
            if norm == 0:
                raise GramMismatchError("family ranks disagree; Gram matrices differ")
            frame.append(v / norm)
            chosen.append(i)
    q = np.column_stack(frame) if frame else np.zeros((dim, 0), dtype=complex)
    return q, chosen


def _complete_frame(q: np.ndarray) -> np.ndarray:
    """Deterministically extend orthonormal columns q to a full basis, using
    the eigenvectors of the orthogonal-complement projector."""
    dim, r = q.shape
    if r == dim:
        return q
    proj = np.eye(dim, dtype=complex) - q @ q.conj().T
    w, v = np.linalg.eigh(proj)
    comp = v[:, w > 0.5]
    return np.hstack([q, comp])


def synthesize_unitary(from_states: list[StateVector], to_states: list[StateVector]) -> Operator:
    """Build a unitary mapping each from_state onto the matching to_state.

    Such a unitary exists iff both families share one Gram matrix; a mismatch
    beyond 1e-8 raises GramMismatchError. When the target space is larger,
    the source vectors are embedded by zero padding and the result is a
    unitary on the larger space. Both families are orthonormalized in index
    order with shared pivoting, the frames are mapped onto each other, and
    the orthogonal complements are completed deterministically.
    """
    if len(from_states) != len(to_states) or not from_states:
        raise ValueError("need two equal-length nonempty state families")
    g_from = gram_of(from_states).entries
    g_to = gram_of(to_states).entries
    mismatch = float(np.max(np.abs(g_from - g_to)))
    if mismatch > GRAM_MATCH_TOL:
        raise GramMismatchError(
            f"Gram matrices differ by {mismatch:.3e}; no unitary maps one family onto the other"
        )

    dim_from = from_states[0].dim
    dim_to = to_states[0].dim
    if dim_from > dim_to:
        raise ValueError("target dimension must be at least the source dimension")
    a = np.zeros((dim_to, len(from_states)), dtype=complex)
    a[:dim_from, :] = np.column_stack([s.amplitudes for s in from_states])
    b = np.column_stack([s.amplitudes for s in to_states])

    q_from, pivots = _orthonormalize(a)
    q_to, _ = _orthonormalize(b, pivots=pivots)
    full_from = _complete_frame(q_from)
    full_to = _complete_frame(q_to)
    u = Operator(full_to @ full_from.conj().T)
    if not u.is_unitary():
        raise GramMismatchError("synthesized map failed the unitarity check")
    return u


def schmidt_decompose(psi: StateVector, dim_a: int, dim_b: int) -> SchmidtData:
    """Schmidt decomposition of psi across the dim_a x dim_b cut (SVD of the
    reshaped coefficient matrix)."""
    if dim_a * dim_b != psi.dim:
        raise ValueError(f"cut {dim_a}x{dim_b} does not factor dimension {psi.dim}")
    mat = psi.amplitudes.reshape(dim_a, dim_b)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    return SchmidtData(coefficients=s, left_vectors=u, right_vectors=vh, cut=(dim_a, dim_b))


def entanglement_entropy(sd: SchmidtData) -> float:
    """Entropy of entanglement in ebits: -sum lambda^2 log2 lambda^2."""
    lam2 = sd.coefficients[sd.coefficients > ENTROPY_CUT] ** 2
    if lam2.size == 0:
        return 0.0
    return float(-np.sum(lam2 * np.log2(lam2)))


def _check_density(rho: np.ndarray, dim: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise ValueError(f"density operator has shape {rho.shape}, expected {(dim, dim)}")
    if np.max(np.abs(rho - rho.conj().T)) > DENSITY_TOL:
        raise ValueError("density operator is not Hermitian")
    if abs(np.trace(rho) - 1.0) > DENSITY_TOL:
        raise ValueError("density operator does not have unit trace")
    if np.linalg.eigvalsh(rho)[0] < -DENSITY_TOL:
        raise ValueError("density operator is not positive semidefinite")
    return rho


def partial_transpose(rho, dim_a: int, dim_b: int) -> np.ndarray:
    """Transpose the second tensor factor of a density operator on A (x) B."""
    rho = _check_density(np.asarray(rho, dtype=complex), dim_a * dim_b)
    blocks = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    return blocks.transpose(0, 3, 2, 1).reshape(dim_a * dim_b, dim_a * dim_b)


def negativity(rho, dim_a: int, dim_b: int) -> float:
    """Entanglement negativity (||rho^T_B||_1 - 1) / 2; a value above 1e-10
    certifies entanglement (PPT is necessary for separability)."""
    pt = partial_transpose(rho, dim_a, dim_b)
    trace_norm = float(np.sum(np.abs(np.linalg.eigvalsh(pt))))
    return max((trace_norm - 1.0) / 2.0, 0.0)


def fidelity(psi: StateVector, phi: StateVector) -> float:
    """|<psi|phi>|^2."""
    return min(abs(psi.overlap(phi)) ** 2, 1.0)
