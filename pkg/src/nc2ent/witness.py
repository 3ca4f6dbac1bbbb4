"""Witness machinery: projector-style entanglement witnesses on the bipartite
output space, their pull-back through a conversion unitary, and the
restriction to the reference subspace that turns them into single-system
non-classicality witnesses."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conversion import Conversion
from .linalg import StateVector, schmidt_decompose

HERMITIAN_TOL = 1e-12
DETECT_TOL = 1e-10


@dataclass(frozen=True)
class Witness:
    """Hermitian observable that is non-negative on every product (resp.
    classical) state and negative on at least one state it detects."""

    operator: np.ndarray
    label: str = ""

    def __post_init__(self):
        op = np.array(np.asarray(self.operator, dtype=complex))
        if op.ndim != 2 or op.shape[0] != op.shape[1]:
            raise ValueError(f"witness operator must be square, got shape {op.shape}")
        if np.max(np.abs(op - op.conj().T)) > HERMITIAN_TOL:
            raise ValueError("witness operator is not Hermitian within tolerance")
        op.setflags(write=False)
        object.__setattr__(self, "operator", op)

    @property
    def dim(self) -> int:
        return self.operator.shape[0]


def swap_style_witness(dim_a: int, dim_b: int, phi: StateVector) -> Witness:
    """Projector witness W = lambda_1^2 I - |phi><phi| built from a bipartite
    target state phi with largest Schmidt coefficient lambda_1; non-negative
    on all product states because no product state overlaps phi by more than
    lambda_1."""
    if phi.dim != dim_a * dim_b:
        raise ValueError(f"phi has dimension {phi.dim}, expected {dim_a * dim_b}")
    lam1 = float(schmidt_decompose(phi, dim_a, dim_b).coefficients[0])
    op = lam1**2 * np.eye(phi.dim, dtype=complex) - phi.projector()
    return Witness(operator=op, label=f"projector witness (lambda1^2 = {lam1**2:.6g})")


def pull_back(w: Witness, conv: Conversion) -> np.ndarray:
    """Conjugate a witness on the output space back through the conversion:
    W' = Lambda^dag W Lambda, acting on the embedded input (x) reference space."""
    u = conv.unitary.matrix
    if w.dim != u.shape[0]:
        raise ValueError(f"witness dimension {w.dim} does not match conversion dimension {u.shape[0]}")
    return u.conj().T @ w.operator @ u


def restrict_to_reference(w_pulled: np.ndarray, reference: StateVector) -> Witness:
    """Compress the pulled-back witness onto the reference slot of the
    ancilla: (1 (x) <ref|) W' (1 (x) |ref>), leaving an observable on the
    input space alone."""
    w_pulled = np.asarray(w_pulled, dtype=complex)
    total = w_pulled.shape[0]
    d_ref = reference.dim
    if w_pulled.ndim != 2 or w_pulled.shape[0] != w_pulled.shape[1] or total % d_ref:
        raise ValueError(
            f"operator of shape {w_pulled.shape} is incompatible with reference dimension {d_ref}"
        )
    d_in = total // d_ref
    blocks = w_pulled.reshape(d_in, d_ref, d_in, d_ref)
    ref = reference.amplitudes
    restricted = np.einsum("a,iajb,b->ij", ref.conj(), blocks, ref)
    restricted = 0.5 * (restricted + restricted.conj().T)  # scrub roundoff asymmetry
    return Witness(operator=restricted, label="restricted non-classicality witness")


def detect(w: Witness, rho: np.ndarray) -> tuple[float, bool]:
    """Expectation value Tr(W rho) and whether it certifies detection
    (value below -1e-10)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != w.operator.shape:
        raise ValueError(f"shape mismatch: witness {w.operator.shape} vs state {rho.shape}")
    value = float(np.real(np.trace(w.operator @ rho)))
    return value, value < -DETECT_TOL


def nonclassicality_witness(w: Witness, conv: Conversion) -> Witness:
    """Full pipeline W -> W' -> restricted witness on the input space."""
    return restrict_to_reference(pull_back(w, conv), conv.reference)
