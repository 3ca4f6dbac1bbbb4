import math

import numpy as np
import pytest

from nc2ent.linalg import (
    GramMatrix,
    GramMismatchError,
    StateVector,
    basis_state,
    entanglement_entropy,
    factor_gram,
    fidelity,
    gram_of,
    hadamard,
    negativity,
    partial_transpose,
    random_state,
    schmidt_decompose,
    synthesize_unitary,
)


def bell_state() -> StateVector:
    return StateVector(np.array([1, 0, 0, 1]) / math.sqrt(2))


# ---------------------------------------------------------------- StateVector

def test_state_vector_rejects_unnormalized():
    with pytest.raises(ValueError):
        StateVector([1.0, 1.0])


def test_normalized_constructor():
    s = StateVector.normalized([3.0, 4.0])
    assert np.allclose(s.amplitudes, [0.6, 0.8])
    with pytest.raises(ValueError):
        StateVector.normalized([0.0, 0.0])


def test_state_vector_is_immutable():
    s = basis_state(3, 0)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0.0


# -------------------------------------------------------------------- gram_of

def test_gram_of_orthonormal_basis_is_identity():
    g = gram_of([basis_state(2, 0), basis_state(2, 1)])
    assert np.allclose(g.entries, np.eye(2))


def test_gram_of_tilted_pair_off_diagonal_is_cos_theta():
    theta = 1.1
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    g = gram_of([StateVector([c, s]), StateVector([c, -s])])
    assert abs(g.entries[0, 1] - math.cos(theta)) < 1e-14


def test_gram_of_matches_direct_inner_products():
    # oracle: entrywise vdot, independent of the matrix-product implementation
    rng = np.random.default_rng(42)
    states = [random_state(5, rng) for _ in range(3)]
    g = gram_of(states)
    for i in range(3):
        for j in range(3):
            direct = np.vdot(states[i].amplitudes, states[j].amplitudes)
            assert abs(g.entries[i, j] - direct) < 1e-14


def test_gram_of_dimension_mismatch():
    with pytest.raises(ValueError):
        gram_of([basis_state(2, 0), basis_state(3, 0)])


# ------------------------------------------------------------------- hadamard

def test_hadamard_all_ones_is_identity_element():
    rng = np.random.default_rng(3)
    g = gram_of([random_state(4, rng) for _ in range(3)])
    ones = GramMatrix(np.ones((3, 3)))
    assert np.allclose(hadamard(g, ones).entries, g.entries)


def test_hadamard_with_identity_gram():
    rng = np.random.default_rng(4)
    g = gram_of([random_state(4, rng) for _ in range(3)])
    eye = GramMatrix(np.eye(3))
    assert np.allclose(hadamard(g, eye).entries, np.eye(3))


def test_hadamard_matches_product_state_gram():
    # oracle: build explicit product states and take their Gram directly
    rng = np.random.default_rng(5)
    xs = [random_state(3, rng) for _ in range(4)]
    ys = [random_state(2, rng) for _ in range(4)]
    products = [x.tensor(y) for x, y in zip(xs, ys)]
    expected = gram_of(products)
    combined = hadamard(gram_of(xs), gram_of(ys))
    assert np.max(np.abs(combined.entries - expected.entries)) < 1e-13


def test_hadamard_size_mismatch():
    with pytest.raises(ValueError):
        hadamard(GramMatrix(np.eye(2)), GramMatrix(np.eye(3)))


# ---------------------------------------------------------------- factor_gram

def test_factor_gram_identity():
    vecs = factor_gram(GramMatrix(np.eye(3)))
    assert np.allclose(gram_of(vecs).entries, np.eye(3))


def test_factor_gram_two_by_two_overlap():
    for c in (0.2, 0.5, 0.9):
        g = GramMatrix(np.array([[1.0, c], [c, 1.0]]))
        vecs = factor_gram(g)
        assert abs(vecs[0].overlap(vecs[1]) - c) < 1e-12


def test_factor_gram_rank_one_gives_equal_states():
    g = GramMatrix(np.ones((4, 4)))
    vecs = factor_gram(g)
    for v in vecs[1:]:
        assert abs(abs(vecs[0].overlap(v)) - 1.0) < 1e-12


def test_factor_gram_round_trip_random():
    rng = np.random.default_rng(6)
    for _ in range(20):
        n = int(rng.integers(2, 7))
        states = [random_state(n + 1, rng) for _ in range(n)]
        g = gram_of(states)
        again = gram_of(factor_gram(g))
        assert np.max(np.abs(again.entries - g.entries)) < 1e-10


def test_factor_gram_rejects_non_psd():
    bad = np.array([[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(ValueError):
        GramMatrix(bad)


# --------------------------------------------------------- synthesize_unitary

def test_synthesize_identity_on_standard_basis():
    basis = [basis_state(3, k) for k in range(3)]
    u = synthesize_unitary(basis, basis)
    assert np.allclose(u.matrix, np.eye(3))


def test_synthesize_recovers_known_unitary():
    rng = np.random.default_rng(7)
    z = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    q, _ = np.linalg.qr(z)
    basis = [basis_state(4, k) for k in range(4)]
    targets = [StateVector(q[:, k]) for k in range(4)]
    u = synthesize_unitary(basis, targets)
    assert np.max(np.abs(u.matrix - q)) < 1e-10


def test_synthesize_rejects_unequal_grams():
    a = [basis_state(2, 0), StateVector([0.5, math.sqrt(0.75)])]
    b = [basis_state(2, 0), StateVector([0.6, 0.8])]
    with pytest.raises(GramMismatchError):
        synthesize_unitary(a, b)


def test_synthesize_embeds_into_larger_space():
    rng = np.random.default_rng(8)
    small = [random_state(2, rng) for _ in range(2)]
    iso = np.zeros((5, 2), dtype=complex)
    iso[:2, :] = np.eye(2)
    big = [StateVector(iso @ s.amplitudes) for s in small]
    u = synthesize_unitary(small, big)
    assert u.rows == 5 and u.is_unitary()
    for s, b in zip(small, big):
        padded = np.zeros(5, dtype=complex)
        padded[:2] = s.amplitudes
        assert np.max(np.abs(u.matrix @ padded - b.amplitudes)) < 1e-8


def test_synthesize_property_equal_grams_map_exactly():
    rng = np.random.default_rng(9)
    for _ in range(10):
        n = int(rng.integers(2, 6))
        states = [random_state(n + 2, rng) for _ in range(n)]
        z = rng.standard_normal((n + 2, n + 2)) + 1j * rng.standard_normal((n + 2, n + 2))
        q, _ = np.linalg.qr(z)
        targets = [StateVector(q @ s.amplitudes) for s in states]
        u = synthesize_unitary(states, targets)
        assert np.max(np.abs(u.matrix.conj().T @ u.matrix - np.eye(n + 2))) < 1e-10
        for s, t in zip(states, targets):
            assert np.max(np.abs(u.matrix @ s.amplitudes - t.amplitudes)) < 1e-8


# ---------------------------------------------------------- schmidt_decompose

def test_schmidt_product_state_rank_one():
    rng = np.random.default_rng(10)
    psi = random_state(3, rng).tensor(random_state(4, rng))
    sd = schmidt_decompose(psi, 3, 4)
    assert sd.rank == 1


def test_schmidt_bell_state():
    sd = schmidt_decompose(bell_state(), 2, 2)
    assert sd.rank == 2
    assert np.allclose(sd.coefficients, [1 / math.sqrt(2)] * 2)


def test_schmidt_rank_three_construction():
    # oracle: build sum_j c_j |a_j>|b_j> from locally independent families
    rng = np.random.default_rng(11)
    a = [random_state(4, rng) for _ in range(3)]
    b = [random_state(5, rng) for _ in range(3)]
    coeffs = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    vec = sum(c * np.kron(x.amplitudes, y.amplitudes) for c, x, y in zip(coeffs, a, b))
    psi = StateVector.normalized(vec)
    assert schmidt_decompose(psi, 4, 5).rank == 3


def test_schmidt_reconstruction():
    rng = np.random.default_rng(12)
    for _ in range(10):
        psi = random_state(12, rng)
        sd = schmidt_decompose(psi, 3, 4)
        assert np.max(np.abs(sd.reconstruct() - psi.amplitudes)) < 1e-10


def test_schmidt_dimension_mismatch():
    with pytest.raises(ValueError):
        schmidt_decompose(bell_state(), 3, 2)


# ------------------------------------------------------- entanglement_entropy

def test_entropy_rank_one_is_zero():
    psi = basis_state(2, 0).tensor(basis_state(2, 1))
    assert entanglement_entropy(schmidt_decompose(psi, 2, 2)) == 0.0


def test_entropy_bell_is_exactly_one():
    assert abs(entanglement_entropy(schmidt_decompose(bell_state(), 2, 2)) - 1.0) <= 1e-12


def test_entropy_frozen_value():
    # oracle: direct formula -0.9 log2 0.9 - 0.1 log2 0.1 = 0.46899559358928117
    vec = math.sqrt(0.9) * np.kron([1, 0], [1, 0]) + math.sqrt(0.1) * np.kron([0, 1], [0, 1])
    sd = schmidt_decompose(StateVector(vec), 2, 2)
    assert abs(entanglement_entropy(sd) - 0.46899559358928117) < 1e-12


# --------------------------------------------- partial_transpose / negativity

def test_negativity_product_state_zero():
    rng = np.random.default_rng(13)
    rho = random_state(2, rng).tensor(random_state(3, rng)).projector()
    assert negativity(rho, 2, 3) < 1e-12


def test_negativity_bell_is_half():
    assert abs(negativity(bell_state().projector(), 2, 2) - 0.5) < 1e-12


def test_negativity_mixture_of_products_zero():
    rng = np.random.default_rng(14)
    a, b = random_state(2, rng), random_state(2, rng)
    c, d = random_state(2, rng), random_state(2, rng)
    rho = 0.5 * a.tensor(b).projector() + 0.5 * c.tensor(d).projector()
    assert negativity(rho, 2, 2) < 1e-12


def test_negativity_separable_mixtures_random():
    rng = np.random.default_rng(15)
    for _ in range(100):
        da, db = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        k = int(rng.integers(1, 6))
        weights = rng.random(k)
        weights /= weights.sum()
        rho = sum(w * random_state(da, rng).tensor(random_state(db, rng)).projector()
                  for w in weights)
        assert negativity(rho, da, db) < 1e-12


def test_partial_transpose_involution():
    rng = np.random.default_rng(16)
    rho = random_state(6, rng).projector()
    # partial_transpose validates its input, so apply it twice manually
    pt = partial_transpose(rho, 2, 3)
    blocks = pt.reshape(2, 3, 2, 3).transpose(0, 3, 2, 1).reshape(6, 6)
    assert np.allclose(blocks, rho)


def test_negativity_rejects_invalid_density():
    with pytest.raises(ValueError):
        negativity(np.eye(4), 2, 2)  # trace 4, not a density operator


# ------------------------------------------------------------------- fidelity

def test_fidelity_identical_orthogonal_and_angle():
    theta = 0.7
    assert fidelity(basis_state(2, 0), basis_state(2, 0)) == 1.0
    assert fidelity(basis_state(2, 0), basis_state(2, 1)) == 0.0
    tilted = StateVector([math.cos(theta / 2), math.sin(theta / 2)])
    assert abs(fidelity(basis_state(2, 0), tilted) - math.cos(theta / 2) ** 2) < 1e-14
