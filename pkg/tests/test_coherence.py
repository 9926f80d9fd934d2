import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from povm_coherence.coherence import (
    BatchCoherence,
    block_relative_entropy_coherence,
    measurement_operators,
    povm_dephasing_residual,
    povm_relative_entropy_coherence,
    standard_relative_entropy_coherence,
)
from povm_coherence.core import BlochPoint, DensityMatrix, Povm, ProjectiveMeasurement, bloch_matrices
from povm_coherence.naimark import canonical_extension, embed_state
from povm_coherence.numerics import shannon_entropy, von_neumann_entropy
from povm_coherence.sampling import random_density_matrices, random_povm, random_unitary

ZERO = np.diag([1.0, 0.0])
PLUS = np.full((2, 2), 0.5)


@pytest.mark.parametrize("rho, expected", [(ZERO, 2.0), (PLUS, 1.5), (np.eye(2) / 2, 1.0)])
def test_worked_example_values(povm, rho, expected):
    assert abs(povm_relative_entropy_coherence(rho, povm) - expected) < 1e-9


def test_reduces_to_outcome_entropy_minus_state_entropy(povm):
    # rank-one effects: every post-measurement state is pure
    for rho in random_density_matrices(2, 50, 2):
        p = np.einsum("kij,ji->k", povm.stacked(), rho).real
        expected = shannon_entropy(p) - von_neumann_entropy(rho)
        assert abs(povm_relative_entropy_coherence(rho, povm) - expected) < 1e-9


def test_diagonal_state_basis_povm_is_zero():
    for a in np.linspace(0, 1, 11):
        assert povm_relative_entropy_coherence(np.diag([a, 1 - a]), Povm.computational_basis(2)) < 1e-12


def test_standard_coherence():
    assert abs(standard_relative_entropy_coherence(PLUS) - 1) < 1e-12
    assert standard_relative_entropy_coherence(np.diag([0.2, 0.3, 0.5])) < 1e-12
    basis = Povm.computational_basis(3)
    for rho in random_density_matrices(3, 20, 5):
        a = standard_relative_entropy_coherence(rho)
        b = povm_relative_entropy_coherence(rho, basis)
        assert abs(a - b) < 1e-12
        # independent route: S(diag rho) - S(rho)
        c = shannon_entropy(np.diag(rho).real) - von_neumann_entropy(rho)
        assert abs(a - c) < 1e-9


def test_block_coherence_fixed_point_and_extremes(povm):
    meas = ProjectiveMeasurement([np.diag([1, 1, 0]), np.diag([0, 0, 1])])
    sigma = np.zeros((3, 3), dtype=complex)
    sigma[:2, :2] = PLUS
    sigma = 0.6 * sigma
    sigma[2, 2] = 0.4
    assert block_relative_entropy_coherence(sigma, meas) < 1e-12
    ext = canonical_extension(povm)
    big = embed_state(ZERO, ext)
    assert abs(block_relative_entropy_coherence(big, ext.measurement) - 2) < 1e-9


def test_block_route_matches_direct_route():
    for seed in range(100):
        e = random_povm(2, 2 + seed % 3, seed)
        ext = canonical_extension(e)
        rho = random_density_matrices(2, 1, 1000 + seed)[0]
        block = block_relative_entropy_coherence(embed_state(rho, ext), ext.measurement)
        assert block >= 0
        assert abs(block - povm_relative_entropy_coherence(rho, e)) < 1e-9


def test_batch_route_matches_scalar_route():
    for seed in range(5):
        e = random_povm(3, 4, seed, rank=2)
        rhos = random_density_matrices(3, 40, seed)
        batch = BatchCoherence(e)(rhos)
        scalar = [povm_relative_entropy_coherence(r, e) for r in rhos]
        assert np.max(np.abs(batch - scalar)) < 1e-9


def test_nonnegative_on_random_pairs():
    for seed in range(1000):
        d = 2 + seed % 3
        e = random_povm(d, 2 + seed % 4, seed, rank=max(1 + seed % d, -(-d // (2 + seed % 4))))
        rho = random_density_matrices(d, 1, seed)[0]
        assert povm_relative_entropy_coherence(rho, e) >= 0.0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_convexity(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 4))
    e = random_povm(d, int(rng.integers(2, 5)), rng)
    r1, r2 = random_density_matrices(d, 2, rng)
    c1 = povm_relative_entropy_coherence(r1, e)
    c2 = povm_relative_entropy_coherence(r2, e)
    for t in np.linspace(0, 1, 11):
        mixed = povm_relative_entropy_coherence(t * r1 + (1 - t) * r2, e)
        assert mixed <= t * c1 + (1 - t) * c2 + 1e-9


def test_gauge_invariance():
    for seed in range(20):
        e = random_povm(3, 3, seed)
        ops = measurement_operators(e)
        rotated = [random_unitary(3, 50 + seed + 7 * i) @ a for i, a in enumerate(ops)]
        for rho in random_density_matrices(3, 5, seed):
            a = povm_relative_entropy_coherence(rho, e)
            b = povm_relative_entropy_coherence(rho, e, operators=rotated)
            assert abs(a - b) < 1e-9


def test_dephasing_residual_examples(povm):
    assert povm_dephasing_residual(np.diag([0.3, 0.7]), Povm.computational_basis(2)) < 1e-12
    # sum_k |<phi_k|phi_0>|^2 |phi_k><phi_k| - |phi_0><phi_0| = I/2, Frobenius norm sqrt(2)/2
    phi0 = np.array([1, 1]) / np.sqrt(2)
    assert abs(povm_dephasing_residual(np.outer(phi0, phi0), povm) - np.sqrt(2) / 2) < 1e-12


def test_no_incoherent_state_for_four_outcome_povm(povm):
    # brute grid of about 10^4 qubit states
    n = 22
    p, t, f = np.meshgrid(np.linspace(0, 1, n), np.linspace(0, np.pi, n),
                          np.linspace(0, 2 * np.pi, n), indexing="ij")
    rhos = bloch_matrices(p.ravel(), t.ravel(), f.ravel())
    residuals = np.array([povm_dephasing_residual(r, povm) for r in rhos])
    assert residuals.min() > 0.01
    # closed form in terms of the Bloch z component: sqrt((1 + z^2) / 2)
    z = np.einsum("sii,i->s", rhos, [1, -1]).real
    assert np.max(np.abs(residuals - np.sqrt((1 + z**2) / 2))) < 1e-9


def test_residual_zero_iff_coherence_zero():
    rng = np.random.default_rng(3)
    meas = [np.diag([1, 1, 0, 0]), np.diag([0, 0, 1, 0]), np.diag([0, 0, 0, 1])]
    e = Povm(meas)
    for k in range(200):
        rho = random_density_matrices(4, 1, rng)[0]
        if k % 2:
            rho = sum(p @ rho @ p for p in meas)
        res = povm_dephasing_residual(rho, e)
        coh = povm_relative_entropy_coherence(rho, e)
        if res < 1e-9:
            assert coh < 1e-6
        if coh < 1e-6:
            assert res < 1e-3
        assert (res < 1e-9) == (k % 2 == 1)
