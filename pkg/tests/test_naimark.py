from dataclasses import replace

import numpy as np
import pytest

from povm_coherence.coherence import block_relative_entropy_coherence, povm_relative_entropy_coherence
from povm_coherence.core import DensityMatrix, Povm
from povm_coherence.errors import DimensionMismatchError
from povm_coherence.naimark import canonical_extension, embed_state, isometry, verify_extension
from povm_coherence.sampling import random_density_matrices, random_povm


def test_projective_povm_extension_exact():
    basis = Povm.computational_basis(2)
    ext = canonical_extension(basis)
    assert ext.dim == 4 and ext.embedding_ancilla_index == 0
    ext.measurement  # validates idempotence, orthogonality, completeness
    assert verify_extension(basis, ext, 200) < 1e-12


def test_four_outcome_povm_extension(povm):
    ext = canonical_extension(povm)
    assert ext.dim == 8
    assert verify_extension(povm, ext, 200) < 1e-9
    # marginal against <phi_k|rho|phi_k>/2 written out directly
    phis = np.array([[1, 1j**k] for k in range(4)]) / np.sqrt(2)
    idx = np.arange(2) * 4
    for rho in random_density_matrices(2, 200, 3):
        dilated = [np.trace(p[np.ix_(idx, idx)] @ rho).real for p in ext.projectors]
        direct = [np.vdot(v, rho @ v).real / 2 for v in phis]
        assert np.max(np.abs(np.subtract(dilated, direct))) < 1e-9


def test_isometry_columns_orthonormal():
    for seed in range(10):
        e = random_povm(3, 4, seed)
        v = isometry(e)
        assert np.max(np.abs(v.conj().T @ v - np.eye(3))) < 1e-10


def test_extension_unitary_embeds_isometry():
    e = random_povm(2, 3, 0)
    ext = canonical_extension(e)
    u = ext.unitary
    assert np.max(np.abs(u.conj().T @ u - np.eye(6))) < 1e-10
    assert np.allclose(u[:, [0, 3]], isometry(e))


def test_corrupted_projector_is_reported(povm):
    ext = canonical_extension(povm)
    bad = np.array(ext.projectors)
    bad[0] = np.roll(bad[0], 1, axis=0)
    dev = verify_extension(povm, replace(ext, projectors=bad), 50)
    assert dev > 1e-3


def test_embed_state():
    ext = canonical_extension(Povm.computational_basis(2))
    out = embed_state(np.diag([1.0, 0.0]), ext).matrix
    expected = np.zeros((4, 4))
    expected[0, 0] = 1
    assert np.array_equal(out.real, expected)
    assert np.allclose(embed_state(np.eye(2) / 2, ext).matrix, np.diag([0.5, 0, 0.5, 0]))
    rho = random_density_matrices(2, 1, 8)[0]
    big = embed_state(rho, ext).matrix
    assert abs(np.trace(big) - 1) < 1e-12
    eig = np.sort(np.linalg.eigvalsh(big))
    assert np.allclose(eig[-2:], np.linalg.eigvalsh(rho)) and np.allclose(eig[:2], 0)
    with pytest.raises(DimensionMismatchError):
        embed_state(np.eye(3) / 3, ext)


def test_naimark_value_independence():
    # coherence via block coherence of embedded states equals the direct formula
    for seed in range(10):
        d, n = (2, 3) if seed % 2 else (3, 3)
        e = random_povm(d, n, seed, rank=1 + seed % d)
        ext = canonical_extension(e)
        meas = ext.measurement
        for rho in random_density_matrices(d, 10, 100 + seed):
            via_block = block_relative_entropy_coherence(embed_state(rho, ext), meas)
            direct = povm_relative_entropy_coherence(DensityMatrix(rho), e)
            assert abs(via_block - direct) < 1e-9


def test_random_povm_rejects_unreachable_rank():
    from povm_coherence.errors import ValidationError
    with pytest.raises(ValidationError):
        random_povm(3, 2, 0, rank=1)
