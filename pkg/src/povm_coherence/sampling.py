"""Seeded random states, unitaries, POVMs and channels for tests and demos."""
import numpy as np

from .core import Channel, DensityMatrix, Povm
from .errors import ValidationError
from .numerics import psd_sqrt


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def ginibre(dim, rng, cols=None):
    cols = dim if cols is None else cols
    return rng.standard_normal((dim, cols)) + 1j * rng.standard_normal((dim, cols))


def random_density_matrices(dim, count, seed=None):
    """Stack of ``count`` states G G^dag / tr(G G^dag) with complex Gaussian G."""
    rng = _rng(seed)
    g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
    m = g @ np.conj(np.swapaxes(g, -1, -2))
    return m / np.trace(m, axis1=-2, axis2=-1).real[:, None, None]


def random_density_matrix(dim, seed=None, rank=None):
    rng = _rng(seed)
    g = ginibre(dim, rng, rank)
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_unitary(dim, seed=None):
    """Haar unitary from the QR decomposition of a complex Gaussian matrix."""
    rng = _rng(seed)
    q, r = np.linalg.qr(ginibre(dim, rng))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_povm(dim, n_outcomes, seed=None, rank=None):
    if rank is not None and rank * n_outcomes < dim:
        raise ValidationError(f"{n_outcomes} effects of rank {rank} cannot sum to the identity in dimension {dim}")
    rng = _rng(seed)
    gs = [ginibre(dim, rng, rank) for _ in range(n_outcomes)]
    parts = [g @ g.conj().T for g in gs]
    inv_root = np.linalg.inv(psd_sqrt(sum(parts)))
    return Povm([inv_root @ p @ inv_root for p in parts])


def random_mixed_unitary(dim, n_terms, seed=None):
    """Mixed-unitary channel with weights from normalized uniform draws."""
    rng = _rng(seed)
    w = rng.uniform(size=n_terms)
    w = w / w.sum()
    return Channel.mixed_unitary((wi, random_unitary(dim, rng)) for wi in w)
