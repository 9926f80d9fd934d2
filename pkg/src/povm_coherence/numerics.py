"""Dense complex linear algebra and entropy primitives.

All logarithms are base 2, so entropies and coherence values are in bits.
"""
from dataclasses import dataclass

import numpy as np

from .errors import NotPSDError, ValidationError

HERMITIAN_TOL = 1e-9
PSD_CLAMP = 1e-10
ZERO_PROB = 1e-12
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class EigDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m):
    """Return ``m`` as a finite 2-D complex array (accepts objects with a ``.matrix``)."""
    m = getattr(m, "matrix", m)
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise ValidationError(f"expected a matrix, got array with shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("matrix has non-finite entries")
    return arr


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def hermiticity_error(m):
    return float(np.max(np.abs(m - dagger(m)), initial=0.0))


def check_hermitian(m, tol=HERMITIAN_TOL, name="matrix"):
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")
    err = hermiticity_error(m)
    if err > tol:
        raise ValidationError(f"{name} is not Hermitian: max|M - M^dag| = {err:.3e} > {tol:.0e}")


def _normalize_phase(vecs):
    # first component above threshold made real positive
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        idx = np.flatnonzero(np.abs(col) > 1e-10)
        if idx.size:
            c = col[idx[0]]
            out[:, j] = col * (abs(c) / c)
    return out


def _column_key(col):
    idx = np.flatnonzero(np.abs(col) > 1e-10)
    first = int(idx[0]) if idx.size else col.size
    rest = tuple(x for z in col for x in (round(z.real, 12), round(z.imag, 12)))
    return (first, *(-x for x in rest))


def hermitian_eigendecomposition(m):
    """Eigendecomposition of a Hermitian matrix with deterministic output.

    Eigenvalues ascend. Columns are phase-fixed so that their first nonzero
    component is real and positive; inside a degenerate cluster (spread
    below 1e-12) columns are ordered by the position of their first nonzero
    component, larger leading entries first.
    """
    m = as_matrix(m)
    check_hermitian(m)
    h = 0.5 * (m + m.conj().T)
    vals, vecs = np.linalg.eigh(h)
    vecs = _normalize_phase(vecs)
    order = list(range(len(vals)))
    i = 0
    while i < len(vals):
        j = i + 1
        while j < len(vals) and vals[j] - vals[i] <= DEGENERACY_TOL:
            j += 1
        if j - i > 1:
            block = sorted(range(i, j), key=lambda k: _column_key(vecs[:, k]))
            order[i:j] = block
        i = j
    return EigDecomposition(eigenvalues=vals[order].copy(), eigenvectors=vecs[:, order].copy())


def _clamped_spectrum(m, name="matrix"):
    vals = np.linalg.eigvalsh(0.5 * (m + dagger(m)))
    if np.any(vals < -PSD_CLAMP):
        raise NotPSDError(f"{name} has eigenvalue {vals.min():.3e} < -{PSD_CLAMP:.0e}")
    return np.clip(vals, 0.0, None)


def psd_sqrt(m):
    """Hermitian PSD square root; eigenvalues in [-1e-10, 0) are clamped to 0."""
    m = as_matrix(m)
    check_hermitian(m)
    vals, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    if np.any(vals < -PSD_CLAMP):
        raise NotPSDError(f"matrix has eigenvalue {vals.min():.3e} < -{PSD_CLAMP:.0e}")
    root = np.sqrt(np.clip(vals, 0.0, None))
    out = (vecs * root) @ vecs.conj().T
    return 0.5 * (out + out.conj().T)


def entropy_from_values(values):
    """-sum x log2 x over the entries of ``values`` with 0 log 0 = 0 (last axis)."""
    x = np.asarray(values, dtype=float)
    x = np.where(x < ZERO_PROB, 0.0, x)
    safe = np.where(x > 0.0, x, 1.0)
    return -np.sum(x * np.log2(safe), axis=-1)


def von_neumann_entropy(rho):
    """Von Neumann entropy in bits."""
    m = as_matrix(rho)
    check_hermitian(m, name="density matrix")
    vals = _clamped_spectrum(m, "density matrix")
    trace = vals.sum()
    if abs(trace - 1.0) > HERMITIAN_TOL:
        raise ValidationError(f"density matrix trace {trace:.12g} differs from 1")
    return float(max(entropy_from_values(vals), 0.0))


def shannon_entropy(p):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValidationError("probability vector must be one-dimensional and non-empty")
    if np.any(p < -ZERO_PROB):
        raise ValidationError(f"probability {p.min():.3e} is negative")
    total = p.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"probabilities sum to {total:.12g}, not 1 within 1e-9")
    return float(max(entropy_from_values(np.clip(p, 0.0, None)), 0.0))


def eigvalsh_batch(m):
    """Eigenvalues of a stack of Hermitian matrices, shape (..., d, d) -> (..., d).

    2x2 blocks use the closed form, which is several times faster than LAPACK
    for large stacks.
    """
    m = np.asarray(m)
    if m.shape[-1] == 2:
        a = m[..., 0, 0].real
        d = m[..., 1, 1].real
        b = m[..., 0, 1]
        half_tr = 0.5 * (a + d)
        disc = np.sqrt(0.25 * (a - d) ** 2 + (b.real**2 + b.imag**2))
        return np.stack([half_tr - disc, half_tr + disc], axis=-1)
    return np.linalg.eigvalsh(m)
