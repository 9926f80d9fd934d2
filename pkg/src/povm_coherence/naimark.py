"""Canonical Naimark dilation of a POVM.

The dilation lives on C^d (system) tensor C^n (ancilla, one level per
outcome), with system-first index ordering ``s * n + a``. States embed as
``rho (x) |0><0|``.
"""
from dataclasses import dataclass

import numpy as np

from .core import DensityMatrix, Povm, ProjectiveMeasurement, as_density_matrix
from .errors import DimensionMismatchError, NumericalInconsistencyError
from .numerics import psd_sqrt
from .sampling import random_density_matrices

PIVOT_TOL = 1e-10


@dataclass(frozen=True)
class NaimarkExtension:
    system_dim: int
    ancilla_dim: int
    projectors: np.ndarray  # (n, d*n, d*n)
    unitary: np.ndarray
    povm: Povm
    embedding_ancilla_index: int = 0

    @property
    def dim(self):
        return self.system_dim * self.ancilla_dim

    @property
    def measurement(self):
        return ProjectiveMeasurement(list(self.projectors))


def isometry(povm):
    """The d*n x d matrix V with V|j> = sum_i sqrt(E_i)|j> (x) |i>."""
    d, n = povm.dim, povm.n_outcomes
    roots = np.stack([psd_sqrt(e) for e in povm.effects])  # (n, d, d)
    v = np.zeros((d, n, d), dtype=complex)
    for i in range(n):
        v[:, i, :] = roots[i]
    return v.reshape(d * n, d)


def _complete_unitary(v, n):
    """Unitary U with U[:, j*n] = V[:, j]; remaining columns by Gram-Schmidt
    over the standard basis in index order."""
    big, d = v.shape
    cols = [v[:, j] for j in range(d)]
    extra = []
    for k in range(big):
        if len(cols) + len(extra) == big:
            break
        cand = np.zeros(big, dtype=complex)
        cand[k] = 1.0
        for basis in (cols, extra):
            for b in basis:
                cand = cand - np.vdot(b, cand) * b
        # second pass for numerical orthogonality
        for basis in (cols, extra):
            for b in basis:
                cand = cand - np.vdot(b, cand) * b
        nrm = np.linalg.norm(cand)
        if nrm < PIVOT_TOL:
            continue
        extra.append(cand / nrm)
    u = np.zeros((big, big), dtype=complex)
    fixed = [j * n for j in range(d)]
    free = [c for c in range(big) if c not in set(fixed)]
    for j, c in enumerate(fixed):
        u[:, c] = cols[j]
    for c, vec in zip(free, extra):
        u[:, c] = vec
    return u


def canonical_extension(povm):
    d, n = povm.dim, povm.n_outcomes
    v = isometry(povm)
    gram_err = float(np.max(np.abs(v.conj().T @ v - np.eye(d))))
    if gram_err > PIVOT_TOL:
        raise NumericalInconsistencyError(
            f"isometry columns are not orthonormal (deviation {gram_err:.3e})"
        )
    u = _complete_unitary(v, n)
    projs = []
    for i in range(n):
        anc = np.zeros((n, n))
        anc[i, i] = 1.0
        q = np.kron(np.eye(d), anc)
        p = u.conj().T @ q @ u
        projs.append(0.5 * (p + p.conj().T))
    projs = np.stack(projs)
    projs.setflags(write=False)
    u.setflags(write=False)
    return NaimarkExtension(d, n, projs, u, povm)


def embed_matrix(rho, ancilla_dim):
    anc = np.zeros((ancilla_dim, ancilla_dim))
    anc[0, 0] = 1.0
    return np.kron(rho, anc)


def embed_state(rho, ext):
    rho = as_density_matrix(rho)
    if rho.dim != ext.system_dim:
        raise DimensionMismatchError(
            f"state dimension {rho.dim} does not match extension system dimension {ext.system_dim}"
        )
    return DensityMatrix(embed_matrix(rho.matrix, ext.ancilla_dim))


def verify_extension(povm, ext, samples=200, seed=0):
    """Largest |tr(P_i (rho (x) |0><0|)) - tr(E_i rho)| over random states."""
    if povm.dim != ext.system_dim or povm.n_outcomes != len(ext.projectors):
        raise DimensionMismatchError("POVM and extension shapes differ")
    rhos = random_density_matrices(povm.dim, samples, seed)
    n = ext.ancilla_dim
    # rho (x) |0><0| is supported on indices s*n
    idx = np.arange(povm.dim) * n
    sub = np.asarray(ext.projectors)[:, idx[:, None], idx[None, :]]  # (k, d, d)
    dilated = np.einsum("kij,sji->sk", sub, rhos).real
    direct = np.einsum("kij,sji->sk", povm.stacked(), rhos).real
    return float(np.max(np.abs(dilated - direct)))
