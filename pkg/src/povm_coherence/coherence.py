"""Relative-entropy coherence with respect to projective measurements and POVMs."""
import numpy as np

from .core import (
    DensityMatrix,
    Povm,
    as_density_matrix,
    outcome_probabilities,
    post_measurement_state,
)
from .errors import DimensionMismatchError, NumericalInconsistencyError
from .numerics import (
    ZERO_PROB,
    eigvalsh_batch,
    entropy_from_values,
    psd_sqrt,
    shannon_entropy,
    von_neumann_entropy,
)

NEGATIVE_WINDOW = 1e-9
RANGE_TOL = 1e-9


def _clamp(value):
    if value < -NEGATIVE_WINDOW:
        raise NumericalInconsistencyError(f"computed coherence {value:.3e} is negative")
    return max(float(value), 0.0)


def block_dephase(sigma, projectors):
    return sum(p @ sigma @ p for p in projectors)


def block_relative_entropy_coherence(sigma, measurement):
    """S(sum_i P_i sigma P_i) - S(sigma): relative entropy to the nearest block-incoherent state."""
    sigma = as_density_matrix(sigma)
    if sigma.dim != measurement.dim:
        raise DimensionMismatchError(f"state dim {sigma.dim} vs measurement dim {measurement.dim}")
    dephased = block_dephase(sigma.matrix, measurement.projectors)
    return _clamp(von_neumann_entropy(dephased) - von_neumann_entropy(sigma))


def measurement_operators(povm):
    """Canonical Kraus operators A_i = sqrt(E_i)."""
    return [psd_sqrt(e) for e in povm.effects]


def povm_relative_entropy_coherence(rho, povm, operators=None):
    """H[{p_i}] + sum_i p_i S(rho_i) - S(rho).

    ``operators`` overrides the measurement operators; any A_i with
    A_i^dag A_i = E_i gives the same value.
    """
    rho = as_density_matrix(rho)
    if rho.dim != povm.dim:
        raise DimensionMismatchError(f"state dim {rho.dim} vs POVM dim {povm.dim}")
    probs = outcome_probabilities(povm, rho)
    ops = measurement_operators(povm) if operators is None else operators
    conditional = 0.0
    for p, a in zip(probs, ops):
        if p <= ZERO_PROB:
            continue
        conditional += p * von_neumann_entropy(post_measurement_state(a, rho, p))
    return _clamp(shannon_entropy(probs) + conditional - von_neumann_entropy(rho))


def standard_relative_entropy_coherence(rho):
    rho = as_density_matrix(rho)
    return povm_relative_entropy_coherence(rho, Povm.computational_basis(rho.dim))


def range_projector(effect, tol=RANGE_TOL):
    vals, vecs = np.linalg.eigh(effect)
    keep = vecs[:, vals > tol]
    return keep @ keep.conj().T


def povm_dephasing_residual(sigma, povm):
    """Frobenius norm of sum_i Pbar_i sigma Pbar_i - sigma, Pbar_i the range projector of E_i.

    Zero exactly when sigma has vanishing POVM-based coherence.
    """
    sigma = as_density_matrix(sigma)
    if sigma.dim != povm.dim:
        raise DimensionMismatchError(f"state dim {sigma.dim} vs POVM dim {povm.dim}")
    bars = [range_projector(e) for e in povm.effects]
    diff = block_dephase(sigma.matrix, bars) - sigma.matrix
    return float(np.linalg.norm(diff))


class BatchCoherence:
    """Vectorized POVM coherence over stacks of raw density matrices.

    Uses H[{p_i}] + sum_i p_i S(rho_i) = S(spectrum of all A_i rho A_i^dag),
    so no conditioning on small outcome probabilities is needed. Inputs are
    not validated; callers are expected to pass genuine states.
    """

    def __init__(self, povm):
        self.povm = povm
        self.roots = np.stack(measurement_operators(povm))
        self.roots_dag = np.conj(np.swapaxes(self.roots, -1, -2))

    def __call__(self, rhos):
        rhos = np.asarray(rhos)
        single = rhos.ndim == 2
        if single:
            rhos = rhos[None]
        post = self.roots @ rhos[:, None] @ self.roots_dag  # (N, n, d, d)
        mu = eigvalsh_batch(post).reshape(len(rhos), -1)
        lam = eigvalsh_batch(rhos)
        values = entropy_from_values(mu) - entropy_from_values(lam)
        low = values.min(initial=0.0)
        if low < -NEGATIVE_WINDOW:
            raise NumericalInconsistencyError(f"computed coherence {low:.3e} is negative")
        values = np.maximum(values, 0.0)
        return float(values[0]) if single else values
