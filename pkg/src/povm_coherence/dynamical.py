"""Power functional, dynamical coherence measure and CMIO certification.

The power of a channel ``theta`` over ``lam`` is the maximum over input
states of C(theta[rho]) - C(lam[rho]). The maximization is global but
non-concave, so it is carried out by a brute-force oracle (a full Bloch
grid for qubits, seeded random states otherwise) followed by multistart
Nelder-Mead refinement. Every oracle point stays in the candidate pool, so
the returned value never falls below the oracle.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .coherence import BatchCoherence
from .core import BlochPoint, Channel, DensityMatrix, bloch_matrices
from .errors import DimensionMismatchError, OptimizerError, ValidationError
from .neldermead import minimize_batch

TIE_TOL = 1e-9
_CHUNK = 65536
LOCAL_XATOL = 1e-4


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    local_max_iterations: int = 500
    local_tolerance: float = 1e-8
    grid_resolution: tuple = (61, 61, 61)
    seed: int = 0
    budget_tolerance: float = 1e-4
    oracle_samples: int = 100_000

    def __post_init__(self):
        res = self.grid_resolution
        if isinstance(res, int):
            res = (res, res, res)
            object.__setattr__(self, "grid_resolution", res)
        res = tuple(int(r) for r in res)
        object.__setattr__(self, "grid_resolution", res)
        counts = (self.restarts, self.local_max_iterations, self.oracle_samples, *res)
        if len(res) != 3 or min(counts) < 1:
            raise ValidationError(f"optimizer counts must be >= 1, got {counts}")
        if self.local_tolerance <= 0 or self.budget_tolerance <= 0:
            raise ValidationError("optimizer tolerances must be positive")


@dataclass
class PowerResult:
    value: float
    witness: DensityMatrix
    oracle_value: float
    witness_point: Optional[BlochPoint] = None
    diagnostics: dict = field(default_factory=dict)


@dataclass
class CmioVerdict:
    certified_within_budget: bool
    max_violation_found: float
    witness: Optional[DensityMatrix] = None


def bloch_grid(resolution):
    """Uniform (p, theta, phi) nodes, endpoints included, in lexicographic order."""
    n_p, n_t, n_f = resolution
    axes = (
        np.linspace(0.0, 1.0, n_p),
        np.linspace(0.0, np.pi, n_t),
        np.linspace(0.0, 2 * np.pi, n_f),
    )
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _evaluate_stack(batch_objective, rhos):
    out = np.empty(len(rhos))
    for start in range(0, len(rhos), _CHUNK):
        out[start:start + _CHUNK] = batch_objective(rhos[start:start + _CHUNK])
    bad = ~np.isfinite(out)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise OptimizerError(f"objective returned non-finite value {out[i]}", state=rhos[i])
    return out


def _batch_from_scalar(objective):
    return lambda rhos: np.array([float(objective(r)) for r in rhos])


def _local_searches(batch_objective, to_states, seeds, step, bounds, cfg):
    """Run one simplex search per seed, all in lockstep; maximizes."""

    def neg(x):
        return -_evaluate_stack(batch_objective, to_states(x))

    res = minimize_batch(
        neg,
        np.asarray(seeds),
        step,
        bounds,
        maxiter=cfg.local_max_iterations,
        fatol=cfg.local_tolerance,
        xatol=LOCAL_XATOL,
    )
    return res.x, -res.fun, res


def _bloch_stack(x):
    return bloch_matrices(x[:, 0], x[:, 1], x[:, 2])


def _maximize_qubit(batch_objective, cfg):
    points = bloch_grid(cfg.grid_resolution)
    values = _evaluate_stack(batch_objective, _bloch_stack(points))
    oracle_value = float(values.max())

    # best grid cells first, ties in grid (lexicographic) order
    order = np.lexsort((np.arange(len(values)), -values))
    n_grid_seeds = (cfg.restarts + 1) // 2
    rng = np.random.default_rng(cfg.seed)
    upper = np.array([1.0, np.pi, 2 * np.pi])
    seeds = np.concatenate([
        points[order[:n_grid_seeds]],
        rng.uniform(size=(cfg.restarts - n_grid_seeds, 3)) * upper,
    ])
    bounds = [(0.0, 1.0), (0.0, np.pi), (0.0, 2 * np.pi)]
    spacing = upper / np.maximum(np.array(cfg.grid_resolution) - 1, 1)
    local_x, local_vals, res = _local_searches(
        batch_objective, _bloch_stack, seeds, 0.5 * spacing, bounds, cfg
    )

    pts = np.concatenate([points, local_x])
    vals = np.concatenate([values, local_vals])
    best = float(vals.max())
    near = np.flatnonzero(vals >= best - TIE_TOL)
    # smallest (p, theta, phi) among near-optimal candidates
    pick = near[np.lexsort(pts[near].T[::-1])[0]]
    p, t, f = (float(c) for c in pts[pick])
    diagnostics = dict(
        restarts=len(seeds),
        converged=res.converged.tolist(),
        local_evaluations=int(res.nfev),
        grid_points=len(points),
    )
    witness = DensityMatrix(bloch_matrices(p, t, f))
    return best, witness, oracle_value, BlochPoint(p, t, f), diagnostics


def _params_to_states(x, dim):
    x = np.atleast_2d(x)
    k = dim * dim
    g = (x[:, :k] + 1j * x[:, k:]).reshape(-1, dim, dim)
    m = g @ np.conj(np.swapaxes(g, -1, -2))
    return m / np.trace(m, axis1=-2, axis2=-1).real[:, None, None]


def _maximize_general(batch_objective, dim, cfg):
    rng = np.random.default_rng(cfg.seed)
    g = rng.standard_normal((cfg.oracle_samples, 2 * dim * dim))
    rhos = _params_to_states(g, dim)
    values = _evaluate_stack(batch_objective, rhos)
    oracle_value = float(values.max())

    order = np.lexsort((np.arange(len(values)), -values))
    n_sample_seeds = (cfg.restarts + 1) // 2
    seeds = np.concatenate([
        g[order[:n_sample_seeds]],
        rng.standard_normal((cfg.restarts - n_sample_seeds, 2 * dim * dim)),
    ])
    local_x, local_vals, res = _local_searches(
        batch_objective, lambda x: _params_to_states(x, dim), seeds, 0.1, None, cfg
    )
    # candidates in order: oracle samples, then local results; first within the tie window wins
    vals = np.concatenate([values, local_vals])
    best = float(vals.max())
    pick = int(np.flatnonzero(vals >= best - TIE_TOL)[0])
    witness_matrix = rhos[pick] if pick < len(rhos) else _params_to_states(local_x[pick - len(rhos)], dim)[0]
    diagnostics = dict(
        restarts=len(seeds),
        converged=res.converged.tolist(),
        local_evaluations=int(res.nfev),
        oracle_samples=len(rhos),
    )
    return best, DensityMatrix(witness_matrix), oracle_value, None, diagnostics


def maximize_over_states(objective, dim, cfg=None, batch_objective=None):
    """Globally maximize ``objective`` over density matrices of dimension ``dim``.

    ``objective`` maps a (dim, dim) complex array to a float. The optional
    ``batch_objective`` maps a stack (N, dim, dim) to N floats; when given it
    is used for every evaluation, otherwise ``objective`` is looped over.

    Returns ``(value, witness, oracle_value, witness_point, diagnostics)``;
    ``witness_point`` is a :class:`BlochPoint` for qubits and ``None``
    otherwise.
    """
    cfg = cfg or OptimizerConfig()
    if batch_objective is None:
        batch_objective = _batch_from_scalar(objective)
    if dim == 2:
        return _maximize_qubit(batch_objective, cfg)
    return _maximize_general(batch_objective, dim, cfg)


def _check_power_dims(theta, lam, povm):
    if not theta.dim == lam.dim == povm.dim:
        raise DimensionMismatchError(
            f"channel dimensions {theta.dim}, {lam.dim} and POVM dimension {povm.dim} differ"
        )


def power(theta, lam, povm, cfg=None):
    """Maximum over states of C(theta[rho]) - C(lam[rho]); may be negative."""
    _check_power_dims(theta, lam, povm)
    coh = BatchCoherence(povm)

    def batch(rhos):
        return coh(theta.apply_array(rhos)) - coh(lam.apply_array(rhos))

    value, witness, oracle, point, diag = maximize_over_states(None, povm.dim, cfg, batch)
    return PowerResult(value, witness, oracle, point, diag)


def dynamical_coherence(theta, povm, cfg=None):
    """Dynamical coherence of ``theta``: its power over the identity, clipped at 0.

    The infimum over all measure-induced incoherent operations collapses to
    this single evaluation, so no search over the second argument happens.
    """
    return max(power(theta, Channel.identity(theta.dim), povm, cfg).value, 0.0)


def verdict_from_power(result, cfg=None):
    cfg = cfg or OptimizerConfig()
    violation = max(result.value, 0.0)
    certified = violation <= cfg.budget_tolerance
    return CmioVerdict(certified, violation, None if violation == 0.0 else result.witness)


def certify_cmio(lam, povm, cfg=None):
    """Budget-relative check that ``lam`` never increases C_E; not a proof."""
    cfg = cfg or OptimizerConfig()
    return verdict_from_power(power(lam, Channel.identity(lam.dim), povm, cfg), cfg)
