import numpy as np
import pytest

from povm_coherence.coherence import povm_relative_entropy_coherence
from povm_coherence.core import Channel, Povm
from povm_coherence.dynamical import (
    OptimizerConfig,
    bloch_grid,
    certify_cmio,
    dynamical_coherence,
    maximize_over_states,
    power,
    verdict_from_power,
)
from povm_coherence.errors import DimensionMismatchError, OptimizerError, ValidationError
from povm_coherence.sampling import random_povm, random_unitary
from povm_coherence.scenarios import depolarize_to_mixed, lambda_mixed

FAST = OptimizerConfig(restarts=8, grid_resolution=(11, 21, 21))


def test_config_validation():
    assert OptimizerConfig(grid_resolution=5).grid_resolution == (5, 5, 5)
    for bad in (dict(restarts=0), dict(budget_tolerance=0.0), dict(grid_resolution=(3, 3))):
        with pytest.raises(ValidationError):
            OptimizerConfig(**bad)


def test_bloch_grid_contains_axis_nodes():
    pts = bloch_grid((3, 5, 5))
    assert pts.shape == (75, 3)
    assert np.allclose(pts[-1], [1, np.pi, 2 * np.pi])
    assert np.all(np.diff(pts[:, 0]) >= 0)


def test_constant_objective():
    value, witness, oracle, point, _ = maximize_over_states(lambda r: 0.25, 2, FAST)
    assert value == 0.25 and oracle == 0.25
    # tie broken toward the smallest (p, theta, phi)
    assert (point.p, point.theta, point.phi) == (0.0, 0.0, 0.0)
    # p = 0 is the antipodal pure state, here |1><1|
    assert np.allclose(witness.matrix, np.diag([0, 1]))


def test_maximizes_and_minimizes_coherence(povm, cfg):
    value, witness, oracle, _, _ = maximize_over_states(
        lambda r: povm_relative_entropy_coherence(r, povm), 2, FAST)
    assert abs(value - 2) < 1e-6 and value >= oracle
    assert abs(abs(witness.matrix[0, 0] - 0.5) - 0.5) < 1e-3
    value, witness, _, _, _ = maximize_over_states(
        lambda r: -povm_relative_entropy_coherence(r, povm), 2, FAST)
    assert abs(value + 1) < 1e-6
    assert np.allclose(witness.matrix, np.eye(2) / 2, atol=1e-3)


def test_identity_has_zero_power(povm, cfg):
    res = power(Channel.identity(2), Channel.identity(2), povm, cfg)
    assert res.value == 0.0
    assert dynamical_coherence(Channel.identity(2), povm, cfg) == 0.0


def test_theta_max(example, cfg):
    res = power(example.u_max, Channel.identity(2), example.povm, cfg)
    assert abs(res.value - 0.5) < 1e-3
    assert res.value >= res.oracle_value
    # maximizers are the pure states |+> and |->
    w = res.witness.matrix
    assert abs(np.trace(w @ w).real - 1) < 1e-3
    assert abs(abs(w[0, 1].real) - 0.5) < 1e-3
    assert abs(res.witness_point.theta - np.pi / 2) < 1e-2


@pytest.mark.parametrize("name", ["u_min", "u_min_prime"])
def test_known_cmio_unitaries(example, cfg, name):
    ch = getattr(example, name)
    assert dynamical_coherence(ch, example.povm, cfg) < 1e-9
    v = certify_cmio(ch, example.povm, cfg)
    assert v.certified_within_budget and v.max_violation_found < 1e-9


def test_mixture_and_depolarizing(example, cfg):
    assert certify_cmio(lambda_mixed(0.3), example.povm, cfg).certified_within_budget
    # the replacement channel sends every state to I/2 (coherence 1), so it is CMIO
    v = certify_cmio(depolarize_to_mixed(), example.povm, cfg)
    assert v.certified_within_budget
    # Hadamard is not
    v = certify_cmio(example.u_max, example.povm, cfg)
    assert not v.certified_within_budget and abs(v.max_violation_found - 0.5) < 1e-3
    assert v.witness is not None


def test_dynamical_coherence_is_clipped_power(example):
    for seed in range(3):
        ch = Channel.unitary(random_unitary(2, seed))
        res = power(ch, Channel.identity(2), example.povm, FAST)
        assert dynamical_coherence(ch, example.povm, FAST) == max(res.value, 0.0)
        assert res.value >= res.oracle_value


def test_verdict_threshold():
    class R:
        witness = None

    r = R()
    cfg = OptimizerConfig(budget_tolerance=1e-3)
    r.value = 5e-4
    assert verdict_from_power(r, cfg).certified_within_budget
    r.value = 2e-3
    assert not verdict_from_power(r, cfg).certified_within_budget
    r.value = -1.0
    assert verdict_from_power(r, cfg).max_violation_found == 0.0


def test_non_finite_objective_raises():
    with pytest.raises(OptimizerError) as info:
        maximize_over_states(lambda r: np.nan, 2, FAST)
    assert info.value.state is not None


def test_dimension_mismatch(povm):
    with pytest.raises(DimensionMismatchError):
        power(Channel.identity(3), Channel.identity(2), povm)


def test_qutrit_search_dominates_oracle():
    cfg = OptimizerConfig(restarts=4, oracle_samples=2000, local_max_iterations=100)
    e = random_povm(3, 4, 1)
    th = Channel.unitary(random_unitary(3, 2))
    res = power(th, Channel.identity(3), e, cfg)
    assert res.witness_point is None and res.witness.dim == 3
    assert res.value >= res.oracle_value
    direct = (povm_relative_entropy_coherence(th.apply_array(res.witness.matrix), e)
              - povm_relative_entropy_coherence(res.witness, e))
    assert abs(direct - res.value) < 1e-9
    # basis POVM on a qutrit: the permutation is incoherent
    perm = np.eye(3)[[1, 2, 0]]
    assert certify_cmio(Channel.unitary(perm), Povm.computational_basis(3), cfg).certified_within_budget
