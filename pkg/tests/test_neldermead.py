import numpy as np

from povm_coherence.neldermead import minimize_batch


def test_quadratic_bowls():
    centers = np.array([[0.3, -1.2], [2.0, 0.5], [-0.7, 0.1]])

    def f(x):
        # each search sees the same bowl; minimum at centers[0]
        return np.sum((x - centers[0]) ** 2, axis=1)

    res = minimize_batch(f, centers, 0.1, maxiter=1000, fatol=1e-14, xatol=1e-8)
    assert res.converged.all()
    assert np.max(np.abs(res.x - centers[0])) < 1e-6
    assert res.fun.max() < 1e-12


def test_rosenbrock_matches_known_minimum():
    def f(x):
        return 100 * (x[:, 1] - x[:, 0] ** 2) ** 2 + (1 - x[:, 0]) ** 2

    res = minimize_batch(f, [[-1.2, 1.0]], 0.1, maxiter=5000, fatol=1e-14, xatol=1e-8)
    assert np.allclose(res.x[0], [1.0, 1.0], atol=1e-5)


def test_bounds_are_respected():
    def f(x):
        return -x.sum(axis=1)

    res = minimize_batch(f, [[0.5, 0.5]], 0.2, bounds=[(0, 1), (0, 2)], maxiter=400)
    assert np.all(res.x >= [0, 0]) and np.all(res.x <= [1, 2])
    assert np.allclose(res.x[0], [1, 2], atol=1e-4)


def test_lockstep_equals_individual_runs():
    rng = np.random.default_rng(0)
    starts = rng.uniform(-2, 2, size=(5, 3))

    def f(x):
        return np.sum(np.cos(3 * x) + 0.1 * x**2, axis=1)

    together = minimize_batch(f, starts, 0.3, maxiter=300)
    for i, s in enumerate(starts):
        alone = minimize_batch(f, s[None], 0.3, maxiter=300)
        assert np.array_equal(alone.x[0], together.x[i])
        assert alone.fun[0] == together.fun[i]


def test_iteration_cap_reports_not_converged():
    res = minimize_batch(lambda x: np.sum(x**2, axis=1), [[5.0, 5.0]], 1.0, maxiter=3)
    assert not res.converged[0]
    assert res.iterations[0] == 3
