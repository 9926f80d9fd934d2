"""End-to-end reproduction checks for the four-outcome qubit example.

Each check returns a :class:`Check` with expected and computed values, so
callers can print a table or assert on it.
"""
import time
from dataclasses import dataclass

import numpy as np

from .errors import FixtureError
from .coherence import povm_relative_entropy_coherence
from .core import Channel, DensityMatrix, Povm
from .dynamical import OptimizerConfig, certify_cmio, dynamical_coherence, power
from .naimark import canonical_extension, verify_extension
from .sampling import random_unitary
from .scenarios import (
    build_paper_example,
    check_mixed_state_bounds,
    lambda_mixed,
    sweep_pure_states,
)

HALF_PI = np.pi / 2


@dataclass
class Check:
    name: str
    expected: str
    computed: str
    passed: bool
    seconds: float = 0.0


def _angles_match(found, allowed, tol=1e-9):
    """Every found (theta, phi) equals some allowed pair, phi taken mod 2 pi;
    ``allowed`` entries with phi None accept any phi."""
    def ok(t, f):
        for at, af in allowed:
            if abs(t - at) > tol:
                continue
            if af is None:
                return True
            d = (f - af) % (2 * np.pi)
            if min(d, 2 * np.pi - d) <= tol:
                return True
        return False
    return bool(found) and all(ok(t, f) for t, f in found)


def _phis_mod(found):
    return sorted({round(float(f) % (2 * np.pi), 9) for _, f in found})


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def check_static_extremes(example):
    E = example.povm
    states = {
        "|0><0|": (DensityMatrix.from_ket([1, 0]), 2.0),
        "|+><+|": (DensityMatrix.from_ket([1, 1]), 1.5),
        "I/2": (DensityMatrix.maximally_mixed(2), 1.0),
    }
    out = []
    for label, (rho, want) in states.items():
        got, dt = _timed(lambda: povm_relative_entropy_coherence(rho, E))
        out.append(Check(f"C_E({label})", f"{want}", f"{got:.12f}", abs(got - want) <= 1e-9 and dt < 1.0, dt))
    return out


def check_pure_sweep(example, n=61):
    table, dt = _timed(lambda: sweep_pure_states(example.povm, None, n, n))
    c = table.coherence
    hi, lo = float(c.max()), float(c.min())
    at_hi = table.argwhere_close("coherence", hi, 1e-9)
    at_lo = table.argwhere_close("coherence", lo, 1e-9)
    hi_ok = abs(hi - 2) <= 1e-6 and _angles_match(at_hi, [(0.0, None), (np.pi, None)])
    lo_ok = (
        abs(lo - 1.5) <= 1e-6
        and _angles_match(at_lo, [(HALF_PI, k * HALF_PI) for k in range(4)])
        and len(_phis_mod(at_lo)) == 4
    )
    return [
        Check("pure sweep max", "2 at theta in {0, pi}", f"{hi:.12f} at {len(at_hi)} nodes", hi_ok and dt < 30, dt),
        Check("pure sweep min", "1.5 at (pi/2, k pi/2)", f"{lo:.12f} at phi {_phis_mod(at_lo)}", lo_ok and dt < 30, dt),
    ]


def check_increment(example, n=61):
    table, dt = _timed(lambda: sweep_pure_states(example.povm, example.u_max, n, n))
    inc = table.increment
    top = float(inc.max())
    where = table.argwhere_close(inc, top, 1e-9)
    ok = abs(top - 0.5) <= 1e-6 and _angles_match(where, [(HALF_PI, 0.0), (HALF_PI, np.pi)])
    return [Check("max increment under U_max", "0.5 at (pi/2, {0, pi})",
                  f"{top:.12f} at phi {_phis_mod(where)}", ok, dt)]


def check_theta_max(example, cfg):
    res, dt = _timed(lambda: power(example.u_max, Channel.identity(2), example.povm, cfg))
    value = max(res.value, 0.0)
    return [Check("dynamical coherence of Theta_max", "0.5 +- 1e-3", f"{value:.12f}",
                  abs(value - 0.5) <= 1e-3 and dt < 10, dt)]


def known_cmios(example):
    out = {"Lambda_min": example.u_min, "Lambda'_min": example.u_min_prime}
    for p in (0.25, 0.5, 0.75):
        out[f"Lambda_mixed({p})"] = lambda_mixed(p)
    return out


def check_cmios(example, cfg):
    out = []
    for name, ch in known_cmios(example).items():
        verdict, dt = _timed(lambda: certify_cmio(ch, example.povm, cfg))
        v = verdict.max_violation_found
        out.append(Check(f"CMIO {name}", "0, violation < 1e-6", f"{v:.3e}",
                         verdict.certified_within_budget and v < 1e-6, dt))
    return out


def check_bounds(example, n=61):
    rep, dt = _timed(lambda: check_mixed_state_bounds(example.povm, n_theta=n, n_phi=n))
    saturated = all(abs(row["grid_max"] - row["upper_bound"]) <= 1e-9 for row in rep.rows) and all(
        _angles_match(v, [(0.0, None), (np.pi, None)])
        for p, v in rep.upper_achievers.items() if p != 0.5
    )
    ok = rep.n_violations == 0 and saturated
    return [Check("mixed-state bounds", "0 violations, upper at theta in {0, pi}",
                  f"{rep.n_violations} violations (worst {rep.max_violation:.2e})", ok, dt)]


def check_unitary_ceiling(example, cfg, samples=100, seed=2024):
    rng = np.random.default_rng(seed)

    def run():
        return max(dynamical_coherence(Channel.unitary(random_unitary(2, rng)), example.povm, cfg)
                   for _ in range(samples))

    worst, dt = _timed(run)
    return [Check(f"unitary ceiling ({samples} random unitaries)", "<= 0.5 + 1e-3",
                  f"max {worst:.12f}", worst <= 0.5 + 1e-3, dt)]


def check_dilation(example):
    ext = canonical_extension(example.povm)
    dev, dt = _timed(lambda: verify_extension(example.povm, ext, 200, seed=1))
    rep = example.vector_report
    return [
        Check("canonical dilation identity", "< 1e-9", f"{dev:.2e}", dev < 1e-9, dt),
        Check("reference dilation vectors orthonormal", "< 1e-9",
              f"{rep['orthonormality_error']:.2e}", rep["orthonormality_error"] < 1e-9),
        Check("reference dilation vectors marginals", "< 1e-9 (ancilla-first ordering)",
              f"{rep['ancilla_first']:.2e} (system-first {rep['system_first']:.2e})",
              rep["ancilla_first"] < 1e-9),
    ]


def check_incoherent_setting(cfg):
    basis = Povm.computational_basis(2)
    x = np.array([[0, 1], [1, 0]])
    channels = {
        "full dephasing": Channel.kraus([np.diag([1, 0]), np.diag([0, 1])]),
        "basis permutation": Channel.unitary(x),
    }
    out = []
    for name, ch in channels.items():
        verdict, dt = _timed(lambda: certify_cmio(ch, basis, cfg))
        out.append(Check(f"basis POVM: {name} is CMIO", "violation < 1e-6",
                         f"{verdict.max_violation_found:.3e}",
                         verdict.certified_within_budget and verdict.max_violation_found < 1e-6, dt))
    h = Channel.unitary(np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    value, dt = _timed(lambda: dynamical_coherence(h, basis, cfg))
    out.append(Check("basis POVM: Hadamard", "1 +- 1e-3", f"{value:.12f}", abs(value - 1) <= 1e-3, dt))
    return out


def run_example_checks(cfg=None, corrupt=False, ceiling_samples=100):
    """All reproduction checks; ``corrupt`` swaps in a mistyped dilation vector."""
    cfg = cfg or OptimizerConfig()
    vectors = None
    if corrupt:
        from .scenarios import NAIMARK_VECTORS
        vectors = NAIMARK_VECTORS.copy()
        vectors[0, 2] = 0.7  # mistyped sqrt(2)/2
    try:
        example = build_paper_example(vectors=vectors)
    except FixtureError as exc:
        return [Check("worked-example fixture", "valid", str(exc), False)]
    checks = []
    checks += check_static_extremes(example)
    checks += check_pure_sweep(example)
    checks += check_increment(example)
    checks += check_theta_max(example, cfg)
    checks += check_cmios(example, cfg)
    checks += check_bounds(example)
    if ceiling_samples:
        checks += check_unitary_ceiling(example, cfg, ceiling_samples)
    checks += check_dilation(example)
    checks += check_incoherent_setting(cfg)
    return checks


def format_report(checks):
    width = max(len(c.name) for c in checks)
    lines = []
    for c in checks:
        flag = "PASS" if c.passed else "FAIL"
        lines.append(f"{flag}  {c.name:<{width}}  expected {c.expected}; computed {c.computed}  [{c.seconds:.2f}s]")
    n_fail = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - n_fail}/{len(checks)} checks passed")
    return "\n".join(lines)
