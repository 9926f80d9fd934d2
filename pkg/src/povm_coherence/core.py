"""States, measurements and channels with input validation.

Values are immutable after construction. Matrices are stored as read-only
complex numpy arrays; every constructor checks the defining identities at
the package-wide tolerance of 1e-9.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, OutcomeUnreachableError, ValidationError
from .numerics import (
    PSD_CLAMP,
    ZERO_PROB,
    as_matrix,
    check_hermitian,
    dagger,
)

TOL = 1e-9


def _frozen(arr):
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


def _max_abs(m):
    return float(np.max(np.abs(m), initial=0.0))


class DensityMatrix:
    """A validated density operator: Hermitian, unit trace, PSD."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = as_matrix(matrix)
        check_hermitian(m, TOL, "density matrix")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TOL:
            raise ValidationError(f"density matrix trace is {tr:.12g}, expected 1 within {TOL:.0e}")
        lo = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
        if lo < -PSD_CLAMP:
            raise ValidationError(f"density matrix has eigenvalue {lo:.3e} below -{PSD_CLAMP:.0e}")
        object.__setattr__(self, "matrix", _frozen(0.5 * (m + m.conj().T)))

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"

    @classmethod
    def from_ket(cls, ket):
        v = np.asarray(ket, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim):
        return cls(np.eye(dim) / dim)


def as_density_matrix(rho):
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


@dataclass(frozen=True)
class Povm:
    """Finite family of effects summing to the identity."""

    effects: tuple

    def __init__(self, effects):
        mats = [as_matrix(e) for e in effects]
        if not mats:
            raise ValidationError("a POVM needs at least one effect")
        d = mats[0].shape[0]
        for i, e in enumerate(mats):
            if e.shape != (d, d):
                raise DimensionMismatchError(f"effect {i} has shape {e.shape}, expected {(d, d)}")
            check_hermitian(e, TOL, f"effect {i}")
            lo = np.linalg.eigvalsh(0.5 * (e + e.conj().T))[0]
            if lo < -TOL:
                raise ValidationError(f"effect {i} is not PSD: eigenvalue {lo:.3e}")
        err = _max_abs(sum(mats) - np.eye(d))
        if err > TOL:
            raise ValidationError(f"effects do not sum to identity: max deviation {err:.3e}")
        object.__setattr__(self, "effects", tuple(_frozen(0.5 * (e + e.conj().T)) for e in mats))

    @property
    def dim(self):
        return self.effects[0].shape[0]

    @property
    def n_outcomes(self):
        return len(self.effects)

    def stacked(self):
        return np.stack(self.effects)

    @classmethod
    def computational_basis(cls, dim):
        return cls([np.diag(np.eye(dim)[k]) for k in range(dim)])


@dataclass(frozen=True)
class ProjectiveMeasurement:
    projectors: tuple

    def __init__(self, projectors, tol=TOL):
        mats = [as_matrix(p) for p in projectors]
        d = mats[0].shape[0]
        for i, p in enumerate(mats):
            if p.shape != (d, d):
                raise DimensionMismatchError(f"projector {i} has shape {p.shape}")
            check_hermitian(p, tol, f"projector {i}")
            if _max_abs(p @ p - p) > tol:
                raise ValidationError(f"projector {i} is not idempotent")
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                if _max_abs(mats[i] @ mats[j]) > tol:
                    raise ValidationError(f"projectors {i} and {j} are not orthogonal")
        err = _max_abs(sum(mats) - np.eye(d))
        if err > tol:
            raise ValidationError(f"projectors do not sum to identity: max deviation {err:.3e}")
        object.__setattr__(self, "projectors", tuple(_frozen(p) for p in mats))

    @property
    def dim(self):
        return self.projectors[0].shape[0]

    def stacked(self):
        return np.stack(self.projectors)


def _check_unitary(u, what="unitary"):
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        raise ValidationError(f"{what} must be square, got {u.shape}")
    err = _max_abs(u.conj().T @ u - np.eye(u.shape[0]))
    if err > TOL:
        raise ValidationError(f"{what} is not unitary: max|U^dag U - I| = {err:.3e}")
    return u


class Channel:
    """CPTP map stored in its declared form.

    ``kind`` is one of ``"unitary"``, ``"kraus"`` or ``"mixed-unitary"``.
    Build instances through :meth:`unitary`, :meth:`kraus` or
    :meth:`mixed_unitary`.
    """

    KINDS = ("unitary", "kraus", "mixed-unitary")

    def __init__(self, kind, operators, weights=None):
        if kind not in self.KINDS:
            raise ValidationError(f"unknown channel kind {kind!r}")
        ops = [as_matrix(k) for k in operators]
        if not ops:
            raise ValidationError("channel needs at least one operator")
        d = ops[0].shape[0]
        for i, k in enumerate(ops):
            if k.shape != (d, d):
                raise DimensionMismatchError(f"operator {i} has shape {k.shape}, expected {(d, d)}")
        if kind == "unitary":
            if len(ops) != 1:
                raise ValidationError("unitary channel takes exactly one matrix")
            _check_unitary(ops[0])
            w = np.ones(1)
        elif kind == "kraus":
            err = _max_abs(sum(k.conj().T @ k for k in ops) - np.eye(d))
            if err > TOL:
                raise ValidationError(f"Kraus operators are not trace preserving: deviation {err:.3e}")
            w = np.ones(len(ops))
        else:
            w = np.asarray(weights, dtype=float)
            if w.shape != (len(ops),):
                raise ValidationError("mixed-unitary channel needs one weight per unitary")
            if np.any(w < 0) or abs(w.sum() - 1.0) > TOL:
                raise ValidationError(f"weights must be non-negative and sum to 1, got sum {w.sum():.12g}")
            for i, u in enumerate(ops):
                _check_unitary(u, f"unitary {i}")
        self.kind = kind
        self.operators = tuple(_frozen(k) for k in ops)
        self.weights = w.copy()
        self.weights.setflags(write=False)

    @classmethod
    def unitary(cls, u):
        return cls("unitary", [u])

    @classmethod
    def kraus(cls, operators):
        return cls("kraus", operators)

    @classmethod
    def mixed_unitary(cls, pairs):
        pairs = list(pairs)
        return cls("mixed-unitary", [u for _, u in pairs], [w for w, _ in pairs])

    @classmethod
    def identity(cls, dim):
        return cls.unitary(np.eye(dim))

    @property
    def dim(self):
        return self.operators[0].shape[0]

    def kraus_operators(self):
        if self.kind == "mixed-unitary":
            return [np.sqrt(w) * u for w, u in zip(self.weights, self.operators)]
        return list(self.operators)

    def apply_array(self, rho):
        """Apply to a raw array or a stack of them, shape (..., d, d)."""
        rho = np.asarray(rho)
        if self.kind == "unitary":
            u = self.operators[0]
            return u @ rho @ u.conj().T
        ks = np.stack(self.operators)
        # (..., 1, d, d) against (m, d, d)
        out = ks @ rho[..., None, :, :] @ dagger(ks)
        if self.kind == "mixed-unitary":
            return np.einsum("...kij,k->...ij", out, self.weights)
        return out.sum(axis=-3)

    def __repr__(self):
        return f"Channel(kind={self.kind!r}, dim={self.dim}, n_ops={len(self.operators)})"


def compose(*channels):
    """Composite map ``channels[0] o channels[1] o ...`` (rightmost acts first)."""
    dims = {c.dim for c in channels}
    if len(dims) != 1:
        raise DimensionMismatchError(f"cannot compose channels of dimensions {sorted(dims)}")
    if all(c.kind == "unitary" for c in channels):
        u = np.eye(dims.pop(), dtype=complex)
        for c in channels:
            u = u @ c.operators[0]
        return Channel.unitary(u)
    ops = [np.eye(dims.pop(), dtype=complex)]
    for c in channels:
        ops = [a @ k for a in ops for k in c.kraus_operators()]
    return Channel.kraus(ops)


def convex_combination(channels, weights):
    """Channel rho -> sum_j w_j channels[j][rho]."""
    weights = np.asarray(weights, dtype=float)
    if all(c.kind in ("unitary", "mixed-unitary") for c in channels):
        pairs = [
            (w * cw, u)
            for w, c in zip(weights, channels)
            for cw, u in zip(c.weights, c.operators)
        ]
        return Channel.mixed_unitary(pairs)
    ops = [np.sqrt(w) * k for w, c in zip(weights, channels) if w > 0 for k in c.kraus_operators()]
    return Channel.kraus(ops)


def _check_dims(a, b, what):
    if a != b:
        raise DimensionMismatchError(f"{what}: dimension {a} does not match {b}")


def apply_channel(channel, rho):
    rho = as_density_matrix(rho)
    _check_dims(channel.dim, rho.dim, "apply_channel")
    return DensityMatrix(channel.apply_array(rho.matrix))


@dataclass(frozen=True)
class BlochPoint:
    """Mixing weight and angles of the parameterization

    rho = p |psi><psi| + (1 - p) |psi'><psi'|, with
    |psi>  = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>,
    |psi'> = sin(theta/2)|0> - e^{i phi} cos(theta/2)|1>.

    ``phi`` is accepted on the closed interval [0, 2 pi] so that uniform
    grids may include both endpoints.
    """

    p: float
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"p = {self.p} outside [0, 1]")
        if not 0.0 <= self.theta <= np.pi:
            raise ValidationError(f"theta = {self.theta} outside [0, pi]")
        if not 0.0 <= self.phi <= 2 * np.pi:
            raise ValidationError(f"phi = {self.phi} outside [0, 2 pi]")


def bloch_kets(theta, phi):
    """The antipodal pair (|psi>, |psi'>) for broadcastable angle arrays."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    psi = np.stack(np.broadcast_arrays(c + 0j, e * s), axis=-1)
    perp = np.stack(np.broadcast_arrays(s + 0j, -e * c), axis=-1)
    return psi, perp


def bloch_matrices(p, theta, phi):
    """Stack of qubit density matrices for broadcastable (p, theta, phi) arrays."""
    p = np.asarray(p, dtype=float)
    psi, perp = bloch_kets(theta, phi)
    pure = psi[..., :, None] * psi[..., None, :].conj()
    other = perp[..., :, None] * perp[..., None, :].conj()
    return p[..., None, None] * pure + (1 - p)[..., None, None] * other


def bloch_state(pt):
    if not isinstance(pt, BlochPoint):
        pt = BlochPoint(*pt)
    return DensityMatrix(bloch_matrices(pt.p, pt.theta, pt.phi))


def bloch_point_of(rho):
    """Recover a BlochPoint reproducing a qubit state (inverse of bloch_state)."""
    m = as_density_matrix(rho).matrix
    if m.shape != (2, 2):
        raise DimensionMismatchError("bloch_point_of needs a qubit state")
    x = 2 * m[0, 1].real
    y = -2 * m[0, 1].imag
    z = (m[0, 0] - m[1, 1]).real
    r = float(np.sqrt(x * x + y * y + z * z))
    if r < 1e-15:
        return BlochPoint(0.5, 0.0, 0.0)
    theta = float(np.arccos(np.clip(z / r, -1.0, 1.0)))
    phi = float(np.arctan2(y, x) % (2 * np.pi))
    p = min(max(0.5 * (1 + r), 0.0), 1.0)
    return BlochPoint(p, theta, phi)


def outcome_probabilities(povm, rho):
    rho = as_density_matrix(rho)
    _check_dims(povm.dim, rho.dim, "outcome_probabilities")
    p = np.einsum("kij,ji->k", povm.stacked(), rho.matrix).real
    p = np.where(p < 0.0, 0.0, p)
    total = p.sum()
    if abs(total - 1.0) > TOL:
        raise ValidationError(f"outcome probabilities sum to {total:.12g}; the POVM is invalid")
    return p / total


def post_measurement_state(a, rho, p):
    """Normalized post-measurement state A rho A^dag / p."""
    if p <= ZERO_PROB:
        raise OutcomeUnreachableError(f"outcome probability {p:.3e} is too small to condition on")
    rho = as_density_matrix(rho)
    a = as_matrix(a)
    _check_dims(a.shape[1], rho.dim, "post_measurement_state")
    return DensityMatrix(a @ rho.matrix @ a.conj().T / p)
