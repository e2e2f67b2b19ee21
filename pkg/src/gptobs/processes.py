"""Process backend: channels as states, process measurements, and bounds.

A quantum channel is represented by its Choi operator built from the
unnormalized maximally entangled vector, so evaluation of a process effect
is a plain trace pairing and trivial process measurements reproduce their
distribution exactly. Process measurements normalize to ``rho (x)
identity`` for a single input state ``rho``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import compat, linalg, noise
from .core import (
    Observable,
    ProcessEffect,
    ProcessSpace,
    unit_effect,
    validate_observable,
)
from .grid import OutcomeGrid
from .errors import InvalidParameter, InvalidPPOVM, SpaceMismatch

PPOVM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ChoiState:
    """Choi operator of a trace-preserving channel.

    With the unnormalized maximally entangled convention, positivity and a
    partial trace equal to the input identity characterize valid channels;
    both are enforced at construction within 1e-9.
    """

    space: ProcessSpace
    omega: np.ndarray

    def __post_init__(self):
        omega = self.space.coerce_state(np.asarray(self.omega, dtype=complex))
        omega = omega.copy()
        omega.setflags(write=False)
        object.__setattr__(self, "omega", omega)

    @classmethod
    def from_kraus(
        cls, kraus_ops: Sequence[np.ndarray], dim_in: int, dim_out: int
    ) -> "ChoiState":
        """Choi operator of the channel with the given Kraus operators."""
        space = ProcessSpace(dim_in, dim_out)
        psi = np.zeros(dim_in * dim_in, dtype=complex)
        for i in range(dim_in):
            psi[i * dim_in + i] = 1.0
        pure = np.outer(psi, psi.conj())
        omega = np.zeros((dim_in * dim_out, dim_in * dim_out), dtype=complex)
        eye_in = np.eye(dim_in)
        for k in kraus_ops:
            k = np.asarray(k, dtype=complex)
            if k.shape != (dim_out, dim_in):
                raise InvalidParameter(
                    f"Kraus operator of shape {k.shape} does not map "
                    f"dim {dim_in} to dim {dim_out}"
                )
            lifted = np.kron(eye_in, k)
            omega += lifted @ pure @ lifted.conj().T
        return cls(space, omega)

    @classmethod
    def identity(cls, dim: int) -> "ChoiState":
        return cls.from_kraus([np.eye(dim)], dim, dim)


@dataclass(frozen=True, eq=False)
class PPOVM:
    """Process measurement: effects summing to ``rho (x) identity``.

    Wraps a process-space observable together with the input state ``rho``
    extracted from its normalization; positivity of every effect and the
    factorized normalization are enforced at construction within 1e-9.
    """

    observable: Observable
    rho: np.ndarray

    def __post_init__(self):
        obs = self.observable
        if not isinstance(obs.space, ProcessSpace):
            raise InvalidPPOVM("observable must live on a process space")
        report = validate_observable(obs, tol=PPOVM_TOL)
        if not report.ok:
            raise InvalidPPOVM(str(report))
        rho = linalg.as_hermitian(self.rho, tol=PPOVM_TOL)
        space = obs.space
        total = sum(e.op for e in obs.effects_in_order())
        expected = linalg.partial_trace(
            total, space.dim_in, space.dim_out, keep="a"
        ) / space.dim_out
        if np.abs(rho - expected).max() > PPOVM_TOL:
            raise InvalidPPOVM("rho does not match the effect normalization")
        rho = rho.copy()
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_effect_ops(
        cls,
        dim_in: int,
        dim_out: int,
        ops: Sequence[np.ndarray],
        outcomes: Sequence[int] | None = None,
    ) -> "PPOVM":
        """Build from effect operators, deriving ``rho`` from their sum."""
        space = ProcessSpace(dim_in, dim_out)
        if outcomes is None:
            outcomes = range(len(ops))
        effects = {
            int(x): ProcessEffect(space, op) for x, op in zip(outcomes, ops)
        }
        obs = Observable(space, effects)
        total = sum(e.op for e in obs.effects_in_order())
        rho = linalg.partial_trace(total, dim_in, dim_out, keep="a") / dim_out
        return cls(obs, rho)

    @property
    def space(self) -> ProcessSpace:
        return self.observable.space

    @property
    def outcomes(self) -> tuple[int, ...]:
        return self.observable.outcomes

    def effect_ops(self) -> list[np.ndarray]:
        return [e.op for e in self.observable.effects_in_order()]

    def to_dict(self) -> dict:
        return {
            "dimA": self.space.dim_in,
            "dimB": self.space.dim_out,
            "rho": linalg.matrix_to_dict(self.rho),
            "effects": [
                linalg.matrix_to_dict(op) for op in self.effect_ops()
            ],
            "outcomes": list(self.outcomes),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "PPOVM":
        ops = [linalg.matrix_from_dict(e) for e in payload["effects"]]
        outcomes = payload.get("outcomes")
        return cls.from_effect_ops(
            int(payload["dimA"]), int(payload["dimB"]), ops, outcomes
        )


def evaluate_ppovm(ppovm: PPOVM, channel: ChoiState) -> np.ndarray:
    """Outcome distribution of a process measurement on a channel."""
    if ppovm.space != channel.space:
        raise SpaceMismatch(
            f"measurement dims ({ppovm.space.dim_in}, {ppovm.space.dim_out}) "
            f"do not match channel dims "
            f"({channel.space.dim_in}, {channel.space.dim_out})"
        )
    return np.array([
        float(np.trace(channel.omega @ op).real) for op in ppovm.effect_ops()
    ])


def ppovm_noise_lower_bound(ppovm: PPOVM) -> noise.NoiseDecomposition:
    """Certified lower-bound noise decomposition of a process measurement.

    Extracts the trivial part ``T_x = (m_x / m) rho (x) identity`` with
    ``m_x`` the minimal eigenvalues of the effects; the residual
    ``(A_x - m_x rho (x) identity) / (1 - m)`` is validated to be a
    process measurement again with the same ``rho``.
    """
    decomposition = noise.noise_content(ppovm.observable)
    if decomposition.t < 1.0 - noise.FULL_NOISE_TOL:
        residual_report = validate_observable(decomposition.residual, tol=PPOVM_TOL)
        if not residual_report.ok:
            raise InvalidPPOVM(f"residual failed validation: {residual_report}")
    return decomposition


@dataclass(frozen=True, eq=False)
class PPOVMEigenReport:
    """Summed minimal-eigenvalue certificate for process measurements.

    ``eigen_sums`` are the raw per-measurement sums of minimal effect
    eigenvalues; ``noise_values`` replace them by 1 for measurements
    detected to be exactly trivial. Both are valid lower bounds on the
    noise contents, so a total of at least ``m - 1`` soundly certifies
    compatibility, in which case the report carries a joint observable.
    """

    eigen_sums: tuple[float, ...]
    noise_values: tuple[float, ...]
    threshold: float
    witness: compat.JointObservable | None

    @property
    def total(self) -> float:
        return float(sum(self.noise_values))

    @property
    def certified(self) -> bool:
        return self.witness is not None


def _distribution(obs: Observable) -> np.ndarray:
    """Outcome distribution of a trivial process observable."""
    space = obs.space
    return np.array([
        float(np.trace(e.op).real) / space.dim_out for e in obs.effects_in_order()
    ])


def _extend_with_trivial_factors(
    space: ProcessSpace,
    observables: Sequence[Observable],
    informative: Sequence[int],
    core_joint: compat.JointObservable | None,
) -> compat.JointObservable:
    """Spread a joint over extra factors that are exactly trivial.

    Cells multiply the informative joint's effects by the trivial factors'
    outcome probabilities; when no informative factor remains, the unit
    effect carries the product distribution.
    """
    grid = OutcomeGrid(tuple(obs.outcomes for obs in observables))
    distributions = {
        i: dict(zip(obs.outcomes, _distribution(obs)))
        for i, obs in enumerate(observables)
        if i not in informative
    }
    unit = unit_effect(space)
    effects = {}
    for code, labels in grid.cells():
        scalar = 1.0
        for i, probs in distributions.items():
            scalar *= probs[labels[i]]
        if core_joint is None:
            effects[code] = scalar * unit
        else:
            inner = tuple(labels[i] for i in informative)
            effects[code] = scalar * core_joint.cell(inner)
    return compat.JointObservable(Observable(space, effects), grid)


def ppovm_eigen_condition_report(ppovms: Sequence[PPOVM]) -> PPOVMEigenReport:
    """Evaluate the summed minimal-eigenvalue condition for PPOVMs.

    Measurements whose effects all factor as ``K (x) identity`` are
    exactly trivial and enter the sum with their true noise content 1
    instead of the (possibly much smaller) eigenvalue sum.
    """
    if len(ppovms) < 2:
        raise InvalidParameter("the condition concerns at least two measurements")
    space = ppovms[0].space
    for p in ppovms[1:]:
        if p.space != space:
            raise SpaceMismatch("measurements act on different dimensions")
    observables = [p.observable for p in ppovms]
    eigen_sums = tuple(noise.noise_content(obs).t for obs in observables)
    trivial = [
        noise.noise_content_exact_trivial_ppovm(obs) is not None
        for obs in observables
    ]
    noise_values = tuple(
        1.0 if flag else s for s, flag in zip(eigen_sums, trivial)
    )
    threshold = float(len(ppovms) - 1)
    witness = None
    if sum(noise_values) >= threshold - 1e-12:
        informative = [i for i, flag in enumerate(trivial) if not flag]
        if len(informative) == len(observables):
            witness = compat.sufficient_compatible(observables).witness
        else:
            core_joint = None
            if informative:
                inner = [observables[i] for i in informative]
                inner_values = [eigen_sums[i] for i in informative]
                weights = compat.default_joint_weights(inner_values)
                core_joint = compat.build_joint(inner, weights)
            witness = _extend_with_trivial_factors(
                space, observables, informative, core_joint
            )
    return PPOVMEigenReport(eigen_sums, noise_values, threshold, witness)


def rank_one_trivial_ppovm(
    probs: Sequence[float], dim_out: int, vectors: np.ndarray | None = None
) -> PPOVM:
    """Trivial process measurement with zero minimal eigenvalues.

    Effects are ``p_x |v_x><v_x| (x) identity`` for orthonormal ``v_x``
    (computational basis by default). Every effect has minimal eigenvalue
    zero for ``dim_out >= 1`` with input dimension above 1, so the
    eigenvalue lower bound on the noise content collapses to 0 while the
    measurement is in fact trivial with noise content 1.
    """
    p = np.asarray(probs, dtype=float)
    dim_in = p.size
    if dim_in < 2:
        raise InvalidParameter("need at least two outcomes")
    if vectors is None:
        vectors = np.eye(dim_in, dtype=complex)
    vectors = np.asarray(vectors, dtype=complex)
    eye_out = np.eye(dim_out)
    ops = [
        p[x] * np.kron(np.outer(vectors[x], vectors[x].conj()), eye_out)
        for x in range(dim_in)
    ]
    return PPOVM.from_effect_ops(dim_in, dim_out, ops)


def random_channel(
    dim_in: int, dim_out: int, rng: np.random.Generator, env_dim: int | None = None
) -> ChoiState:
    """Seeded random channel via a random isometric dilation."""
    if env_dim is None:
        env_dim = dim_in
    total_out = dim_out * env_dim
    if total_out < dim_in:
        raise InvalidParameter("dilation too small to embed the input")
    g = rng.normal(size=(total_out, dim_in)) + 1j * rng.normal(
        size=(total_out, dim_in)
    )
    q, _ = np.linalg.qr(g)
    kraus = [q[k * dim_out:(k + 1) * dim_out, :] for k in range(env_dim)]
    return ChoiState.from_kraus(kraus, dim_in, dim_out)


def random_ppovm(
    dim_in: int,
    dim_out: int,
    n_outcomes: int,
    rng: np.random.Generator,
    rho: np.ndarray | None = None,
) -> PPOVM:
    """Seeded random process measurement, optionally with a fixed ``rho``."""
    if n_outcomes < 1:
        raise InvalidParameter("need at least one outcome")
    total = dim_in * dim_out
    blocks = np.empty((n_outcomes, total, total), dtype=complex)
    for x in range(n_outcomes):
        g = rng.normal(size=(total, total)) + 1j * rng.normal(size=(total, total))
        blocks[x] = g @ g.conj().T
    s = blocks.sum(axis=0)
    eigvals, eigvecs = np.linalg.eigh(s)
    inv_sqrt = (eigvecs / np.sqrt(eigvals)) @ eigvecs.conj().T
    if rho is None:
        g = rng.normal(size=(dim_in, dim_in)) + 1j * rng.normal(
            size=(dim_in, dim_in)
        )
        rho = g @ g.conj().T
        rho = rho / np.trace(rho).real
    window = np.kron(np.asarray(rho, dtype=complex), np.eye(dim_out))
    eigvals_w, eigvecs_w = np.linalg.eigh(linalg.as_hermitian(window, tol=1e-9))
    sqrt_window = (eigvecs_w * np.sqrt(np.clip(eigvals_w, 0.0, None))) @ eigvecs_w.conj().T
    ops = [
        sqrt_window @ (inv_sqrt @ blocks[x] @ inv_sqrt) @ sqrt_window
        for x in range(n_outcomes)
    ]
    return PPOVM.from_effect_ops(dim_in, dim_out, ops)
