"""State spaces, effects, observables, and trivial observables.

Three backends share one observable model:

* polytope spaces, whose states are convex mixtures of finitely many vertices,
* quantum spaces, whose states are density operators,
* process spaces, whose states are quantum channels represented by Choi
  operators and whose effects are operators normalized to ``rho (x) identity``.

Effects are affine functionals on the state space; an observable maps a
finite set of integer outcomes to effects summing to the unit functional.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import nnls

from . import linalg
from .errors import (
    AffineInconsistency,
    InvalidMatrix,
    InvalidParameter,
    InvalidState,
    SpaceMismatch,
)

STATE_TOL = 1e-9
NORMALIZATION_TOL = 1e-9
EFFECT_BOUND_TOL = 1e-9
TRIVIAL_PROB_TOL = 1e-12


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr)
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# State spaces
# ---------------------------------------------------------------------------

class StateSpace:
    """Marker base class for the three space variants."""


@dataclass(frozen=True, eq=False)
class PolytopeSpace(StateSpace):
    """Convex hull of finitely many points in a real ambient space."""

    vertices: np.ndarray

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[0] < 1:
            raise InvalidParameter("vertices must be a non-empty (n, dim) array")
        if not np.all(np.isfinite(verts)):
            raise InvalidParameter("vertices must be finite")
        object.__setattr__(self, "vertices", _readonly(verts))

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def hull_dim(self) -> int:
        """Dimension of the affine hull spanned by the vertices."""
        if self.n_vertices == 1:
            return 0
        diffs = self.vertices[1:] - self.vertices[0]
        return int(np.linalg.matrix_rank(diffs, tol=1e-9))

    def __eq__(self, other) -> bool:
        return isinstance(other, PolytopeSpace) and np.array_equal(
            self.vertices, other.vertices
        )

    def weights_from_point(self, point) -> np.ndarray:
        """Convex weights over the vertices reproducing an ambient point.

        Solves a non-negative least squares problem; points whose best
        representation leaves a residual above ``STATE_TOL`` are rejected
        as lying outside the hull.
        """
        p = np.asarray(point, dtype=float).reshape(-1)
        if p.shape != (self.ambient_dim,):
            raise SpaceMismatch(
                f"point of length {p.size} does not match ambient dim {self.ambient_dim}"
            )
        system = np.vstack([self.vertices.T, np.ones(self.n_vertices)])
        target = np.append(p, 1.0)
        weights, residual = nnls(system, target)
        if residual > STATE_TOL:
            raise InvalidState(
                f"point lies outside the hull (residual {residual:.3e})"
            )
        total = weights.sum()
        if total <= 0.0:
            raise InvalidState("degenerate weight solution")
        return weights / total

    def coerce_state(self, state) -> np.ndarray:
        """Normalize a state given as vertex weights or as an ambient point.

        A vector of length ``n_vertices`` is interpreted as convex weights
        first; if that fails and the length also matches the ambient
        dimension, it is retried as a point in the hull.
        """
        arr = np.asarray(state, dtype=float).reshape(-1)
        if arr.size == self.n_vertices:
            if np.all(arr >= -STATE_TOL) and abs(arr.sum() - 1.0) <= STATE_TOL:
                return np.clip(arr, 0.0, None)
            if arr.size != self.ambient_dim:
                raise InvalidState(
                    "weight vector has negative entries or does not sum to 1"
                )
        if arr.size == self.ambient_dim:
            return self.weights_from_point(arr)
        raise SpaceMismatch(
            f"state of length {arr.size} matches neither {self.n_vertices} weights "
            f"nor an ambient point of dim {self.ambient_dim}"
        )


@dataclass(frozen=True)
class QuantumSpace(StateSpace):
    """Density operators on a finite-dimensional Hilbert space."""

    dim: int

    def __post_init__(self):
        if int(self.dim) < 1:
            raise InvalidParameter("dim must be at least 1")
        object.__setattr__(self, "dim", int(self.dim))

    def coerce_state(self, state) -> np.ndarray:
        rho = np.asarray(state, dtype=complex)
        if rho.shape != (self.dim, self.dim):
            raise SpaceMismatch(
                f"state of shape {rho.shape} does not match dimension {self.dim}"
            )
        try:
            rho = linalg.as_hermitian(rho, tol=STATE_TOL)
        except InvalidMatrix as exc:
            raise InvalidState(str(exc)) from exc
        if abs(np.trace(rho).real - 1.0) > STATE_TOL:
            raise InvalidState("density operator must have unit trace")
        if linalg.min_eigenvalue(rho) < -STATE_TOL:
            raise InvalidState("density operator must be positive semidefinite")
        return rho


@dataclass(frozen=True)
class ProcessSpace(StateSpace):
    """Quantum channels from a ``dim_in`` system to a ``dim_out`` system.

    States are Choi operators built from the unnormalized maximally
    entangled vector, so a trace-preserving channel has a Choi operator
    whose partial trace over the output equals the identity on the input.
    """

    dim_in: int
    dim_out: int

    def __post_init__(self):
        if int(self.dim_in) < 1 or int(self.dim_out) < 1:
            raise InvalidParameter("dims must be at least 1")
        object.__setattr__(self, "dim_in", int(self.dim_in))
        object.__setattr__(self, "dim_out", int(self.dim_out))

    @property
    def total_dim(self) -> int:
        return self.dim_in * self.dim_out

    def coerce_state(self, state) -> np.ndarray:
        omega = getattr(state, "omega", state)
        omega = np.asarray(omega, dtype=complex)
        if omega.shape != (self.total_dim, self.total_dim):
            raise SpaceMismatch(
                f"Choi operator of shape {omega.shape} does not match "
                f"dims ({self.dim_in}, {self.dim_out})"
            )
        try:
            omega = linalg.as_hermitian(omega, tol=STATE_TOL)
        except InvalidMatrix as exc:
            raise InvalidState(str(exc)) from exc
        if linalg.min_eigenvalue(omega) < -STATE_TOL:
            raise InvalidState("Choi operator must be positive semidefinite")
        marginal = linalg.partial_trace(omega, self.dim_in, self.dim_out, keep="a")
        if np.abs(marginal - np.eye(self.dim_in)).max() > STATE_TOL:
            raise InvalidState(
                "Choi operator must trace to the identity on the input system"
            )
        return omega


# ---------------------------------------------------------------------------
# Effects
# ---------------------------------------------------------------------------

class Effect:
    """Affine functional with values in [0, 1] on the states of its space."""

    space: StateSpace

    def _check_space(self, other: "Effect"):
        if type(other) is not type(self) or other.space != self.space:
            raise SpaceMismatch("effects belong to different spaces")

    def __sub__(self, other: "Effect") -> "Effect":
        return self + (-1.0) * other

    def __rmul__(self, scalar):
        return self.__mul__(scalar)


@dataclass(frozen=True, eq=False)
class PolytopeEffect(Effect):
    """Affine functional on a polytope, carried by its exact vertex values.

    The affine coefficients (linear part and offset) are kept alongside the
    vertex values so the functional can also be evaluated at ambient points.
    """

    space: PolytopeSpace
    vertex_values: np.ndarray
    linear: np.ndarray
    offset: float

    def __post_init__(self):
        object.__setattr__(
            self, "vertex_values", _readonly(np.asarray(self.vertex_values, float))
        )
        object.__setattr__(self, "linear", _readonly(np.asarray(self.linear, float)))
        object.__setattr__(self, "offset", float(self.offset))

    def __add__(self, other: "PolytopeEffect") -> "PolytopeEffect":
        self._check_space(other)
        return PolytopeEffect(
            self.space,
            self.vertex_values + other.vertex_values,
            self.linear + other.linear,
            self.offset + other.offset,
        )

    def __mul__(self, scalar) -> "PolytopeEffect":
        if not isinstance(scalar, numbers.Real):
            return NotImplemented
        c = float(scalar)
        return PolytopeEffect(
            self.space, c * self.vertex_values, c * self.linear, c * self.offset
        )


@dataclass(frozen=True, eq=False)
class QuantumEffect(Effect):
    """Hermitian effect operator acting on density operators via the trace."""

    space: QuantumSpace
    op: np.ndarray

    def __post_init__(self):
        op = linalg.as_hermitian(self.op)
        if op.shape != (self.space.dim, self.space.dim):
            raise SpaceMismatch(
                f"operator shape {op.shape} does not match dimension {self.space.dim}"
            )
        object.__setattr__(self, "op", _readonly(op))

    def __add__(self, other: "QuantumEffect") -> "QuantumEffect":
        self._check_space(other)
        return QuantumEffect(self.space, self.op + other.op)

    def __mul__(self, scalar) -> "QuantumEffect":
        if not isinstance(scalar, numbers.Real):
            return NotImplemented
        return QuantumEffect(self.space, float(scalar) * self.op)


@dataclass(frozen=True, eq=False)
class ProcessEffect(Effect):
    """Operator representative of an effect on channels.

    Two representatives describe the same functional exactly when they
    differ by ``omega (x) identity`` with a traceless ``omega``; one
    representative is stored, and comparisons that care about the
    functional should use :func:`effect_deviation`.
    """

    space: ProcessSpace
    op: np.ndarray

    def __post_init__(self):
        op = linalg.as_hermitian(self.op)
        total = self.space.total_dim
        if op.shape != (total, total):
            raise SpaceMismatch(
                f"operator shape {op.shape} does not match total dimension {total}"
            )
        object.__setattr__(self, "op", _readonly(op))

    def __add__(self, other: "ProcessEffect") -> "ProcessEffect":
        self._check_space(other)
        return ProcessEffect(self.space, self.op + other.op)

    def __mul__(self, scalar) -> "ProcessEffect":
        if not isinstance(scalar, numbers.Real):
            return NotImplemented
        return ProcessEffect(self.space, float(scalar) * self.op)


def unit_effect(space: StateSpace) -> Effect:
    """The constant-1 functional of a space.

    For process spaces the stored representative uses the maximally mixed
    input state; any other density operator in its place would represent
    the same functional.
    """
    if isinstance(space, PolytopeSpace):
        return PolytopeEffect(
            space,
            np.ones(space.n_vertices),
            np.zeros(space.ambient_dim),
            1.0,
        )
    if isinstance(space, QuantumSpace):
        return QuantumEffect(space, np.eye(space.dim))
    if isinstance(space, ProcessSpace):
        return ProcessEffect(space, np.eye(space.total_dim) / space.dim_in)
    raise SpaceMismatch(f"unknown space type {type(space).__name__}")


def zero_effect(space: StateSpace) -> Effect:
    """The constant-0 functional of a space."""
    if isinstance(space, PolytopeSpace):
        return PolytopeEffect(
            space,
            np.zeros(space.n_vertices),
            np.zeros(space.ambient_dim),
            0.0,
        )
    if isinstance(space, QuantumSpace):
        return QuantumEffect(space, np.zeros((space.dim, space.dim)))
    if isinstance(space, ProcessSpace):
        return ProcessEffect(space, np.zeros((space.total_dim, space.total_dim)))
    raise SpaceMismatch(f"unknown space type {type(space).__name__}")


def polytope_effect_from_affine(
    space: PolytopeSpace, linear, offset: float
) -> PolytopeEffect:
    """Build a polytope effect from its affine coefficients."""
    lin = np.asarray(linear, dtype=float).reshape(-1)
    if lin.shape != (space.ambient_dim,):
        raise InvalidParameter(
            f"linear part of length {lin.size} does not match "
            f"ambient dim {space.ambient_dim}"
        )
    values = space.vertices @ lin + float(offset)
    return PolytopeEffect(space, values, lin, float(offset))


def polytope_effect_from_vertex_values(
    space: PolytopeSpace, values
) -> PolytopeEffect:
    """Build the affine functional taking prescribed values at the vertices.

    The affine coefficients are recovered by least squares; values that
    violate the affine dependencies among the vertices (fit residual above
    1e-9) raise :class:`AffineInconsistency`. The given values are kept
    verbatim as the effect's vertex values.
    """
    vals = np.asarray(values, dtype=float).reshape(-1)
    if vals.shape != (space.n_vertices,):
        raise InvalidParameter(
            f"got {vals.size} values for {space.n_vertices} vertices"
        )
    system = np.hstack([space.vertices, np.ones((space.n_vertices, 1))])
    theta, *_ = np.linalg.lstsq(system, vals, rcond=None)
    residual = float(np.abs(system @ theta - vals).max())
    if residual > 1e-9:
        raise AffineInconsistency(
            f"values are inconsistent with the vertex geometry "
            f"(residual {residual:.3e})"
        )
    return PolytopeEffect(space, vals, theta[:-1], float(theta[-1]))


def effect_deviation(e1: Effect, e2: Effect) -> float:
    """How far two effects are apart as functionals on their common space.

    Polytope effects compare by vertex values, quantum effects by operator
    entries. Process effects compare after removing the ``omega (x)
    identity`` gauge freedom (traceless ``omega``), since representatives
    differing by such a term are the same functional.
    """
    if type(e1) is not type(e2) or e1.space != e2.space:
        raise SpaceMismatch("effects belong to different spaces")
    if isinstance(e1, PolytopeEffect):
        return float(np.abs(e1.vertex_values - e2.vertex_values).max())
    if isinstance(e1, QuantumEffect):
        return float(np.abs(e1.op - e2.op).max())
    space = e1.space
    diff = e1.op - e2.op
    reduced = linalg.partial_trace(diff, space.dim_in, space.dim_out, keep="a")
    reduced /= space.dim_out
    gauge = reduced - (np.trace(reduced) / space.dim_in) * np.eye(space.dim_in)
    remainder = diff - np.kron(gauge, np.eye(space.dim_out))
    return float(np.abs(remainder).max())


def evaluate(effect: Effect, state) -> float:
    """Probability assigned by an effect to a state, clamped to [0, 1].

    The state may be vertex weights or an ambient point (polytope), a
    density operator (quantum), or a Choi operator or object exposing an
    ``omega`` attribute (process).
    """
    if isinstance(effect, PolytopeEffect):
        weights = effect.space.coerce_state(state)
        raw = float(weights @ effect.vertex_values)
    elif isinstance(effect, QuantumEffect):
        rho = effect.space.coerce_state(state)
        raw = float(np.trace(rho @ effect.op).real)
    elif isinstance(effect, ProcessEffect):
        omega = effect.space.coerce_state(state)
        raw = float(np.trace(omega @ effect.op).real)
    else:
        raise SpaceMismatch(f"unknown effect type {type(effect).__name__}")
    return min(1.0, max(0.0, raw))


# ---------------------------------------------------------------------------
# Observables
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Observable:
    """Finite map from integer outcomes to effects, normalized to the unit.

    Construction enforces structural consistency only (outcome labels,
    matching spaces); the numerical invariants are inspected with
    :func:`validate_observable`, which reports instead of raising so that
    noisy external data can be examined.
    """

    space: StateSpace
    effects: Mapping[int, Effect]

    def __post_init__(self):
        effects = dict(self.effects)
        if not effects:
            raise InvalidParameter("observable needs at least one outcome")
        for outcome, effect in effects.items():
            if not isinstance(outcome, numbers.Integral) or outcome < 0:
                raise InvalidParameter(
                    f"outcomes must be non-negative integers, got {outcome!r}"
                )
            if not isinstance(effect, Effect):
                raise InvalidParameter(f"effect for outcome {outcome} is not an Effect")
            if effect.space != self.space:
                raise SpaceMismatch(
                    f"effect for outcome {outcome} lives on a different space"
                )
        object.__setattr__(
            self, "effects", {int(x): effects[x] for x in sorted(effects)}
        )

    @property
    def outcomes(self) -> tuple[int, ...]:
        return tuple(self.effects)

    @property
    def n_outcomes(self) -> int:
        return len(self.effects)

    def effect(self, outcome: int) -> Effect:
        try:
            return self.effects[outcome]
        except KeyError:
            raise _outcome_error(outcome, self.outcomes) from None

    def effects_in_order(self) -> list[Effect]:
        return [self.effects[x] for x in self.outcomes]


def _outcome_error(outcome, outcomes):
    from .errors import OutcomeMismatch

    return OutcomeMismatch(f"outcome {outcome} not among {outcomes}")


@dataclass(frozen=True, eq=False)
class TrivialObservable:
    """Outcome distribution that every state produces alike."""

    outcomes: tuple[int, ...]
    probs: np.ndarray

    def __post_init__(self):
        outcomes = tuple(int(x) for x in self.outcomes)
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        if len(outcomes) != probs.size:
            raise InvalidParameter("outcomes and probs must have equal length")
        if len(set(outcomes)) != len(outcomes) or any(x < 0 for x in outcomes):
            raise InvalidParameter("outcomes must be distinct non-negative integers")
        if probs.min(initial=0.0) < -TRIVIAL_PROB_TOL:
            raise InvalidParameter("probabilities must be non-negative")
        if abs(probs.sum() - 1.0) > TRIVIAL_PROB_TOL:
            raise InvalidParameter("probabilities must sum to 1")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "probs", _readonly(np.clip(probs, 0.0, None)))

    @classmethod
    def uniform(cls, outcomes: Sequence[int]) -> "TrivialObservable":
        n = len(outcomes)
        return cls(tuple(outcomes), np.full(n, 1.0 / n))

    def prob(self, outcome: int) -> float:
        try:
            return float(self.probs[self.outcomes.index(outcome)])
        except ValueError:
            raise _outcome_error(outcome, self.outcomes) from None


def embed_trivial(
    trivial: TrivialObservable, space: StateSpace, xi=None
) -> Observable:
    """Represent a trivial observable as an observable on a concrete space.

    For process spaces the effects are ``p_x xi (x) identity``; the input
    state ``xi`` defaults to the maximally mixed one. Different choices of
    ``xi`` represent the same trivial observable.
    """
    if isinstance(space, PolytopeSpace):
        effects = {
            x: polytope_effect_from_affine(space, np.zeros(space.ambient_dim), p)
            for x, p in zip(trivial.outcomes, trivial.probs)
        }
    elif isinstance(space, QuantumSpace):
        eye = np.eye(space.dim)
        effects = {
            x: QuantumEffect(space, p * eye)
            for x, p in zip(trivial.outcomes, trivial.probs)
        }
    elif isinstance(space, ProcessSpace):
        if xi is None:
            xi = np.eye(space.dim_in) / space.dim_in
        xi = linalg.as_hermitian(xi, tol=STATE_TOL)
        if xi.shape != (space.dim_in, space.dim_in):
            raise InvalidParameter("xi must act on the input system")
        if abs(np.trace(xi).real - 1.0) > STATE_TOL or not linalg.is_psd(xi, STATE_TOL):
            raise InvalidParameter("xi must be a density operator")
        block = np.kron(xi, np.eye(space.dim_out))
        effects = {
            x: ProcessEffect(space, p * block)
            for x, p in zip(trivial.outcomes, trivial.probs)
        }
    else:
        raise SpaceMismatch(f"unknown space type {type(space).__name__}")
    return Observable(space, effects)


def mix(a: Observable, b: Observable, t: float) -> Observable:
    """Mixture ``t * a + (1 - t) * b`` on the union of the outcome sets.

    Outcomes missing from one observable contribute a zero effect, so the
    result is an observable on ``outcomes(a) | outcomes(b)``.
    """
    if not isinstance(t, numbers.Real) or not 0.0 <= float(t) <= 1.0:
        raise InvalidParameter(f"mixing parameter must lie in [0, 1], got {t!r}")
    if a.space != b.space:
        raise SpaceMismatch("cannot mix observables from different spaces")
    t = float(t)
    effects = {}
    for z in sorted(set(a.outcomes) | set(b.outcomes)):
        ea = a.effects.get(z)
        eb = b.effects.get(z)
        if ea is not None and eb is not None:
            effects[z] = t * ea + (1.0 - t) * eb
        elif ea is not None:
            effects[z] = t * ea
        else:
            effects[z] = (1.0 - t) * eb
    return Observable(a.space, effects)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str
    magnitude: float


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.issues

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(f"{i.code}: {i.message}" for i in self.issues)


def validate_observable(obs: Observable, tol: float = NORMALIZATION_TOL) -> ValidationReport:
    """Report every violated observable invariant together with its size.

    An empty report means the observable satisfies the effect bounds and
    the normalization of its space variant within ``tol``.
    """
    issues: list[ValidationIssue] = []
    space = obs.space

    if isinstance(space, PolytopeSpace):
        for x in obs.outcomes:
            values = obs.effects[x].vertex_values
            low = float(values.min())
            high = float(values.max())
            if low < -tol:
                issues.append(ValidationIssue(
                    "effect-lower-bound",
                    f"effect {x} reaches {low:.3e} at a vertex",
                    -low,
                ))
            if high > 1.0 + tol:
                issues.append(ValidationIssue(
                    "effect-upper-bound",
                    f"effect {x} reaches {high:.3e} at a vertex",
                    high - 1.0,
                ))
        total = sum(e.vertex_values for e in obs.effects_in_order())
        dev = float(np.abs(total - 1.0).max())
        if dev > tol:
            issues.append(ValidationIssue(
                "normalization",
                f"effects sum to the unit up to {dev:.3e} at the vertices",
                dev,
            ))

    elif isinstance(space, QuantumSpace):
        for x in obs.outcomes:
            op = obs.effects[x].op
            low = linalg.min_eigenvalue(op)
            high = linalg.max_eigenvalue(op)
            if low < -tol:
                issues.append(ValidationIssue(
                    "effect-lower-bound",
                    f"effect {x} has eigenvalue {low:.3e}",
                    -low,
                ))
            if high > 1.0 + tol:
                issues.append(ValidationIssue(
                    "effect-upper-bound",
                    f"effect {x} has eigenvalue {high:.3e}",
                    high - 1.0,
                ))
        total = sum(e.op for e in obs.effects_in_order())
        dev = float(np.linalg.norm(total - np.eye(space.dim)))
        if dev > tol:
            issues.append(ValidationIssue(
                "normalization",
                f"effects sum to the identity up to Frobenius error {dev:.3e}",
                dev,
            ))

    elif isinstance(space, ProcessSpace):
        total = sum(e.op for e in obs.effects_in_order())
        rho = linalg.partial_trace(total, space.dim_in, space.dim_out, keep="a")
        rho = rho / space.dim_out
        residual = float(np.linalg.norm(total - np.kron(rho, np.eye(space.dim_out))))
        if residual > tol:
            issues.append(ValidationIssue(
                "normalization-factorization",
                f"effect sum is not of the form rho (x) identity "
                f"(Frobenius residual {residual:.3e})",
                residual,
            ))
        trace_dev = abs(float(np.trace(rho).real) - 1.0)
        if trace_dev > tol:
            issues.append(ValidationIssue(
                "normalization-trace",
                f"normalization state has trace 1 up to {trace_dev:.3e}",
                trace_dev,
            ))
        rho_min = linalg.min_eigenvalue(rho)
        if rho_min < -tol:
            issues.append(ValidationIssue(
                "normalization-psd",
                f"normalization state has eigenvalue {rho_min:.3e}",
                -rho_min,
            ))
        bound = np.kron(rho, np.eye(space.dim_out))
        for x in obs.outcomes:
            op = obs.effects[x].op
            low = linalg.min_eigenvalue(op)
            if low < -tol:
                issues.append(ValidationIssue(
                    "effect-lower-bound",
                    f"effect {x} has eigenvalue {low:.3e}",
                    -low,
                ))
            gap = linalg.min_eigenvalue(bound - op)
            if gap < -tol:
                issues.append(ValidationIssue(
                    "effect-upper-bound",
                    f"effect {x} exceeds the normalization bound by {-gap:.3e}",
                    -gap,
                ))
    else:
        issues.append(ValidationIssue(
            "unknown-space", f"unknown space type {type(space).__name__}", 0.0
        ))

    return ValidationReport(tuple(issues))


# ---------------------------------------------------------------------------
# Randomized instances (seeded; used by property tests and the CLI)
# ---------------------------------------------------------------------------

def random_polytope_state(space: PolytopeSpace, rng: np.random.Generator) -> np.ndarray:
    """Random hull point given as vertex weights (flat Dirichlet)."""
    return rng.dirichlet(np.ones(space.n_vertices))


def random_polytope_observable(
    space: PolytopeSpace, n_outcomes: int, rng: np.random.Generator
) -> Observable:
    """Random valid observable built from random affine functionals.

    Random affine functionals are shifted to sum to the unit and then mixed
    toward the uniform trivial observable just enough to land inside [0, 1]
    at every vertex.
    """
    if n_outcomes < 1:
        raise InvalidParameter("need at least one outcome")
    raw = np.empty((n_outcomes, space.n_vertices))
    for i in range(n_outcomes):
        lin = rng.normal(scale=0.5, size=space.ambient_dim)
        off = rng.normal(scale=0.5)
        raw[i] = space.vertices @ lin + off
    # shift so the functionals sum to the constant 1 at every vertex
    correction = (1.0 - raw.sum(axis=0)) / n_outcomes
    raw = raw + correction
    lo = raw.min()
    hi = raw.max()
    # mix toward the uniform distribution until all values lie in [0, 1]
    gamma = 1.0
    uniform = 1.0 / n_outcomes
    if lo < 0.0:
        gamma = min(gamma, uniform / (uniform - lo))
    if hi > 1.0:
        gamma = min(gamma, (1.0 - uniform) / (hi - uniform))
    gamma *= 0.999
    squashed = gamma * raw + (1.0 - gamma) * uniform
    effects = {
        x: polytope_effect_from_vertex_values(space, squashed[x])
        for x in range(n_outcomes)
    }
    return Observable(space, effects)


def squit_space() -> PolytopeSpace:
    """The square-bit polytope: four planar vertices with v1 + v3 = v2 + v4."""
    return PolytopeSpace(np.array([
        [1.0, 0.0],
        [0.0, 1.0],
        [-1.0, 0.0],
        [0.0, -1.0],
    ]))


def regular_polygon_space(n: int) -> PolytopeSpace:
    """Regular polygon with ``n`` vertices on the unit circle."""
    if n < 3:
        raise InvalidParameter("polygon needs at least 3 vertices")
    angles = 2.0 * np.pi * np.arange(n) / n
    return PolytopeSpace(np.column_stack([np.cos(angles), np.sin(angles)]))


# ---------------------------------------------------------------------------
# JSON serialization (schema version 1)
# ---------------------------------------------------------------------------

def space_to_dict(space: StateSpace) -> dict:
    if isinstance(space, PolytopeSpace):
        return {"kind": "polytope", "vertices": space.vertices.tolist()}
    if isinstance(space, QuantumSpace):
        return {"kind": "quantum", "dim": space.dim}
    if isinstance(space, ProcessSpace):
        return {"kind": "process", "dim_in": space.dim_in, "dim_out": space.dim_out}
    raise SpaceMismatch(f"unknown space type {type(space).__name__}")


def space_from_dict(payload: dict) -> StateSpace:
    kind = payload.get("kind")
    if kind == "polytope":
        return PolytopeSpace(np.asarray(payload["vertices"], dtype=float))
    if kind == "quantum":
        return QuantumSpace(int(payload["dim"]))
    if kind == "process":
        return ProcessSpace(int(payload["dim_in"]), int(payload["dim_out"]))
    raise InvalidParameter(f"unknown space kind {kind!r}")


def _effect_to_dict(effect: Effect) -> dict:
    if isinstance(effect, PolytopeEffect):
        return {"vertex_values": effect.vertex_values.tolist()}
    return {"op": linalg.matrix_to_dict(effect.op)}


def _effect_from_dict(space: StateSpace, payload: dict) -> Effect:
    if isinstance(space, PolytopeSpace):
        return polytope_effect_from_vertex_values(
            space, np.asarray(payload["vertex_values"], dtype=float)
        )
    op = linalg.matrix_from_dict(payload["op"])
    if isinstance(space, QuantumSpace):
        return QuantumEffect(space, op)
    return ProcessEffect(space, op)


def observable_to_dict(obs: Observable) -> dict:
    return {
        "v": 1,
        "space": space_to_dict(obs.space),
        "outcomes": list(obs.outcomes),
        "effects": [_effect_to_dict(obs.effects[x]) for x in obs.outcomes],
    }


def observable_from_dict(payload: dict) -> Observable:
    if payload.get("v") != 1:
        raise InvalidParameter(f"unsupported schema version {payload.get('v')!r}")
    space = space_from_dict(payload["space"])
    outcomes = [int(x) for x in payload["outcomes"]]
    effect_payloads = payload["effects"]
    if len(outcomes) != len(effect_payloads):
        raise InvalidParameter("outcomes and effects must have equal length")
    effects = {
        x: _effect_from_dict(space, e) for x, e in zip(outcomes, effect_payloads)
    }
    return Observable(space, effects)
