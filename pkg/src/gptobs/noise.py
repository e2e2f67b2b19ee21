"""Intrinsic noise content of observables with constructive witnesses.

The noise content of an observable is the largest weight with which a
trivial observable can be split off as a convex component. Per backend:

* polytope spaces: exact, as the sum over outcomes of the minimum effect
  value over the vertices;
* quantum spaces: exact, as the sum of the smallest eigenvalues of the
  effect operators;
* process spaces: a certified lower bound from the smallest eigenvalues of
  the stored effect representatives (the true value optimizes over the
  non-unique representatives and may be larger).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .core import (
    Observable,
    PolytopeSpace,
    ProcessSpace,
    QuantumSpace,
    TrivialObservable,
    embed_trivial,
    mix,
    observable_to_dict,
)
from .errors import InvalidParameter, OutcomeMismatch, SpaceMismatch

METHOD_VERTEX_MIN = "vertex-min"
METHOD_MIN_EIGENVALUE = "min-eigenvalue"
METHOD_PPOVM_LOWER_BOUND = "ppovm-lower-bound"

FULL_NOISE_TOL = 1e-12


@dataclass(frozen=True)
class EffectInfimum:
    """Smallest value an effect attains over the states, with its method tag."""

    outcome: int
    value: float
    method: str


@dataclass(frozen=True, eq=False)
class NoiseDecomposition:
    """Split ``A = t * trivial + (1 - t) * residual`` with maximal ``t``.

    ``method`` is ``"ppovm-lower-bound"`` for process observables, where
    ``t`` is only a certified lower bound on the noise content.
    """

    t: float
    trivial: TrivialObservable
    residual: Observable
    method: str

    @property
    def is_exact(self) -> bool:
        return self.method != METHOD_PPOVM_LOWER_BOUND

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "outcomes": list(self.trivial.outcomes),
            "probs": self.trivial.probs.tolist(),
            "method": self.method,
            "residual": observable_to_dict(self.residual),
        }


def _infimum_method(obs: Observable) -> str:
    if isinstance(obs.space, PolytopeSpace):
        return METHOD_VERTEX_MIN
    if isinstance(obs.space, QuantumSpace):
        return METHOD_MIN_EIGENVALUE
    if isinstance(obs.space, ProcessSpace):
        return METHOD_PPOVM_LOWER_BOUND
    raise SpaceMismatch(f"unknown space type {type(obs.space).__name__}")


def effect_infimum(obs: Observable, outcome: int) -> EffectInfimum:
    """Infimum of one effect over the states of its space.

    Exact for polytope spaces (minimum over vertices) and quantum spaces
    (smallest eigenvalue); for process spaces the smallest eigenvalue of
    the stored representative is only a lower bound, and the result is
    tagged accordingly. Tiny negative values from rounding are clipped
    to 0.
    """
    method = _infimum_method(obs)
    effect = obs.effect(outcome)
    if method == METHOD_VERTEX_MIN:
        value = float(effect.vertex_values.min())
    else:
        value = linalg.min_eigenvalue(effect.op)
    return EffectInfimum(int(outcome), min(1.0, max(0.0, value)), method)


def _process_rho(obs: Observable) -> np.ndarray:
    space = obs.space
    total = sum(e.op for e in obs.effects_in_order())
    rho = linalg.partial_trace(total, space.dim_in, space.dim_out, keep="a")
    return rho / space.dim_out


def noise_content(obs: Observable) -> NoiseDecomposition:
    """Largest trivial component of an observable, with witnesses.

    Returns the weight ``t`` (sum of the effect infima), the extracted
    trivial observable, and the residual observable satisfying
    ``mix(embedded trivial, residual, t) == obs``. At ``t == 0`` any
    trivial observable works and the uniform one is returned with the
    observable itself as residual; at ``t == 1`` the observable is trivial
    and the residual repeats its embedding.
    """
    infima = [effect_infimum(obs, x) for x in obs.outcomes]
    method = infima[0].method
    values = np.array([inf.value for inf in infima])
    t = float(values.sum())

    if t <= FULL_NOISE_TOL:
        trivial = TrivialObservable.uniform(obs.outcomes)
        return NoiseDecomposition(0.0, trivial, obs, method)

    t = min(t, 1.0)
    trivial = TrivialObservable(obs.outcomes, values / values.sum())

    xi = _process_rho(obs) if isinstance(obs.space, ProcessSpace) else None
    embedded = embed_trivial(trivial, obs.space, xi=xi)

    if t >= 1.0 - FULL_NOISE_TOL:
        return NoiseDecomposition(1.0, trivial, embedded, method)

    residual_effects = {
        x: (1.0 / (1.0 - t)) * (obs.effects[x] + (-t) * embedded.effects[x])
        for x in obs.outcomes
    }
    residual = Observable(obs.space, residual_effects)
    return NoiseDecomposition(t, trivial, residual, method)


def noise_content_exact_trivial_ppovm(obs: Observable) -> float | None:
    """Exact noise content of a process observable in the fully trivial case.

    A process observable is trivial exactly when every effect factors as
    ``K_x (x) identity``; the factorization is tested by comparing each
    effect against the tensor extension of its partial trace. Returns 1.0
    when every effect factors (residual below 1e-9), None otherwise.
    """
    if not isinstance(obs.space, ProcessSpace):
        raise SpaceMismatch("exact trivial detection applies to process observables")
    space = obs.space
    eye_out = np.eye(space.dim_out)
    for x in obs.outcomes:
        op = obs.effects[x].op
        factor = linalg.partial_trace(op, space.dim_in, space.dim_out, keep="a")
        factor /= space.dim_out
        residual = float(np.abs(op - np.kron(factor, eye_out)).max())
        if residual > 1e-9:
            return None
    return 1.0


@dataclass(frozen=True)
class ConcavityReport:
    """Noise content of a mixture versus the mixture of noise contents."""

    lhs: float
    rhs: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.lhs >= self.rhs - self.tolerance


def concavity_check(
    a: Observable, b: Observable, s: float, tolerance: float = 1e-9
) -> ConcavityReport:
    """Check that noise content is concave under mixing two observables.

    Compares ``w(s a + (1 - s) b)`` against ``s w(a) + (1 - s) w(b)`` for
    observables on the same space and outcome set.
    """
    if not 0.0 <= s <= 1.0:
        raise InvalidParameter(f"mixing parameter must lie in [0, 1], got {s!r}")
    if a.space != b.space:
        raise SpaceMismatch("observables live on different spaces")
    if a.outcomes != b.outcomes:
        raise OutcomeMismatch(
            f"outcome sets differ: {a.outcomes} vs {b.outcomes}"
        )
    lhs = noise_content(mix(a, b, s)).t
    rhs = s * noise_content(a).t + (1.0 - s) * noise_content(b).t
    return ConcavityReport(lhs, rhs, tolerance)
