"""Shared construction helpers for the test suite."""

from __future__ import annotations

import numpy as np

import gptobs as g
from gptobs import processes


def squit_observable(values_plus) -> g.Observable:
    """Binary squit observable from the vertex values of its '+' effect."""
    space = g.squit_space()
    plus = g.polytope_effect_from_vertex_values(space, values_plus)
    minus = g.polytope_effect_from_vertex_values(
        space, [1.0 - v for v in values_plus]
    )
    return g.Observable(space, {0: plus, 1: minus})


def squit_pair(alpha: float, beta: float):
    """The canonical squit pair with noise contents alpha and beta."""
    return (
        squit_observable([alpha, alpha, 1.0, 1.0]),
        squit_observable([beta, 1.0, 1.0, beta]),
    )


def observables_close(a: g.Observable, b: g.Observable, tol: float) -> bool:
    if a.outcomes != b.outcomes:
        return False
    return all(
        g.effect_deviation(a.effects[x], b.effects[x]) <= tol for x in a.outcomes
    )


def random_state_for(space, rng: np.random.Generator):
    """Random state in whichever representation the space expects."""
    from gptobs.core import PolytopeSpace, ProcessSpace, QuantumSpace
    from gptobs.quantum import random_density

    if isinstance(space, PolytopeSpace):
        return rng.dirichlet(np.ones(space.n_vertices))
    if isinstance(space, QuantumSpace):
        return random_density(space.dim, rng)
    if isinstance(space, ProcessSpace):
        return processes.random_channel(space.dim_in, space.dim_out, rng)
    raise TypeError(f"unknown space {space!r}")


def random_observable_for(
    kind: str, rng: np.random.Generator, space=None
) -> g.Observable:
    """Random valid observable on one of the three backends."""
    from gptobs.core import random_polytope_observable

    if kind == "polytope":
        if space is None:
            space = g.squit_space() if rng.integers(2) else g.regular_polygon_space(5)
        return random_polytope_observable(space, int(rng.integers(2, 5)), rng)
    if kind == "quantum":
        dim = space.dim if space is not None else int(rng.integers(2, 4))
        return g.random_povm(dim, int(rng.integers(2, 5)), rng)
    if kind == "process":
        if space is None:
            space = g.ProcessSpace(2, 2)
        return processes.random_ppovm(
            space.dim_in, space.dim_out, int(rng.integers(2, 4)), rng
        ).observable
    raise ValueError(f"unknown backend kind {kind!r}")


def noisy_observable_for(
    kind: str, rng: np.random.Generator, min_noise: float, space=None
) -> g.Observable:
    """Random observable mixed with enough uniform noise to certify joints.

    For the process backend, noise content means the eigenvalue lower
    bound, which is capped by the inverse input dimension; an input
    dimension of 1 keeps the requested levels reachable.
    """
    if kind == "process" and space is None:
        space = g.ProcessSpace(1, 3)
    base = random_observable_for(kind, rng, space=space)
    trivial = g.TrivialObservable.uniform(base.outcomes)
    weight = min_noise + (1.0 - min_noise) * 0.5 * rng.random()
    return g.mix(g.embed_trivial(trivial, base.space), base, weight)


def shared_space_for(kind: str, rng: np.random.Generator):
    """Pick one space of the requested backend kind."""
    if kind == "polytope":
        return g.squit_space() if rng.integers(2) else g.regular_polygon_space(5)
    if kind == "quantum":
        return g.QuantumSpace(int(rng.integers(2, 4)))
    if kind == "process":
        return g.ProcessSpace(1, 3)
    raise ValueError(f"unknown backend kind {kind!r}")
