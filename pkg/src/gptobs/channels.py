"""Classical channels (row-stochastic matrices) and observable post-processing.

Includes the named channel families: identity, copy, relabel, reverse, and
the trivializing channel that maps every observable to a fixed trivial one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import Observable, TrivialObservable, unit_effect, zero_effect
from .errors import InvalidParameter, OutcomeMismatch
from .grid import OutcomeGrid

ROW_SUM_TOL = 1e-12


def _as_outcomes(outcomes: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(x) for x in outcomes)
    if not out:
        raise InvalidParameter("outcome set must be non-empty")
    if len(set(out)) != len(out) or any(x < 0 for x in out):
        raise InvalidParameter("outcomes must be distinct non-negative integers")
    return out


@dataclass(frozen=True, eq=False)
class ClassicalChannel:
    """Row-stochastic transition matrix between two finite outcome sets."""

    in_outcomes: tuple[int, ...]
    out_outcomes: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        ins = _as_outcomes(self.in_outcomes)
        outs = _as_outcomes(self.out_outcomes)
        mat = np.asarray(self.matrix, dtype=float)
        if mat.shape != (len(ins), len(outs)):
            raise InvalidParameter(
                f"matrix shape {mat.shape} does not match "
                f"({len(ins)}, {len(outs)}) outcomes"
            )
        if mat.min(initial=0.0) < -ROW_SUM_TOL or mat.max(initial=0.0) > 1.0 + ROW_SUM_TOL:
            raise InvalidParameter("transition probabilities must lie in [0, 1]")
        sums = mat.sum(axis=1)
        if np.abs(sums - 1.0).max() > ROW_SUM_TOL:
            raise InvalidParameter("rows must sum to 1")
        mat = np.clip(mat, 0.0, 1.0) / sums[:, None]
        mat.setflags(write=False)
        object.__setattr__(self, "in_outcomes", ins)
        object.__setattr__(self, "out_outcomes", outs)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def identity(cls, outcomes: Sequence[int]) -> "ClassicalChannel":
        outs = _as_outcomes(outcomes)
        return cls(outs, outs, np.eye(len(outs)))

    def to_dict(self) -> dict:
        return {
            "in": list(self.in_outcomes),
            "out": list(self.out_outcomes),
            "matrix": self.matrix.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ClassicalChannel":
        return cls(
            tuple(payload["in"]),
            tuple(payload["out"]),
            np.asarray(payload["matrix"], dtype=float),
        )


def post_process(channel: ClassicalChannel, obs: Observable) -> Observable:
    """Apply a classical channel to an observable's outcomes.

    The effect of the new outcome ``y`` is the transition-weighted sum of
    the original effects. Terms with exactly zero weight are skipped, so
    deterministic channels move effects through unchanged.
    """
    if channel.in_outcomes != obs.outcomes:
        raise OutcomeMismatch(
            f"channel inputs {channel.in_outcomes} do not match "
            f"observable outcomes {obs.outcomes}"
        )
    effects = {}
    for j, y in enumerate(channel.out_outcomes):
        terms = [
            channel.matrix[i, j] * obs.effects[x]
            for i, x in enumerate(channel.in_outcomes)
            if channel.matrix[i, j] != 0.0
        ]
        if not terms:
            effects[y] = zero_effect(obs.space)
        else:
            acc = terms[0]
            for term in terms[1:]:
                acc = acc + term
            effects[y] = acc
    return Observable(obs.space, effects)


def compose(second: ClassicalChannel, first: ClassicalChannel) -> ClassicalChannel:
    """Channel applying ``first`` and then ``second``."""
    if first.out_outcomes != second.in_outcomes:
        raise OutcomeMismatch(
            f"outputs {first.out_outcomes} do not match inputs {second.in_outcomes}"
        )
    return ClassicalChannel(
        first.in_outcomes, second.out_outcomes, first.matrix @ second.matrix
    )


def reverse_channel(outcomes) -> ClassicalChannel:
    """Channel replacing each outcome uniformly by one of the others.

    Accepts either the number of outcomes (labels ``0..N-1``) or an
    explicit outcome list; needs at least two outcomes.
    """
    if isinstance(outcomes, (int, np.integer)):
        outs = tuple(range(int(outcomes)))
    else:
        outs = _as_outcomes(outcomes)
    n = len(outs)
    if n < 2:
        raise InvalidParameter("reversing needs at least two outcomes")
    matrix = (np.ones((n, n)) - np.eye(n)) / (n - 1)
    return ClassicalChannel(outs, outs, matrix)


def reverse_observable(obs: Observable) -> Observable:
    """Post-process an observable with the reversing channel on its outcomes."""
    return post_process(reverse_channel(obs.outcomes), obs)


def doubly_reverse(obs: Observable) -> Observable:
    """Reverse an observable twice, in closed form.

    Each effect becomes ``(A_y + (N - 2) u) / (N - 1)^2``, which equals the
    mixture of the original observable with the uniform trivial one at
    weight ``N (N - 2) / (N - 1)^2``. With two outcomes the map is the
    identity, exactly.
    """
    n = obs.n_outcomes
    if n < 2:
        raise InvalidParameter("double reversal needs at least two outcomes")
    unit = unit_effect(obs.space)
    scale = 1.0 / (n - 1) ** 2
    effects = {
        y: scale * (obs.effects[y] + float(n - 2) * unit) for y in obs.outcomes
    }
    return Observable(obs.space, effects)


def doubly_reverse_weight(n: int) -> float:
    """Uniform-noise weight picked up by a double reversal of ``n`` outcomes."""
    if n < 2:
        raise InvalidParameter("double reversal needs at least two outcomes")
    return n * (n - 2) / (n - 1) ** 2


def copy_channel(outcomes: Sequence[int], copies: int) -> ClassicalChannel:
    """Deterministic channel sending ``x`` to the tuple ``(x, ..., x)``.

    Output tuples are flattened to integers with the mixed-radix encoding
    of :class:`OutcomeGrid` over ``copies`` repetitions of the input
    outcome set; the matching grid is available from :func:`copy_grid`.
    """
    if copies < 2:
        raise InvalidParameter("copying needs at least two copies")
    ins = _as_outcomes(outcomes)
    grid = OutcomeGrid((ins,) * copies)
    matrix = np.zeros((len(ins), grid.num_cells))
    for i, x in enumerate(ins):
        matrix[i, grid.encode((x,) * copies)] = 1.0
    return ClassicalChannel(ins, tuple(range(grid.num_cells)), matrix)


def copy_grid(outcomes: Sequence[int], copies: int) -> OutcomeGrid:
    """Decoder for the flattened tuple outcomes of :func:`copy_channel`."""
    return OutcomeGrid((_as_outcomes(outcomes),) * copies)


def relabel_channel(
    mapping: Mapping[int, int],
    in_outcomes: Sequence[int],
    out_outcomes: Sequence[int] | None = None,
) -> ClassicalChannel:
    """Deterministic channel induced by a relabeling function.

    The mapping must be defined on every input outcome; several inputs may
    collapse onto one output.
    """
    ins = _as_outcomes(in_outcomes)
    missing = [x for x in ins if x not in mapping]
    if missing:
        raise InvalidParameter(f"relabeling is undefined on outcomes {missing}")
    if out_outcomes is None:
        outs = tuple(sorted({int(mapping[x]) for x in ins}))
    else:
        outs = _as_outcomes(out_outcomes)
        stray = [x for x in ins if int(mapping[x]) not in outs]
        if stray:
            raise InvalidParameter(
                f"relabeling sends outcomes {stray} outside the output set"
            )
    matrix = np.zeros((len(ins), len(outs)))
    for i, x in enumerate(ins):
        matrix[i, outs.index(int(mapping[x]))] = 1.0
    return ClassicalChannel(ins, outs, matrix)


def trivializing_channel(
    in_outcomes: Sequence[int], trivial: TrivialObservable
) -> ClassicalChannel:
    """Channel with constant rows; post-processing any observable yields ``trivial``."""
    ins = _as_outcomes(in_outcomes)
    row = np.asarray(trivial.probs, dtype=float)
    matrix = np.tile(row, (len(ins), 1))
    return ClassicalChannel(ins, trivial.outcomes, matrix)


def random_channel_matrix(
    in_outcomes: Sequence[int],
    out_outcomes: Sequence[int],
    rng: np.random.Generator,
) -> ClassicalChannel:
    """Random row-stochastic channel (rows drawn from a flat Dirichlet)."""
    ins = _as_outcomes(in_outcomes)
    outs = _as_outcomes(out_outcomes)
    matrix = rng.dirichlet(np.ones(len(outs)), size=len(ins))
    return ClassicalChannel(ins, outs, matrix)
