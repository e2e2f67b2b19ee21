"""Joint observables, marginals, and compatibility certification.

Two certification routes are provided:

* a sufficient condition valid on every backend: if the noise contents of
  ``m`` observables sum to at least ``m - 1``, an explicit joint observable
  is constructed from their trivial-component witnesses;
* an exact decision for polytope backends, by linear-programming
  feasibility of the joint-observable constraints over the vertices, with
  a primal witness on success and a dual ray on failure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg, lp
from .channels import ClassicalChannel
from .core import (
    Effect,
    Observable,
    PolytopeSpace,
    ProcessSpace,
    effect_deviation,
    embed_trivial,
    mix,
    observable_to_dict,
    observable_from_dict,
    polytope_effect_from_affine,
    zero_effect,
)
from .errors import (
    InsufficientNoise,
    InvalidParameter,
    OutcomeMismatch,
    SizeCap,
    SpaceMismatch,
)
from .grid import OutcomeGrid
from .noise import noise_content

MARGINAL_TOL = 1e-9
INEQUALITY_TOL = 1e-12
GRID_CELL_CAP = 10_000


class Status(enum.Enum):
    COMPATIBLE_CERTIFIED = "compatible-certified"
    INCOMPATIBLE_CERTIFIED = "incompatible-certified"
    UNDECIDED = "undecided"


@dataclass(frozen=True, eq=False)
class JointObservable:
    """Observable on a product outcome grid with its tuple encoding.

    The base observable's outcomes are the flat codes ``0..cells-1`` of the
    grid; ``factors`` records the outcome sets of the marginal observables.
    """

    base: Observable
    grid: OutcomeGrid

    def __post_init__(self):
        if self.base.outcomes != tuple(range(self.grid.num_cells)):
            raise InvalidParameter(
                "base outcomes must be the flat codes 0..cells-1 of the grid"
            )

    @property
    def factors(self) -> tuple[tuple[int, ...], ...]:
        return self.grid.factors

    def cell(self, labels: Sequence[int]) -> Effect:
        return self.base.effects[self.grid.encode(labels)]

    def to_dict(self) -> dict:
        return {
            "v": 1,
            "factors": [list(f) for f in self.grid.factors],
            "base": observable_to_dict(self.base),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "JointObservable":
        grid = OutcomeGrid(tuple(tuple(f) for f in payload["factors"]))
        return cls(observable_from_dict(payload["base"]), grid)


@dataclass(frozen=True, eq=False)
class CompatibilityVerdict:
    """Certification outcome with the evidence that produced it.

    ``inequality_value`` is the sum of the observables' noise contents.
    A compatible verdict carries a joint-observable witness; an
    incompatible verdict carries a certificate (LP dual ray, or a table of
    ranks for the spanning-set argument).
    """

    status: Status
    inequality_value: float
    witness: JointObservable | None = None
    certificate: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "inequality_value": self.inequality_value,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "certificate": None
            if self.certificate is None
            else np.asarray(self.certificate).tolist(),
        }


def marginal(joint: JointObservable, factor: int) -> Observable:
    """Marginal observable of one factor, summing effects over the others."""
    m = joint.grid.num_factors
    if not 0 <= factor < m:
        raise InvalidParameter(f"factor {factor} out of range for {m} factors")
    outcomes = joint.grid.factors[factor]
    sums: dict[int, Effect] = {}
    for code, labels in joint.grid.cells():
        label = labels[factor]
        effect = joint.base.effects[code]
        sums[label] = effect if label not in sums else sums[label] + effect
    return Observable(joint.base.space, {x: sums[x] for x in outcomes})


def is_joint_of(
    joint: JointObservable,
    observables: Sequence[Observable],
    tol: float = MARGINAL_TOL,
) -> bool:
    """True iff every marginal of ``joint`` matches the given observables.

    Effects are compared as functionals (process representatives are
    compared up to their gauge freedom).
    """
    if len(observables) != joint.grid.num_factors:
        raise OutcomeMismatch(
            f"joint has {joint.grid.num_factors} factors, got "
            f"{len(observables)} observables"
        )
    for j, obs in enumerate(observables):
        if obs.outcomes != joint.grid.factors[j]:
            raise OutcomeMismatch(
                f"factor {j} outcomes {joint.grid.factors[j]} do not match "
                f"observable outcomes {obs.outcomes}"
            )
        if obs.space != joint.base.space:
            raise SpaceMismatch("joint and observables live on different spaces")
    for j, obs in enumerate(observables):
        got = marginal(joint, j)
        for x in obs.outcomes:
            if effect_deviation(got.effects[x], obs.effects[x]) > tol:
                return False
    return True


def max_marginal_deviation(
    joint: JointObservable, observables: Sequence[Observable]
) -> float:
    """Largest effect deviation between the marginals and the targets."""
    worst = 0.0
    for j, obs in enumerate(observables):
        got = marginal(joint, j)
        for x in obs.outcomes:
            worst = max(worst, effect_deviation(got.effects[x], obs.effects[x]))
    return worst


def joint_from_postprocessings(
    parent: Observable, channels: Sequence[ClassicalChannel]
) -> JointObservable:
    """Joint observable of several post-processings of one parent observable.

    Cell ``(x1, ..., xm)`` receives the sum over parent outcomes ``y`` of
    ``prod_j nu_j[y, x_j] * parent_y``; the j-th marginal is then exactly
    the j-th post-processing of the parent.
    """
    if not channels:
        raise InvalidParameter("need at least one channel")
    for nu in channels:
        if nu.in_outcomes != parent.outcomes:
            raise OutcomeMismatch(
                f"channel inputs {nu.in_outcomes} do not match parent "
                f"outcomes {parent.outcomes}"
            )
    grid = OutcomeGrid(tuple(nu.out_outcomes for nu in channels))
    effects = {}
    parent_effects = parent.effects_in_order()
    for code, labels in grid.cells():
        cols = [
            nu.out_outcomes.index(label) for nu, label in zip(channels, labels)
        ]
        weights = np.ones(parent.n_outcomes)
        for nu, col in zip(channels, cols):
            weights = weights * nu.matrix[:, col]
        terms = [w * e for w, e in zip(weights, parent_effects) if w != 0.0]
        if not terms:
            cell = zero_effect(parent.space)
        else:
            cell = terms[0]
            for term in terms[1:]:
                cell = cell + term
        effects[code] = cell
    return JointObservable(Observable(parent.space, effects), grid)


def default_joint_weights(noise_values: Sequence[float]) -> np.ndarray:
    """Weights satisfying ``w_j >= 1 - p_j`` whenever the sum condition holds."""
    w = np.asarray(noise_values, dtype=float)
    m = w.size
    slack = w.sum() - (m - 1)
    p = 1.0 - w + slack / m
    p = np.clip(p, 0.0, 1.0)
    total = p.sum()
    if total <= 0.0:
        return np.full(m, 1.0 / m)
    return p / total


def build_joint(
    observables: Sequence[Observable], weights: Sequence[float]
) -> JointObservable:
    """Joint observable from the trivial components of the marginals.

    Each observable is rewritten as ``p_j * C_j + (1 - p_j) * T_j`` by
    rescaling its noise-content witness, which requires noise content at
    least ``1 - p_j``; the joint assigns cell ``(x_1, ..., x_m)`` the
    effect ``sum_j p_j C_j(x_j) * prod_{i != j} q_i(x_i)`` with ``q_i`` the
    distribution of ``T_i``. Every marginal then reproduces its input.

    Raises :class:`InsufficientNoise` with the failing index and deficit
    when some observable cannot spare the required trivial weight.
    """
    if not observables:
        raise InvalidParameter("need at least one observable")
    space = observables[0].space
    for obs in observables[1:]:
        if obs.space != space:
            raise SpaceMismatch("observables live on different spaces")
    p = np.asarray(weights, dtype=float)
    if p.shape != (len(observables),):
        raise InvalidParameter("need one weight per observable")
    if p.min(initial=0.0) < -1e-12:
        raise InvalidParameter("weights must be non-negative")
    if abs(p.sum() - 1.0) > 1e-9:
        raise InvalidParameter("weights must sum to 1")
    p = np.clip(p, 0.0, 1.0)

    decomps = [noise_content(obs) for obs in observables]
    informative = []
    distributions = []
    for j, (obs, dec) in enumerate(zip(observables, decomps)):
        need = 1.0 - p[j]
        if dec.t < need - 1e-12:
            raise InsufficientNoise(j, need - dec.t)
        if p[j] > 0.0:
            # Fold the surplus trivial weight back into the informative part.
            surplus = min(1.0, max(0.0, (dec.t - need) / p[j]))
            xi = None
            if isinstance(space, ProcessSpace):
                total = sum(e.op for e in obs.effects_in_order())
                xi = linalg.partial_trace(
                    total, space.dim_in, space.dim_out, keep="a"
                ) / space.dim_out
            embedded = embed_trivial(dec.trivial, space, xi=xi)
            informative.append(mix(embedded, dec.residual, surplus))
        else:
            informative.append(None)
        distributions.append(dict(zip(dec.trivial.outcomes, dec.trivial.probs)))

    grid = OutcomeGrid(tuple(obs.outcomes for obs in observables))
    effects = {}
    for code, labels in grid.cells():
        terms = []
        for j, obs in enumerate(observables):
            if p[j] == 0.0 or informative[j] is None:
                continue
            scalar = p[j]
            for i, label in enumerate(labels):
                if i != j:
                    scalar *= distributions[i][label]
            if scalar != 0.0:
                terms.append(scalar * informative[j].effects[labels[j]])
        if not terms:
            cell = zero_effect(space)
        else:
            cell = terms[0]
            for term in terms[1:]:
                cell = cell + term
        effects[code] = cell
    return JointObservable(Observable(space, effects), grid)


def sufficient_compatible(
    observables: Sequence[Observable],
    weights: Sequence[float] | None = None,
) -> CompatibilityVerdict:
    """Certify compatibility when the noise contents sum to ``m - 1`` or more.

    On success the verdict carries an explicit joint observable built from
    the noise witnesses. The condition is sufficient only, so the negative
    branch is ``UNDECIDED``. For process observables the noise contents are
    certified lower bounds, which keeps the positive branch sound.
    """
    if len(observables) < 2:
        raise InvalidParameter("compatibility concerns at least two observables")
    space = observables[0].space
    for obs in observables[1:]:
        if obs.space != space:
            raise SpaceMismatch("observables live on different spaces")
    values = [noise_content(obs).t for obs in observables]
    total = float(sum(values))
    threshold = len(observables) - 1
    if total < threshold - INEQUALITY_TOL:
        return CompatibilityVerdict(Status.UNDECIDED, total)
    if weights is None:
        weights = default_joint_weights(values)
    witness = build_joint(observables, weights)
    return CompatibilityVerdict(Status.COMPATIBLE_CERTIFIED, total, witness=witness)


def lp_compatible_polytope(
    observables: Sequence[Observable],
    tol: float = lp.FEASIBILITY_TOL,
    cell_cap: int = GRID_CELL_CAP,
) -> CompatibilityVerdict:
    """Decide joint-observable existence exactly on a polytope backend.

    Unknowns are the affine coefficients of one effect per grid cell.
    Constraints: non-negativity of every cell effect at every vertex,
    normalization of the cell sum to the unit, and the marginal equalities
    against the given observables. All equalities are imposed at the
    vertices, which span the hull. Feasibility yields a joint-observable
    witness; infeasibility yields a Farkas dual ray over the constraint
    rows.
    """
    if len(observables) < 2:
        raise InvalidParameter("compatibility concerns at least two observables")
    space = observables[0].space
    if not isinstance(space, PolytopeSpace):
        raise SpaceMismatch("the LP decider applies to polytope observables")
    for obs in observables[1:]:
        if obs.space != space:
            raise SpaceMismatch("observables live on different spaces")

    grid = OutcomeGrid(tuple(obs.outcomes for obs in observables))
    n_cells = grid.num_cells
    if n_cells > cell_cap:
        raise SizeCap(f"grid of {n_cells} cells exceeds cap {cell_cap}")

    n_verts = space.n_vertices
    block = space.ambient_dim + 1
    n_vars = n_cells * block
    vertex_rows = np.hstack([space.vertices, np.ones((n_verts, 1))])

    # Non-negativity of every cell effect at every vertex.
    a_ineq = np.zeros((n_cells * n_verts, n_vars))
    for c in range(n_cells):
        a_ineq[c * n_verts:(c + 1) * n_verts, c * block:(c + 1) * block] = vertex_rows
    b_ineq = np.zeros(n_cells * n_verts)

    eq_rows = []
    eq_rhs = []
    # Normalization: the cell sum equals the unit functional at every vertex.
    for v in range(n_verts):
        row = np.zeros(n_vars)
        for c in range(n_cells):
            row[c * block:(c + 1) * block] = vertex_rows[v]
        eq_rows.append(row)
        eq_rhs.append(1.0)
    # Marginals: for each factor, outcome, and vertex.
    cells_by_factor_label: dict[tuple[int, int], list[int]] = {}
    for code, labels in grid.cells():
        for j, label in enumerate(labels):
            cells_by_factor_label.setdefault((j, label), []).append(code)
    for j, obs in enumerate(observables):
        for x in obs.outcomes:
            member_cells = cells_by_factor_label[(j, x)]
            target_values = obs.effects[x].vertex_values
            for v in range(n_verts):
                row = np.zeros(n_vars)
                for c in member_cells:
                    row[c * block:(c + 1) * block] = vertex_rows[v]
                eq_rows.append(row)
                eq_rhs.append(float(target_values[v]))
    a_eq = np.asarray(eq_rows)
    b_eq = np.asarray(eq_rhs)

    result = lp.solve_feasibility(a_ineq, b_ineq, a_eq, b_eq, tol=tol)
    total = float(sum(noise_content(obs).t for obs in observables))

    if result.feasible:
        z = result.solution
        effects = {}
        for code in range(n_cells):
            chunk = z[code * block:(code + 1) * block]
            effects[code] = polytope_effect_from_affine(space, chunk[:-1], chunk[-1])
        witness = JointObservable(Observable(space, effects), grid)
        return CompatibilityVerdict(
            Status.COMPATIBLE_CERTIFIED, total, witness=witness
        )

    certificate = np.concatenate([result.dual_ineq, result.dual_eq])
    return CompatibilityVerdict(
        Status.INCOMPATIBLE_CERTIFIED, total, certificate=certificate
    )
