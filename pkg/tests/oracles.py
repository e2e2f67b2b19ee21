"""Independent oracle computations used to check the library.

Everything here deliberately avoids the code paths under test: minima are
estimated by sampling instead of diagonalization, process probabilities
come from explicit Kraus evolution of a shared entangled pair, and the LP
cross-check re-derives the joint-observable constraints in a different
variable space and hands them to scipy.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog


def sampled_min_rayleigh(
    op: np.ndarray, n_samples: int = 100_000, seed: int = 0, rounds: int = 20
) -> float:
    """Stochastic minimization of the Rayleigh quotient over unit vectors.

    Draws ``n_samples`` random states in ``rounds`` batches: the first
    batch is uniform, later batches concentrate around the incumbent best
    state with geometrically shrinking spread. Returns the smallest
    sampled quotient; never diagonalizes, so every returned value is an
    upper bound on the true minimum.
    """
    op = np.asarray(op, dtype=complex)
    d = op.shape[0]
    rng = np.random.default_rng(seed)
    batch = max(1, n_samples // rounds)
    best_val = np.inf
    best_vec = None
    sigma = 1.5
    shrink = (1e-3 / sigma) ** (1.0 / max(1, rounds - 2))
    for r in range(rounds):
        noise = rng.normal(size=(batch, d)) + 1j * rng.normal(size=(batch, d))
        if r == 0 or best_vec is None:
            cand = noise
        else:
            cand = best_vec[None, :] + sigma * noise
            sigma *= shrink
        cand /= np.linalg.norm(cand, axis=1, keepdims=True)
        vals = np.einsum("bi,ij,bj->b", cand.conj(), op, cand).real
        i = int(vals.argmin())
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_vec = cand[i]
    return best_val


def sampled_effect_minima_polytope(obs, n_samples: int = 10_000, seed: int = 0):
    """Per-effect minima over sampled hull points, via affine coefficients.

    The sample set is the vertices themselves plus random convex mixtures;
    effects are evaluated at the ambient points through their linear part
    and offset, independently of the stored vertex values.
    """
    space = obs.space
    rng = np.random.default_rng(seed)
    n_random = max(0, n_samples - space.n_vertices)
    weights = np.vstack([
        np.eye(space.n_vertices),
        rng.dirichlet(np.ones(space.n_vertices), size=n_random),
    ])
    points = weights @ space.vertices
    minima = {}
    for x in obs.outcomes:
        effect = obs.effects[x]
        values = points @ effect.linear + effect.offset
        minima[x] = float(values.min())
    return minima


def born_tester_probabilities(kraus_ops, effect_ops, dim_in: int, dim_out: int):
    """Outcome probabilities of a process measurement by direct simulation.

    Prepares the normalized maximally entangled pair on the input system,
    evolves one half through the channel given by its Kraus operators, and
    measures ``dim_in * M_x`` on the joint output (the scale matches the
    unnormalized pair convention of the Choi pairing).
    """
    phi = np.zeros(dim_in * dim_in, dtype=complex)
    for i in range(dim_in):
        phi[i * dim_in + i] = 1.0
    phi /= np.sqrt(dim_in)
    state = np.outer(phi, phi.conj())
    eye_in = np.eye(dim_in)
    evolved = np.zeros((dim_in * dim_out, dim_in * dim_out), dtype=complex)
    for k in kraus_ops:
        lifted = np.kron(eye_in, np.asarray(k, dtype=complex))
        evolved += lifted @ state @ lifted.conj().T
    return np.array([
        dim_in * float(np.trace(evolved @ np.asarray(m)).real)
        for m in effect_ops
    ])


def scipy_joint_feasible(observables, tol: float = 1e-9) -> bool:
    """Joint-observable feasibility on a polytope, decided by scipy.

    Independent formulation: the unknowns are the vertex values of each
    cell effect (not affine coefficients). Constraints: values are
    non-negative, respect every affine dependency among the vertices, sum
    to one across cells at each vertex, and reproduce the marginals.
    """
    space = observables[0].space
    verts = space.vertices
    n_verts = verts.shape[0]

    sizes = [obs.n_outcomes for obs in observables]
    n_cells = int(np.prod(sizes))

    # affine dependencies: null space of [V^T; 1^T]
    stacked = np.vstack([verts.T, np.ones(n_verts)])
    _, s, vh = np.linalg.svd(stacked)
    null_rows = vh[np.sum(s > 1e-12 * s[0]):]

    def cell_labels(code):
        labels = []
        for size, obs in zip(reversed(sizes), reversed(observables)):
            code, idx = divmod(code, size)
            labels.append(obs.outcomes[idx])
        return tuple(reversed(labels))

    n_vars = n_cells * n_verts
    rows = []
    rhs = []
    for c in range(n_cells):
        for dep in null_rows:
            row = np.zeros(n_vars)
            row[c * n_verts:(c + 1) * n_verts] = dep
            rows.append(row)
            rhs.append(0.0)
    for k in range(n_verts):
        row = np.zeros(n_vars)
        row[k::n_verts] = 1.0
        rows.append(row)
        rhs.append(1.0)
    for j, obs in enumerate(observables):
        for x in obs.outcomes:
            members = [
                c for c in range(n_cells) if cell_labels(c)[j] == x
            ]
            target = obs.effects[x].vertex_values
            for k in range(n_verts):
                row = np.zeros(n_vars)
                for c in members:
                    row[c * n_verts + k] = 1.0
                rows.append(row)
                rhs.append(float(target[k]))

    result = linprog(
        c=np.zeros(n_vars),
        A_eq=np.asarray(rows),
        b_eq=np.asarray(rhs),
        bounds=[(0.0, None)] * n_vars,
        method="highs",
    )
    if result.status == 0:
        return True
    if result.status == 2:
        return False
    raise RuntimeError(f"scipy linprog returned status {result.status}")
