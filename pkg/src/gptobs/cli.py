"""Command-line front end.

Subcommands:

* ``reproduce <target>``: run one of the packaged result tables and write
  CSV/JSON outputs plus a run manifest; exits 0 only if every check of the
  target passes.
* ``noise <file>``: noise decomposition of an observable JSON file.
* ``compat <files...>``: compatibility verdict for two or more observable
  files, optionally forcing the polytope LP decider.

All outputs are plain UTF-8 JSON/CSV and byte-reproducible for a fixed
seed and package version.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, linalg, processes, quantum
from .channels import doubly_reverse, doubly_reverse_weight, reverse_observable
from .compat import (
    Status,
    is_joint_of,
    lp_compatible_polytope,
    max_marginal_deviation,
    sufficient_compatible,
)
from .core import (
    Observable,
    TrivialObservable,
    embed_trivial,
    mix,
    observable_from_dict,
    polytope_effect_from_vertex_values,
    squit_space,
    validate_observable,
)
from .errors import GptObsError, SpaceMismatch
from .noise import noise_content, noise_content_exact_trivial_ppovm
from .quantum import (
    RegularRank1POVM,
    eigen_condition_report,
    fourier_mub_pair,
    mub_reverse_steering_state,
    random_basis,
    reverse_triple_witness,
    reversed_threshold,
    seeded_independent_bases,
    sharp_povm,
)

DEFAULT_SEED = 0xC0FFEE
DEFAULT_TOL = 1e-9

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INVALID_INPUT = 3
EXIT_INCOMPATIBLE = 4


@dataclass
class RunManifest:
    """Reproducibility record written next to every reproduction output."""

    command: str
    target: str
    seed: int
    tol: float
    version: str
    outputs: list[str] = field(default_factory=list)

    def write(self, path: Path):
        payload = {
            "command": self.command,
            "target": self.target,
            "seed": self.seed,
            "tol": self.tol,
            "version": self.version,
            "outputs": self.outputs,
        }
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: list[str], rows: list[list]):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: Path, payload):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _squit_pair(alpha: float, beta: float) -> tuple[Observable, Observable]:
    space = squit_space()
    a = Observable(space, {
        0: polytope_effect_from_vertex_values(space, [alpha, alpha, 1.0, 1.0]),
        1: polytope_effect_from_vertex_values(
            space, [1.0 - alpha, 1.0 - alpha, 0.0, 0.0]
        ),
    })
    b = Observable(space, {
        0: polytope_effect_from_vertex_values(space, [beta, 1.0, 1.0, beta]),
        1: polytope_effect_from_vertex_values(
            space, [1.0 - beta, 0.0, 0.0, 1.0 - beta]
        ),
    })
    return a, b


# ---------------------------------------------------------------------------
# Reproduction targets
# ---------------------------------------------------------------------------

def _target_reversed_threshold(outdir: Path, seed: int, tol: float):
    """Certification table for reversed regular rank-1 POVM collections.

    CSV columns: d, m, N, constructible, noise_sum, threshold, certified,
    expected, witness_marginal_error.
    """
    rows = []
    ok = True
    for d in (2, 3):
        for m in (2, 3):
            for n in range(2, 9):
                expected = n >= reversed_threshold(d, m)
                if n < d:
                    rows.append([d, m, n, False, "", m - 1, False, expected, ""])
                    ok = ok and not expected
                    continue
                base = RegularRank1POVM.harmonic(d, n).observable()
                reversed_povms = [reverse_observable(base)] * m
                report = eigen_condition_report(reversed_povms)
                certified = report.certified
                marginal_err = ""
                if certified:
                    verdict = sufficient_compatible(reversed_povms)
                    marginal_err = max_marginal_deviation(
                        verdict.witness, reversed_povms
                    )
                    ok = ok and marginal_err < tol
                ok = ok and certified == expected
                rows.append([
                    d, m, n, True, report.total, m - 1,
                    certified, expected, marginal_err,
                ])
    path = outdir / "reversed_threshold.csv"
    _write_csv(path, [
        "d", "m", "N", "constructible", "noise_sum", "threshold",
        "certified", "expected", "witness_marginal_error",
    ], rows)
    return ok, [path]


def _target_squit(outdir: Path, seed: int, tol: float):
    """LP verdicts on the 11x11 grid of squit observable pairs.

    CSV columns: alpha, beta, noise_a, noise_b, lp_status, expected_compatible,
    agrees.
    """
    rows = []
    ok = True
    for i in range(11):
        for j in range(11):
            alpha = i / 10
            beta = j / 10
            a, b = _squit_pair(alpha, beta)
            wa = noise_content(a).t
            wb = noise_content(b).t
            ok = ok and wa == alpha and wb == beta
            verdict = lp_compatible_polytope([a, b], tol=tol)
            expected = alpha + beta >= 1.0 - tol
            agrees = (verdict.status is Status.COMPATIBLE_CERTIFIED) == expected
            if verdict.status is Status.COMPATIBLE_CERTIFIED:
                agrees = agrees and is_joint_of(verdict.witness, [a, b], tol)
            ok = ok and agrees
            rows.append([
                alpha, beta, wa, wb, verdict.status.value, expected, agrees,
            ])
    path = outdir / "squit_grid.csv"
    _write_csv(path, [
        "alpha", "beta", "noise_a", "noise_b", "lp_status",
        "expected_compatible", "agrees",
    ], rows)
    return ok, [path]


def _target_mub_sigma(outdir: Path, seed: int, tol: float):
    """Witness-state checks for the reversed Fourier pairs, d in 3..6.

    CSV columns: d, min_eig, trace_dev, max_dev_basis_a, max_dev_basis_b, ok.
    """
    rows = []
    ok = True
    for d in (3, 4, 5, 6):
        try:
            sigma = mub_reverse_steering_state(d)
        except GptObsError:
            rows.append([d, "", "", "", "", False])
            ok = False
            continue
        min_eig = linalg.min_eigenvalue(sigma)
        trace_dev = abs(float(np.trace(sigma).real) - 1.0)
        comp, four = fourier_mub_pair(d)
        devs = []
        for povm in (comp, four):
            worst = 0.0
            for i in povm.outcomes:
                expected = 0.0 if i == 0 else 1.0 / (d - 1)
                got = float(np.trace(povm.effects[i].op @ sigma).real)
                worst = max(worst, abs(got - expected))
            devs.append(worst)
        good = min_eig >= -1e-10 and trace_dev <= 1e-10 and max(devs) <= 1e-10
        ok = ok and good
        rows.append([d, min_eig, trace_dev, devs[0], devs[1], good])
    path = outdir / "mub_sigma.csv"
    _write_csv(path, [
        "d", "min_eig", "trace_dev", "max_dev_basis_a", "max_dev_basis_b", "ok",
    ], rows)
    return ok, [path]


def _target_triple_witness(outdir: Path, seed: int, tol: float):
    """Spanning-set certificate for a seeded basis triple, plus a degenerate control."""
    b1, b2, b3 = seeded_independent_bases(seed)
    verdict = reverse_triple_witness(b1, b2, b3)
    degenerate = reverse_triple_witness(
        quantum.computational_basis(3), quantum.computational_basis(3),
        quantum.fourier_basis(3),
    )
    payload = {
        "seed": seed,
        "status": verdict.status.value,
        "ranks": np.asarray(verdict.certificate).tolist(),
        "degenerate_status": degenerate.status.value,
    }
    ok = (
        verdict.status is Status.INCOMPATIBLE_CERTIFIED
        and degenerate.status is Status.UNDECIDED
    )
    path = outdir / "triple_witness.json"
    _write_json(path, payload)
    return ok, [path]


def _target_ppovm_gap(outdir: Path, seed: int, tol: float):
    """Gap between the eigenvalue lower bound and the exact trivial value."""
    rng = np.random.default_rng(seed)
    probs = rng.dirichlet(np.ones(3))
    ppovm = processes.rank_one_trivial_ppovm(probs, 2)
    lower = noise_content(ppovm.observable).t
    exact = noise_content_exact_trivial_ppovm(ppovm.observable)
    payload = {
        "seed": seed,
        "probs": probs.tolist(),
        "eigenvalue_lower_bound": lower,
        "exact_trivial_value": exact,
    }
    ok = lower == 0.0 and exact == 1.0
    path = outdir / "ppovm_gap.json"
    _write_json(path, payload)
    return ok, [path]


def _target_doubly_reverse(outdir: Path, seed: int, tol: float):
    """Closed-form double reversal and its certification range.

    CSV columns: N, m, noise_sum, threshold, certified, expected.
    """
    rng_seed = seed
    ok = True
    # two outcomes: double reversal is the identity, bit for bit
    for k in range(5):
        povm = quantum.random_povm(2, 2, rng_seed + k)
        roundtrip = doubly_reverse(povm)
        for x in povm.outcomes:
            ok = ok and np.array_equal(
                roundtrip.effects[x].op, povm.effects[x].op
            )
    rows = []
    for n in (3, 4, 5):
        lam = doubly_reverse_weight(n)
        basis_povms = [
            sharp_povm(random_basis(n, np.random.default_rng(rng_seed + 100 + i)))
            for i in range(int((n - 1) ** 2) + 2)
        ]
        doubly = [doubly_reverse(p) for p in basis_povms]
        # closed form equals the uniform-noise mixture within 1e-12
        uniform = embed_trivial(
            TrivialObservable.uniform(basis_povms[0].outcomes),
            basis_povms[0].space,
        )
        mixture = mix(basis_povms[0], uniform, 1.0 - lam)
        worst = max(
            float(np.abs(doubly[0].effects[x].op - mixture.effects[x].op).max())
            for x in doubly[0].outcomes
        )
        ok = ok and worst <= 1e-12
        for m in range(2, int((n - 1) ** 2) + 2):
            report = eigen_condition_report(doubly[:m])
            expected = m <= (n - 1) ** 2
            ok = ok and report.certified == expected
            rows.append([n, m, report.total, m - 1, report.certified, expected])
    path = outdir / "doubly_reverse.csv"
    _write_csv(path, [
        "N", "m", "noise_sum", "threshold", "certified", "expected",
    ], rows)
    return ok, [path]


TARGETS = {
    "reversed-threshold": _target_reversed_threshold,
    "squit": _target_squit,
    "mub-sigma": _target_mub_sigma,
    "triple-witness": _target_triple_witness,
    "ppovm-gap": _target_ppovm_gap,
    "doubly-reverse": _target_doubly_reverse,
}


# ---------------------------------------------------------------------------
# Observable file loading
# ---------------------------------------------------------------------------

def load_observable_file(path: Path) -> Observable:
    """Load an observable from JSON; accepts the generic observable schema
    (top-level ``space``) and the process-measurement schema (top-level
    ``dimA``/``dimB``/``effects``)."""
    payload = json.loads(path.read_text())
    if "space" in payload:
        return observable_from_dict(payload)
    if "dimA" in payload:
        return processes.PPOVM.from_dict(payload).observable
    raise GptObsError("file is neither an observable nor a process measurement")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_reproduce(args) -> int:
    if args.target not in TARGETS:
        print(
            f"unknown target {args.target!r}; available: "
            + ", ".join(sorted(TARGETS)),
            file=sys.stderr,
        )
        return EXIT_USAGE
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    ok, outputs = TARGETS[args.target](outdir, args.seed, args.tol)
    manifest = RunManifest(
        command="reproduce",
        target=args.target,
        seed=args.seed,
        tol=args.tol,
        version=__version__,
        outputs=[str(p) for p in outputs],
    )
    manifest_path = outdir / f"{args.target.replace('-', '_')}_manifest.json"
    manifest.write(manifest_path)
    print(f"{args.target}: {'pass' if ok else 'FAIL'} "
          f"({', '.join(str(p) for p in outputs)})")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _cmd_noise(args) -> int:
    try:
        obs = load_observable_file(Path(args.file))
    except (OSError, json.JSONDecodeError, GptObsError) as exc:
        print(f"cannot load observable: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = validate_observable(obs, tol=args.tol)
    if not report.ok:
        print(json.dumps({
            "valid": False,
            "issues": [
                {"code": i.code, "message": i.message, "magnitude": i.magnitude}
                for i in report.issues
            ],
        }, indent=2, sort_keys=True))
        return EXIT_INVALID_INPUT
    decomposition = noise_content(obs)
    payload = decomposition.to_dict()
    print(json.dumps(payload, indent=2, sort_keys=True))
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        _write_json(outdir / "noise_decomposition.json", payload)
    return EXIT_OK


def _cmd_compat(args) -> int:
    observables = []
    for name in args.files:
        try:
            observables.append(load_observable_file(Path(name)))
        except (OSError, json.JSONDecodeError, GptObsError) as exc:
            print(f"cannot load observable from {name}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        if args.lp:
            verdict = lp_compatible_polytope(observables, tol=args.tol)
        else:
            weights = None
            if args.weights:
                weights = [float(w) for w in args.weights.split(",")]
            verdict = sufficient_compatible(observables, weights=weights)
    except SpaceMismatch as exc:
        print(f"space mismatch: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except GptObsError as exc:
        print(f"cannot decide: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    payload = verdict.to_dict()
    print(json.dumps(payload, indent=2, sort_keys=True))
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        _write_json(outdir / "verdict.json", payload)
        if verdict.witness is not None:
            _write_json(outdir / "joint_witness.json", verdict.witness.to_dict())
    if verdict.status is Status.COMPATIBLE_CERTIFIED:
        return EXIT_OK
    if verdict.status is Status.INCOMPATIBLE_CERTIFIED:
        return EXIT_INCOMPATIBLE
    return EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gptobs",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rep = sub.add_parser(
        "reproduce",
        help="run a packaged result table",
        description=(
            "Targets and their outputs:\n"
            "  reversed-threshold: reversed_threshold.csv with columns d, m, N,\n"
            "      constructible, noise_sum, threshold, certified, expected,\n"
            "      witness_marginal_error\n"
            "  squit: squit_grid.csv with columns alpha, beta, noise_a, noise_b,\n"
            "      lp_status, expected_compatible, agrees\n"
            "  mub-sigma: mub_sigma.csv with columns d, min_eig, trace_dev,\n"
            "      max_dev_basis_a, max_dev_basis_b, ok\n"
            "  triple-witness: triple_witness.json\n"
            "  ppovm-gap: ppovm_gap.json\n"
            "  doubly-reverse: doubly_reverse.csv with columns N, m, noise_sum,\n"
            "      threshold, certified, expected\n"
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    rep.add_argument("target", help="one of " + ", ".join(sorted(TARGETS)))
    rep.add_argument("--out", default="out", help="output directory (default: out)")
    rep.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    rep.add_argument("--tol", type=float, default=DEFAULT_TOL)

    noi = sub.add_parser("noise", help="noise decomposition of an observable file")
    noi.add_argument("file")
    noi.add_argument("--out", default=None, help="directory for the JSON result")
    noi.add_argument("--tol", type=float, default=DEFAULT_TOL)

    com = sub.add_parser("compat", help="compatibility verdict for observable files")
    com.add_argument("files", nargs="+")
    com.add_argument("--lp", action="store_true",
                     help="force the exact polytope LP decider")
    com.add_argument("--weights", default=None,
                     help="comma-separated mixing weights for the joint construction")
    com.add_argument("--tol", type=float, default=DEFAULT_TOL)
    com.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    com.add_argument("--out", default=None, help="directory for verdict and witness")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "reproduce":
        return _cmd_reproduce(args)
    if args.command == "noise":
        return _cmd_noise(args)
    if args.command == "compat":
        return _cmd_compat(args)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
