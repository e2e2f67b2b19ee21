"""Tests for the command-line interface: exit codes, outputs, reproducibility."""

import json

import numpy as np
import pytest

import gptobs as g
from gptobs import cli, processes

from helpers import squit_pair


def write_observable(path, obs):
    path.write_text(json.dumps(g.observable_to_dict(obs)))
    return str(path)


@pytest.fixture
def reversed_trine_file(tmp_path):
    rt = g.reverse_observable(g.RegularRank1POVM.harmonic(2, 3).observable())
    return write_observable(tmp_path / "rtrine.json", rt)


class TestReproduce:
    @pytest.mark.parametrize("target", sorted(cli.TARGETS))
    def test_targets_pass_and_emit_manifest(self, target, tmp_path):
        outdir = tmp_path / target
        code = cli.main(["reproduce", target, "--out", str(outdir)])
        assert code == 0
        manifests = list(outdir.glob("*_manifest.json"))
        assert len(manifests) == 1
        manifest = json.loads(manifests[0].read_text())
        assert manifest["target"] == target
        assert manifest["seed"] == cli.DEFAULT_SEED
        assert manifest["version"] == g.__version__
        for output in manifest["outputs"]:
            assert (outdir / output.split("/")[-1]).exists()

    def test_unknown_target(self, tmp_path, capsys):
        code = cli.main(["reproduce", "no-such-thing", "--out", str(tmp_path)])
        assert code == 2
        assert "available" in capsys.readouterr().err

    def test_outputs_are_byte_reproducible(self, tmp_path):
        out1 = tmp_path / "run1"
        out2 = tmp_path / "run2"
        for outdir in (out1, out2):
            assert cli.main(["reproduce", "triple-witness", "--out", str(outdir)]) == 0
        assert (
            (out1 / "triple_witness.json").read_bytes()
            == (out2 / "triple_witness.json").read_bytes()
        )


class TestNoiseCommand:
    def test_sharp_povm_has_zero_noise(self, tmp_path, capsys):
        space = g.QuantumSpace(2)
        sharp = g.Observable(space, {
            0: g.QuantumEffect(space, np.diag([1.0, 0.0])),
            1: g.QuantumEffect(space, np.diag([0.0, 1.0])),
        })
        path = write_observable(tmp_path / "sharp.json", sharp)
        assert cli.main(["noise", path]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["t"] == 0.0

    def test_trivial_observable_has_full_noise(self, tmp_path, capsys):
        obs = g.embed_trivial(
            g.TrivialObservable((0, 1), [0.25, 0.75]), g.QuantumSpace(2)
        )
        path = write_observable(tmp_path / "trivial.json", obs)
        assert cli.main(["noise", path]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["t"] == 1.0

    def test_reversed_trine_file(self, reversed_trine_file, capsys):
        assert cli.main(["noise", reversed_trine_file]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["t"] == pytest.approx(0.5, abs=1e-9)

    def test_ppovm_schema_accepted(self, tmp_path, capsys):
        ppovm = processes.rank_one_trivial_ppovm([0.5, 0.5], 2)
        path = tmp_path / "ppovm.json"
        path.write_text(json.dumps(ppovm.to_dict()))
        assert cli.main(["noise", str(path)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["t"] == 0.0
        assert payload["method"] == "ppovm-lower-bound"

    def test_parse_failure_exits_2(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert cli.main(["noise", str(path)]) == 2
        capsys.readouterr()

    def test_invalid_observable_exits_3(self, tmp_path, capsys):
        space = g.QuantumSpace(2)
        p0 = g.QuantumEffect(space, np.diag([1.0, 0.0]))
        broken = g.Observable(space, {0: p0, 1: p0})
        path = write_observable(tmp_path / "invalid.json", broken)
        assert cli.main(["noise", str(path)]) == 3
        payload = json.loads(capsys.readouterr().out)
        assert payload["valid"] is False
        assert payload["issues"]


class TestCompatCommand:
    def test_reversed_trines_certify(self, reversed_trine_file, tmp_path, capsys):
        outdir = tmp_path / "w"
        code = cli.main([
            "compat", reversed_trine_file, reversed_trine_file,
            "--out", str(outdir),
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["status"] == "compatible-certified"
        witness = g.JointObservable.from_dict(
            json.loads((outdir / "joint_witness.json").read_text())
        )
        rt = g.reverse_observable(g.RegularRank1POVM.harmonic(2, 3).observable())
        assert g.is_joint_of(witness, [rt, rt], 1e-9)

    def test_squit_lp_incompatible_exits_4(self, tmp_path, capsys):
        a, b = squit_pair(0.4, 0.4)
        pa = write_observable(tmp_path / "a.json", a)
        pb = write_observable(tmp_path / "b.json", b)
        assert cli.main(["compat", pa, pb, "--lp"]) == 4
        payload = json.loads(capsys.readouterr().out)
        assert payload["status"] == "incompatible-certified"
        assert payload["certificate"]

    def test_sharp_mub_pair_undecided_exits_1(self, tmp_path, capsys):
        a, b = g.fourier_mub_pair(2)
        pa = write_observable(tmp_path / "a.json", a)
        pb = write_observable(tmp_path / "b.json", b)
        assert cli.main(["compat", pa, pb]) == 1
        payload = json.loads(capsys.readouterr().out)
        assert payload["status"] == "undecided"

    def test_space_mismatch_exits_3(self, reversed_trine_file, tmp_path, capsys):
        a, _ = squit_pair(0.5, 0.5)
        pa = write_observable(tmp_path / "a.json", a)
        assert cli.main(["compat", pa, reversed_trine_file]) == 3
        capsys.readouterr()

    def test_weights_flag(self, tmp_path, capsys):
        a, b = squit_pair(0.8, 0.7)
        pa = write_observable(tmp_path / "a.json", a)
        pb = write_observable(tmp_path / "b.json", b)
        assert cli.main(["compat", pa, pb, "--weights", "0.3,0.7"]) == 0
        capsys.readouterr()
