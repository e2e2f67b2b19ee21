"""Tests for the process backend: Choi states, PPOVMs, and their bounds."""

import numpy as np
import pytest

import gptobs as g
from gptobs import processes
from gptobs.errors import InvalidParameter, InvalidPPOVM, SpaceMismatch

from helpers import observables_close
from oracles import born_tester_probabilities


def bell_tester():
    """Tester measuring the four Bell projectors, normalized to rho = I/2."""
    bells = np.array([
        [1.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, -1.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 1.0, -1.0, 0.0],
    ]) / np.sqrt(2.0)
    ops = [0.5 * np.outer(b, b.conj()) for b in bells]
    return processes.PPOVM.from_effect_ops(2, 2, ops)


def depolarizing_kraus(lam: float):
    """Kraus operators of the qubit depolarizing channel."""
    paulis = [
        np.eye(2),
        np.array([[0.0, 1.0], [1.0, 0.0]]),
        np.array([[0.0, -1j], [1j, 0.0]]),
        np.array([[1.0, 0.0], [0.0, -1.0]]),
    ]
    weights = [np.sqrt(lam + (1 - lam) / 4)] + [np.sqrt((1 - lam) / 4)] * 3
    return [w * p for w, p in zip(weights, paulis)]


class TestChoiState:
    def test_identity_channel(self):
        choi = processes.ChoiState.identity(2)
        psi = np.array([1.0, 0.0, 0.0, 1.0])
        assert np.allclose(choi.omega, np.outer(psi, psi), atol=1e-12)

    def test_rejects_non_trace_preserving(self):
        from gptobs.errors import InvalidState

        space = g.ProcessSpace(2, 2)
        with pytest.raises(InvalidState):
            processes.ChoiState(space, np.eye(4))  # partial trace is 2 * identity

    def test_random_channels_are_valid(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            choi = processes.random_channel(2, 3, rng)
            assert choi.omega.shape == (6, 6)


class TestPPOVM:
    def test_rho_extracted_from_normalization(self):
        tester = bell_tester()
        np.testing.assert_allclose(tester.rho, np.eye(2) / 2, atol=1e-12)

    def test_rejects_inconsistent_rho(self):
        tester = bell_tester()
        with pytest.raises(InvalidPPOVM):
            processes.PPOVM(tester.observable, np.diag([1.0, 0.0]))

    def test_rejects_non_positive_effects(self):
        zz = np.kron(np.diag([1.0, -1.0]), np.diag([1.0, -1.0]))
        ops = [np.eye(4) / 4 + 0.3 * zz, np.eye(4) / 4 - 0.3 * zz]
        with pytest.raises(InvalidPPOVM):
            processes.PPOVM.from_effect_ops(2, 2, ops)

    def test_serialization_round_trip(self):
        tester = bell_tester()
        back = processes.PPOVM.from_dict(tester.to_dict())
        assert back.outcomes == tester.outcomes
        np.testing.assert_allclose(back.rho, tester.rho, atol=1e-12)
        for mine, theirs in zip(back.effect_ops(), tester.effect_ops()):
            assert np.array_equal(mine, theirs)


class TestEvaluatePPOVM:
    def test_trivial_tester_reports_its_distribution(self):
        rng = np.random.default_rng(7)
        probs = [0.2, 0.5, 0.3]
        tester = processes.rank_one_trivial_ppovm(probs, 2)
        for _ in range(5):
            channel = processes.random_channel(3, 2, rng)
            np.testing.assert_allclose(
                g.evaluate_ppovm(tester, channel), probs, atol=1e-12
            )

    def test_single_outcome_tester(self):
        rng = np.random.default_rng(8)
        ppovm = processes.random_ppovm(2, 2, 1, rng)
        channel = processes.random_channel(2, 2, rng)
        probs = g.evaluate_ppovm(ppovm, channel)
        assert probs.shape == (1,)
        assert probs[0] == pytest.approx(1.0, abs=1e-9)

    def test_depolarizing_channel_against_born_rule(self):
        tester = bell_tester()
        lam = 0.7
        kraus = depolarizing_kraus(lam)
        choi = processes.ChoiState.from_kraus(kraus, 2, 2)
        probs = g.evaluate_ppovm(tester, choi)
        # hand-computed: the Bell-aligned outcome keeps lam + (1 - lam)/4,
        # the other three each get (1 - lam)/4
        np.testing.assert_allclose(probs, [0.775, 0.075, 0.075, 0.075], atol=1e-12)
        oracle = born_tester_probabilities(kraus, tester.effect_ops(), 2, 2)
        np.testing.assert_allclose(probs, oracle, atol=1e-12)

    def test_random_pairs_give_distributions(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            ppovm = processes.random_ppovm(2, 2, int(rng.integers(1, 5)), rng)
            channel = processes.random_channel(2, 2, rng)
            probs = g.evaluate_ppovm(ppovm, channel)
            assert probs.min() >= -1e-9
            assert probs.sum() == pytest.approx(1.0, abs=1e-9)
            oracle = born_tester_probabilities(
                depolarizing_kraus(0.5), ppovm.effect_ops(), 2, 2
            )
            # oracle agreement on an independently evolved channel
            depol = processes.ChoiState.from_kraus(depolarizing_kraus(0.5), 2, 2)
            np.testing.assert_allclose(
                g.evaluate_ppovm(ppovm, depol), oracle, atol=1e-9
            )

    def test_dimension_mismatch(self):
        tester = bell_tester()
        channel = processes.random_channel(3, 2, np.random.default_rng(1))
        with pytest.raises(SpaceMismatch):
            g.evaluate_ppovm(tester, channel)


class TestNoiseLowerBound:
    def test_rank_one_trivial_is_degenerate(self):
        tester = processes.rank_one_trivial_ppovm([0.4, 0.6], 2)
        dec = processes.ppovm_noise_lower_bound(tester)
        assert dec.t == 0.0
        assert not dec.is_exact

    def test_uniform_scaling_of_normalization(self):
        # effects (1/N) rho (x) identity have eigenvalue sum lambda_min(rho)
        rng = np.random.default_rng(11)
        rho = np.diag([0.7, 0.3])
        n = 4
        ops = [np.kron(rho, np.eye(2)) / n] * n
        ppovm = processes.PPOVM.from_effect_ops(2, 2, ops)
        dec = processes.ppovm_noise_lower_bound(ppovm)
        assert dec.t == pytest.approx(0.3, abs=1e-12)

    def test_single_outcome_bound(self):
        rho = np.diag([0.8, 0.2])
        ppovm = processes.PPOVM.from_effect_ops(2, 2, [np.kron(rho, np.eye(2))])
        dec = processes.ppovm_noise_lower_bound(ppovm)
        assert dec.t == pytest.approx(0.2, abs=1e-12)
        assert g.validate_observable(dec.residual).ok

    def test_full_noise_edge(self):
        # input dimension 1 makes the eigenvalue bound reach 1 exactly
        ops = [p * np.eye(3) for p in (0.2, 0.3, 0.5)]
        ppovm = processes.PPOVM.from_effect_ops(1, 3, ops)
        dec = processes.ppovm_noise_lower_bound(ppovm)
        assert dec.t == 1.0
        np.testing.assert_allclose(dec.trivial.probs, [0.2, 0.3, 0.5], atol=1e-12)

    def test_residual_revalidates(self):
        rng = np.random.default_rng(12)
        for _ in range(25):
            ppovm = processes.random_ppovm(2, 2, int(rng.integers(2, 5)), rng)
            dec = processes.ppovm_noise_lower_bound(ppovm)
            assert g.validate_observable(dec.residual).ok
            rebuilt = g.mix(
                g.embed_trivial(dec.trivial, ppovm.space, xi=ppovm.rho),
                dec.residual,
                dec.t,
            )
            assert observables_close(rebuilt, ppovm.observable, 1e-9)
            # the residual is itself a process measurement with the same rho
            processes.PPOVM(dec.residual, ppovm.rho)


class TestEigenConditionReport:
    def test_identity_proportional_pair_certifies(self):
        p1 = processes.PPOVM.from_effect_ops(
            2, 2, [c * np.eye(4) for c in (0.2, 0.3)]
        )
        p2 = processes.PPOVM.from_effect_ops(
            2, 2, [c * np.eye(4) for c in (0.1, 0.15, 0.25)]
        )
        report = processes.ppovm_eigen_condition_report([p1, p2])
        assert report.certified
        assert g.is_joint_of(
            report.witness, [p1.observable, p2.observable], 1e-9
        )

    def test_low_sums_stay_silent(self):
        zz = np.kron(np.diag([1.0, -1.0]), np.diag([1.0, -1.0]))
        def tester(eps):
            ops = [np.eye(4) / 4 + eps * zz, np.eye(4) / 4 - eps * zz]
            return processes.PPOVM.from_effect_ops(2, 2, ops)

        report = processes.ppovm_eigen_condition_report([tester(0.1), tester(0.05)])
        assert report.eigen_sums[0] == pytest.approx(0.3, abs=1e-12)
        assert report.eigen_sums[1] == pytest.approx(0.4, abs=1e-12)
        assert not report.certified
        assert report.witness is None

    def test_exactly_trivial_partner_certifies(self):
        trivial = processes.rank_one_trivial_ppovm([0.5, 0.5], 2)
        other = processes.random_ppovm(2, 2, 3, np.random.default_rng(13))
        report = processes.ppovm_eigen_condition_report([trivial, other])
        assert report.eigen_sums[0] == 0.0
        assert report.noise_values[0] == 1.0
        assert report.certified
        assert g.is_joint_of(
            report.witness, [trivial.observable, other.observable], 1e-9
        )

    def test_dimension_mismatch(self):
        a = processes.rank_one_trivial_ppovm([0.5, 0.5], 2)
        b = processes.rank_one_trivial_ppovm([0.5, 0.5], 3)
        with pytest.raises(SpaceMismatch):
            processes.ppovm_eigen_condition_report([a, b])

    def test_needs_two_measurements(self):
        a = processes.rank_one_trivial_ppovm([0.5, 0.5], 2)
        with pytest.raises(InvalidParameter):
            processes.ppovm_eigen_condition_report([a])
