"""
Tests for exhaustive sweeps, fuzzing and the VerificationRunner.
"""

import pytest

from fdqc.delegation.protocol import run_fdqc
from fdqc.delegation.verification import (
    MAX_RECORDED_FAILURES,
    SweepReport,
    VerificationRunner,
    closed_form_sweep,
    fuzz_case,
    fuzz_sweep,
    gate_sweep,
    swap_equivalence_sweep,
    toffoli_sweep,
)
from fdqc.quantum import pauli_otp, qsim
from fdqc.quantum.pauli_otp import KeyUpdate


class TestSweepReport:
    def test_empty_report_does_not_pass(self):
        assert not SweepReport("empty").passed

    def test_failures_are_capped(self):
        report = SweepReport("noisy")
        for i in range(MAX_RECORDED_FAILURES + 5):
            report.record(False, f"case {i}")
        assert report.failure_count == MAX_RECORDED_FAILURES + 5
        assert len(report.failures) == MAX_RECORDED_FAILURES
        assert report.to_dict()["passed"] is False


class TestSweeps:
    """Every sweep passes against the oracle."""

    def test_toffoli_sweep(self):
        report = toffoli_sweep()
        assert report.name == "gate_toffoli"
        assert report.cases == 64 * 8
        assert report.passed

    @pytest.mark.parametrize(
        "kind, cases", [("H", 8), ("P", 8), ("CZ", 64), ("CNOT", 64)]
    )
    def test_clifford_sweeps(self, kind, cases):
        report = gate_sweep(kind)
        assert report.cases == cases
        assert report.passed, report.failures

    def test_closed_form(self):
        report = closed_form_sweep()
        assert report.cases == 4 + 4 + 16 + 16
        assert report.passed, report.failures

    def test_swap_equivalence(self):
        report = swap_equivalence_sweep()
        assert report.cases == 512
        assert report.passed

    def test_fuzz_case_description(self):
        ok, description = fuzz_case(3)
        assert ok
        assert description.startswith("seed 3:")

    def test_small_fuzz(self):
        report = fuzz_sweep(n_programs=12, workers=2)
        assert report.cases == 12
        assert report.passed, report.failures

    def test_dropped_corrections_break_decryption(self, monkeypatch, toffoli_program):
        """Delegation without the Toffoli corrections no longer matches T."""
        real = pauli_otp.key_update

        def without_corrections(kind, keys, wires=None):
            return KeyUpdate(real(kind, keys, wires).new_keys, ())

        monkeypatch.setattr(pauli_otp, "key_update", without_corrections)
        result = run_fdqc(
            toffoli_program,
            qsim.basis_state(3, 0b110),
            seed=0,
            initial_keys=[(1, 0), (0, 0), (0, 0)],
        )
        assert result.corrections == 0
        assert not qsim.equal_up_to_global_phase(result.output, qsim.basis_state(3, 0b111))


class TestVerificationRunner:
    """Named sweep groups."""

    def test_toffoli_group(self):
        outcome = VerificationRunner().run("toffoli")
        assert outcome["success"]
        assert outcome["total_cases"] == 512
        assert outcome["total_failures"] == 0
        assert [r["name"] for r in outcome["reports"]] == ["gate_toffoli"]

    def test_reads_config(self):
        runner = VerificationRunner(
            {"protocol": {"tolerance": 1e-6}, "verification": {"fuzz_programs": 5}}
        )
        assert runner.tolerance == 1e-6
        assert runner.fuzz_programs == 5

    @pytest.mark.slow
    def test_all_group(self):
        config = {"verification": {"fuzz_programs": 20, "worker_threads": 2}}
        outcome = VerificationRunner(config).run("all")
        assert outcome["success"], outcome["reports"]
        names = [r["name"] for r in outcome["reports"]]
        assert names[-3:] == ["closed_form", "swap_equivalence", "fuzz"]
        assert "gate_toffoli" in names

    def test_unknown_sweep(self):
        outcome = VerificationRunner().run("everything")
        assert outcome["success"] is False
        assert outcome["error"]["type"] == "unknown"
        assert "Unknown sweep" in outcome["error"]["error"]
        assert outcome["reports"] == []
