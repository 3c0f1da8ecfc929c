"""
Tests for gateset - program text format, direct evaluation and random programs.
"""

import numpy as np
import pytest

from fdqc.exceptions import GateError, ProgramParseError, StateError
from fdqc.quantum import qsim
from fdqc.quantum.gateset import (
    CircuitProgram,
    direct_eval,
    inverse_program,
    load_program,
    parse_program,
    random_program,
    render_program,
)
from fdqc.quantum.qsim import GateKind, GateOp

SQRT1_2 = 1 / np.sqrt(2)


class TestParseProgram:
    """Parsing the line-oriented program format."""

    def test_ph_program(self, ph_program):
        assert ph_program.n_qubits == 1
        assert ph_program.ops == (GateOp(GateKind.H, (0,)), GateOp(GateKind.P, (0,)))

    def test_toffoli_program(self, toffoli_program):
        assert toffoli_program.ops == (GateOp(GateKind.TOFFOLI, (0, 1, 2)),)
        assert toffoli_program.toffoli_count == 1

    def test_comments_and_blank_lines(self):
        text = "# header comment\n\nqubits 2  # two wires\n\nCNOT 0 1 # entangle\n   \n"
        program = parse_program(text)
        assert program.n_qubits == 2
        assert len(program) == 1

    def test_empty_program(self):
        program = parse_program("qubits 3\n")
        assert program.ops == ()

    def test_target_out_of_range(self):
        with pytest.raises(ProgramParseError, match="out of range") as exc_info:
            parse_program("qubits 1\nH 5")
        assert exc_info.value.line_no == 2

    def test_unknown_gate(self):
        with pytest.raises(ProgramParseError, match="unknown gate") as exc_info:
            parse_program("qubits 2\nH 0\nSWAP 0 1\n")
        assert exc_info.value.line_no == 3
        assert str(exc_info.value).startswith("line 3:")

    def test_wrong_arity(self):
        with pytest.raises(ProgramParseError, match="operand"):
            parse_program("qubits 3\nT 0 1\n")

    def test_repeated_target(self):
        with pytest.raises(ProgramParseError, match="repeated"):
            parse_program("qubits 2\nCNOT 1 1\n")

    def test_non_integer_operand(self):
        with pytest.raises(ProgramParseError, match="not an integer"):
            parse_program("qubits 2\nH x\n")

    @pytest.mark.parametrize("token", ["+1", "1_0", "\u0661", "0x1", "1.0"])
    def test_operand_must_be_plain_decimal(self, token):
        with pytest.raises(ProgramParseError, match="not an integer"):
            parse_program(f"qubits 12\nH {token}\n")

    def test_width_must_be_plain_decimal(self):
        with pytest.raises(ProgramParseError, match="not an integer"):
            parse_program("qubits +2\n")

    def test_negative_operand(self):
        with pytest.raises(ProgramParseError, match="negative"):
            parse_program("qubits 2\nH -1\n")

    @pytest.mark.parametrize("text", ["H 0\n", "qubits\n", "qubits two\n", "qubits 0\n", ""])
    def test_malformed_or_missing_header(self, text):
        with pytest.raises(ProgramParseError):
            parse_program(text)

    def test_x_is_not_delegatable(self):
        with pytest.raises(ProgramParseError, match="unknown gate"):
            parse_program("qubits 1\nX 0\n")

    def test_minimal_set_rejects_cz(self):
        with pytest.raises(ProgramParseError, match="minimal"):
            parse_program("qubits 2\nCZ 0 1\n", minimal_only=True)
        assert len(parse_program("qubits 2\nCNOT 0 1\n", minimal_only=True)) == 1

    def test_render_round_trip(self):
        program = random_program(3, 12, seed=4)
        assert parse_program(render_program(program)) == program
        assert program.render() == render_program(program)


class TestLoadProgram:
    """Reading program files."""

    def test_load(self, program_file):
        path = program_file("qubits 1\nH 0\nP 0\n")
        assert len(load_program(path)) == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ProgramParseError, match="cannot read"):
            load_program(tmp_path / "nope.qc")

    def test_invalid_utf8(self, tmp_path):
        path = tmp_path / "binary.qc"
        path.write_bytes(b"qubits 1\nH 0 \xff\xfe\n")
        with pytest.raises(ProgramParseError, match="UTF-8") as exc_info:
            load_program(path)
        assert exc_info.value.line_no == 0

    @pytest.mark.parametrize("name", ["ph.qc", "toffoli.qc", "empty.qc", "mixed.qc"])
    def test_bundled_programs_parse(self, bundled_programs, name):
        program = load_program(bundled_programs / name)
        assert program.n_qubits >= 1


class TestCircuitProgram:
    """Construction-time validation."""

    def test_rejects_non_delegatable_kind(self):
        with pytest.raises(GateError, match="delegatable"):
            CircuitProgram(1, (GateOp(GateKind.X, (0,)),))

    def test_rejects_out_of_range_target(self):
        with pytest.raises(GateError, match="exceeds"):
            CircuitProgram(2, (GateOp(GateKind.TOFFOLI, (0, 1, 2)),))

    def test_rejects_zero_width(self):
        with pytest.raises(GateError):
            CircuitProgram(0)


class TestDirectEval:
    """Plaintext reference evaluation."""

    def test_ph_on_zero(self, ph_program):
        out = direct_eval(ph_program, qsim.basis_state(1, 0))
        assert np.allclose(out.amplitudes, [SQRT1_2, 1j * SQRT1_2])

    def test_empty_program_is_identity(self, rng):
        state = qsim.haar_random_state(2, rng)
        out = direct_eval(CircuitProgram(2), state)
        assert np.array_equal(out.amplitudes, state.amplitudes)

    def test_toffoli_truth_table(self, toffoli_program):
        out = direct_eval(toffoli_program, qsim.basis_state(3, 0b110))
        assert out.amplitudes[0b111] == 1

    def test_width_mismatch(self, ph_program):
        with pytest.raises(StateError):
            direct_eval(ph_program, qsim.basis_state(2, 0))

    def test_linearity(self, rng):
        program = random_program(3, 8, seed=11)
        s1 = qsim.haar_random_state(3, rng)
        s2 = qsim.haar_random_state(3, rng)
        alpha, beta = 0.6, 0.8j
        combo = qsim.Statevector.from_amplitudes(
            alpha * s1.amplitudes + beta * s2.amplitudes, normalize=True
        )
        norm = np.linalg.norm(alpha * s1.amplitudes + beta * s2.amplitudes)
        lhs = direct_eval(program, combo).amplitudes * norm
        rhs = alpha * direct_eval(program, s1).amplitudes + beta * direct_eval(program, s2).amplitudes
        assert np.allclose(lhs, rhs, atol=1e-10)

    def test_inverse_program_undoes(self, rng):
        program = random_program(3, 10, seed=21)
        state = qsim.haar_random_state(3, rng)
        back = direct_eval(inverse_program(program), direct_eval(program, state))
        assert qsim.equal_up_to_global_phase(back, state)

    def test_inverse_expands_p(self, ph_program):
        inverse = inverse_program(ph_program)
        assert [op.kind for op in inverse.ops] == [GateKind.P] * 3 + [GateKind.H]


class TestRandomProgram:
    """Seeded fuzzing programs."""

    def test_zero_length(self):
        assert random_program(3, 0, seed=99).ops == ()

    def test_deterministic(self):
        assert random_program(3, 10, seed=42) == random_program(3, 10, seed=42)

    def test_different_seeds_differ(self):
        assert random_program(3, 10, seed=1) != random_program(3, 10, seed=2)

    def test_single_qubit_pool(self):
        program = random_program(1, 5, seed=7, pool=[GateKind.H, GateKind.P])
        assert len(program) == 5
        assert all(op.targets == (0,) for op in program.ops)

    def test_default_pool_fits_register(self):
        program = random_program(2, 30, seed=3)
        assert all(op.kind is not GateKind.TOFFOLI for op in program.ops)

    def test_pool_too_wide(self):
        with pytest.raises(GateError, match="more than"):
            random_program(2, 5, seed=0, pool=[GateKind.TOFFOLI])

    def test_pool_not_delegatable(self):
        with pytest.raises(GateError, match="delegatable"):
            random_program(1, 5, seed=0, pool=[GateKind.X])

    def test_empty_pool(self):
        with pytest.raises(GateError, match="empty"):
            random_program(1, 5, seed=0, pool=[])

    def test_negative_length(self):
        with pytest.raises(GateError):
            random_program(1, -1, seed=0)
