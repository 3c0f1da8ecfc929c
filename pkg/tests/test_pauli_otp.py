"""
Tests for pauli_otp - one-time pad, key-update table and Toffoli decryption.
"""

import itertools

import numpy as np
import pytest

from fdqc.exceptions import GateError, PauliKeyError, VerificationMismatch
from fdqc.quantum import pauli_otp, qsim
from fdqc.quantum.pauli_otp import PauliKey
from fdqc.quantum.qsim import GateKind, GateOp

DELEGATED = [GateKind.H, GateKind.P, GateKind.CZ, GateKind.CNOT, GateKind.TOFFOLI]
TOFFOLI = GateOp(GateKind.TOFFOLI, (0, 1, 2))


def keys(*pairs):
    return tuple(PauliKey(a, b) for a, b in pairs)


class TestPauliKey:
    """PauliKey validation."""

    def test_valid_bits(self):
        assert PauliKey(1, 0).as_tuple() == (1, 0)
        assert str(PauliKey(0, 1)) == "(0,1)"

    @pytest.mark.parametrize("a, b", [(2, 0), (0, -1), (True, 0)])
    def test_rejects_invalid_bits(self, a, b):
        with pytest.raises(PauliKeyError):
            PauliKey(a, b)

    def test_coerce_from_pair(self):
        assert PauliKey.coerce([1, 1]) == PauliKey(1, 1)

    def test_coerce_rejects_garbage(self):
        with pytest.raises(PauliKeyError):
            PauliKey.coerce(3)

    def test_random_keys_deterministic(self):
        a = pauli_otp.random_keys(5, np.random.default_rng(9))
        b = pauli_otp.random_keys(5, np.random.default_rng(9))
        assert a == b

    def test_key_digest_is_stable(self):
        assert pauli_otp.key_digest(keys((0, 1), (1, 0))) == pauli_otp.key_digest(
            keys((0, 1), (1, 0))
        )
        assert pauli_otp.key_digest(keys((0, 1))) != pauli_otp.key_digest(keys((1, 0)))
        assert len(pauli_otp.key_digest(keys((1, 1)))) == 16


class TestEncryptDecrypt:
    """Encryption applies Z^b then X^a; decryption undoes it."""

    def test_x_key(self):
        out = pauli_otp.encrypt(qsim.basis_state(1, 0), keys((1, 0)))
        assert np.allclose(out.amplitudes, [0, 1])

    def test_z_key(self):
        out = pauli_otp.encrypt(qsim.basis_state(1, 1), keys((0, 1)))
        assert np.allclose(out.amplitudes, [0, -1])

    def test_identity_key(self):
        state = qsim.basis_state(1, 0)
        assert np.array_equal(pauli_otp.encrypt(state, keys((0, 0))).amplitudes, state.amplitudes)
        assert np.array_equal(pauli_otp.decrypt(state, keys((0, 0))).amplitudes, state.amplitudes)

    def test_round_trip_plus(self, plus_state):
        k = keys((1, 1))
        back = pauli_otp.decrypt(pauli_otp.encrypt(plus_state, k), k)
        assert qsim.equal_up_to_global_phase(back, plus_state)

    def test_decrypt_x(self):
        out = pauli_otp.decrypt(qsim.basis_state(1, 1), keys((1, 0)))
        assert np.allclose(out.amplitudes, [1, 0])

    def test_round_trip_random_register(self, rng):
        state = qsim.haar_random_state(3, rng)
        k = pauli_otp.random_keys(3, rng)
        assert qsim.equal_up_to_global_phase(pauli_otp.decrypt(pauli_otp.encrypt(state, k), k), state)

    def test_selected_wires(self):
        out = pauli_otp.encrypt(qsim.basis_state(3, 0), keys((1, 0)), wires=[2])
        assert out.amplitudes[0b001] == 1

    def test_key_count_mismatch(self):
        with pytest.raises(PauliKeyError):
            pauli_otp.encrypt(qsim.basis_state(2, 0), keys((1, 0)))

    def test_invalid_wires(self):
        with pytest.raises(GateError):
            pauli_otp.encrypt(qsim.basis_state(2, 0), keys((1, 0), (0, 1)), wires=[0, 0])

    def test_pauli_operator_matches_encrypt(self, rng):
        state = qsim.haar_random_state(2, rng)
        k = keys((1, 1), (0, 1))
        by_matrix = pauli_otp.pauli_operator(k) @ state.amplitudes
        assert np.allclose(pauli_otp.encrypt(state, k).amplitudes, by_matrix)


class TestKeyUpdate:
    """The oracle-derived key-update table."""

    def test_h_swaps_bits(self):
        update = pauli_otp.key_update(GateKind.H, keys((1, 0)))
        assert update.new_keys == keys((0, 1))
        assert update.corrections == ()

    def test_h_update_is_an_involution(self):
        for k in pauli_otp.all_keys(1):
            once = pauli_otp.key_update("H", k).new_keys
            assert pauli_otp.key_update("H", once).new_keys == k

    def test_p_zero_key(self):
        update = pauli_otp.key_update(GateKind.P, keys((0, 0)))
        assert update.new_keys == keys((0, 0))
        assert update.corrections == ()

    def test_cnot_copies_x_to_target(self):
        update = pauli_otp.key_update(GateKind.CNOT, keys((1, 0), (0, 0)))
        assert update.new_keys == keys((1, 0), (1, 0))

    def test_cz_flips_opposite_z_bit(self):
        update = pauli_otp.key_update(GateKind.CZ, keys((1, 0), (0, 0)))
        assert update.new_keys == keys((1, 0), (0, 1))

    @pytest.mark.parametrize("kind", DELEGATED)
    def test_zero_keys_are_a_fixed_point(self, kind):
        zero = keys(*[(0, 0)] * kind.arity)
        assert pauli_otp.key_update(kind, zero).new_keys == zero

    @pytest.mark.parametrize("kind", [GateKind.H, GateKind.P, GateKind.CZ, GateKind.CNOT])
    def test_cliffords_need_no_corrections(self, kind):
        for k in pauli_otp.all_keys(kind.arity):
            assert pauli_otp.key_update(kind, k).corrections == ()

    @pytest.mark.parametrize("kind", [GateKind.H, GateKind.P, GateKind.CZ, GateKind.CNOT])
    def test_oracle_matches_closed_form(self, kind):
        for k in pauli_otp.all_keys(kind.arity):
            assert pauli_otp.key_update(kind, k).new_keys == pauli_otp.closed_form_update(kind, k)

    def test_closed_form_has_no_toffoli_rule(self):
        with pytest.raises(GateError):
            pauli_otp.closed_form_update(GateKind.TOFFOLI, keys((0, 0), (0, 0), (0, 0)))

    def test_arity_mismatch(self):
        with pytest.raises(PauliKeyError):
            pauli_otp.key_update(GateKind.CNOT, keys((0, 0)))

    def test_table_sizes(self):
        for kind, size in zip(DELEGATED, (4, 4, 16, 16, 64)):
            assert len(pauli_otp.key_update_table(kind)) == size

    @pytest.mark.parametrize("kind", DELEGATED)
    def test_master_identity_on_every_key_and_basis_input(self, kind):
        for k in pauli_otp.all_keys(kind.arity):
            for index in range(2**kind.arity):
                state = qsim.basis_state(kind.arity, index)
                assert pauli_otp.master_identity_holds(kind, k, state), (kind, k, index)


class TestCZUpdateDeviation:
    """The circulated CZ rule puts a+c into an X exponent; the derived table does not."""

    def test_cz_naive_x_exponent_rule_disagrees_with_derived_table(self):
        disagreements = {
            k
            for k in pauli_otp.all_keys(2)
            if pauli_otp.printed_cz_update(k) != pauli_otp.key_update(GateKind.CZ, k).new_keys
        }
        # the two rules agree only when the first wire carries no key at all
        assert disagreements == {k for k in pauli_otp.all_keys(2) if k[0].a or k[0].b}
        assert len(disagreements) == 12

    def test_cz_naive_rule_breaks_decryption(self):
        k = keys((1, 0), (0, 0))
        wrong = pauli_otp.printed_cz_update(k)
        cz = GateOp(GateKind.CZ, (0, 1))
        state = qsim.basis_state(2, 0)
        blind = qsim.apply(pauli_otp.encrypt(state, k), cz)
        recovered = pauli_otp.decrypt(blind, wrong)
        assert not qsim.equal_up_to_global_phase(recovered, qsim.apply(state, cz))

    def test_cz_derived_table_passes_homomorphic_contract(self):
        for k in pauli_otp.all_keys(2):
            for index in range(4):
                assert pauli_otp.master_identity_holds(GateKind.CZ, k, qsim.basis_state(2, index))


class TestToffoliCorrections:
    """Corrections for keys (a,b), (c,d), (e,f) on (c1, c2, t)."""

    def test_f_forces_cz_on_controls(self):
        update = pauli_otp.key_update(GateKind.TOFFOLI, keys((0, 0), (0, 0), (0, 1)))
        assert update.corrections == (GateOp(GateKind.CZ, (0, 1)),)
        assert update.new_keys[2].b == 1

    def test_a_forces_cnot_from_second_control(self):
        update = pauli_otp.key_update(GateKind.TOFFOLI, keys((1, 0), (0, 0), (0, 0)))
        assert update.corrections == (GateOp(GateKind.CNOT, (1, 2)),)
        assert update.new_keys[0].a == 1

    def test_c_forces_cnot_from_first_control(self):
        update = pauli_otp.key_update(GateKind.TOFFOLI, keys((0, 0), (1, 0), (0, 0)))
        assert update.corrections == (GateOp(GateKind.CNOT, (0, 2)),)

    def test_all_bits_set_order_is_fixed(self):
        update = pauli_otp.key_update(GateKind.TOFFOLI, keys((1, 1), (1, 1), (1, 1)))
        assert update.corrections == (
            GateOp(GateKind.CZ, (0, 1)),
            GateOp(GateKind.CNOT, (1, 2)),
            GateOp(GateKind.CNOT, (0, 2)),
        )
        assert len(update.new_keys) == 3

    def test_corrections_only_when_a_c_or_f(self):
        for k in pauli_otp.all_keys(3):
            (a, _), (c, _), (_, f) = (x.as_tuple() for x in k)
            update = pauli_otp.key_update(GateKind.TOFFOLI, k)
            assert len(update.corrections) == a + c + f

    def test_corrections_remapped_onto_wires(self):
        update = pauli_otp.key_update(GateKind.TOFFOLI, keys((1, 0), (1, 0), (0, 1)), (4, 2, 7))
        assert update.corrections == (
            GateOp(GateKind.CZ, (4, 2)),
            GateOp(GateKind.CNOT, (2, 7)),
            GateOp(GateKind.CNOT, (4, 7)),
        )

    def test_residual_keys_with_scheduled_corrections(self):
        k = keys((1, 1), (1, 0), (0, 1))
        corrections = pauli_otp.correction_ops(GateKind.TOFFOLI, k)
        residual = pauli_otp.residual_keys(GateKind.TOFFOLI, k, corrections)
        assert residual == pauli_otp.key_update(GateKind.TOFFOLI, k).new_keys

    def test_residual_keys_without_corrections_is_not_pauli(self):
        with pytest.raises(VerificationMismatch, match="non-Pauli"):
            pauli_otp.residual_keys(GateKind.TOFFOLI, keys((1, 0), (0, 0), (0, 0)), ())

    def test_correction_order_does_not_matter(self):
        for k in pauli_otp.all_keys(3):
            corrections = pauli_otp.correction_ops(GateKind.TOFFOLI, k)
            reference = qsim.unitary_of(corrections, 3)
            for perm in itertools.permutations(corrections):
                assert np.allclose(qsim.unitary_of(perm, 3), reference)

    def test_factorization_as_unitary(self):
        """T P(keys) == C^dagger P(new) T up to phase for all 64 key settings."""
        gate = qsim.gate_matrix(GateKind.TOFFOLI)
        for k in pauli_otp.all_keys(3):
            update = pauli_otp.key_update(GateKind.TOFFOLI, k)
            lhs = qsim.unitary_of(update.corrections, 3) @ gate @ pauli_otp.pauli_operator(k)
            rhs = pauli_otp.pauli_operator(update.new_keys) @ gate
            overlap = abs(np.trace(rhs.conj().T @ lhs)) / 8
            assert overlap == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize(
        "pairs",
        [
            ((1, 0), (0, 0), (0, 0)),
            ((0, 1), (0, 0), (0, 0)),
            ((0, 0), (1, 0), (0, 0)),
            ((0, 0), (0, 1), (0, 0)),
            ((0, 0), (0, 0), (1, 0)),
            ((0, 0), (0, 0), (0, 1)),
        ],
    )
    def test_single_key_identity_on_basis_and_random_states(self, pairs, rng):
        k = keys(*pairs)
        states = [qsim.basis_state(3, i) for i in range(8)]
        states += [qsim.haar_random_state(3, rng) for _ in range(20)]
        for state in states:
            assert pauli_otp.master_identity_holds(GateKind.TOFFOLI, k, state)


class TestToffoliDecryption:
    """Correction-form and swap-form Toffoli decryption."""

    def test_zero_keys_leave_state_unchanged(self, rng):
        state = qsim.haar_random_state(3, rng)
        zero = keys((0, 0), (0, 0), (0, 0))
        assert np.allclose(pauli_otp.toffoli_decrypt_optimized(state, zero).amplitudes, state.amplitudes)
        assert np.allclose(
            pauli_otp.toffoli_decrypt_unoptimized(state, zero).amplitudes, state.amplitudes
        )

    def test_z_on_target_is_corrected(self, rng):
        psi = qsim.haar_random_state(3, rng)
        k = keys((0, 0), (0, 0), (0, 1))
        blind = qsim.apply(pauli_otp.encrypt(psi, k), TOFFOLI)
        out = pauli_otp.toffoli_decrypt_optimized(blind, k)
        assert qsim.equal_up_to_global_phase(out, qsim.apply(psi, TOFFOLI))

    def test_random_keys_and_states(self, rng):
        for _ in range(20):
            psi = qsim.haar_random_state(3, rng)
            k = pauli_otp.random_keys(3, rng)
            blind = qsim.apply(pauli_otp.encrypt(psi, k), TOFFOLI)
            expected = qsim.apply(psi, TOFFOLI)
            assert qsim.equal_up_to_global_phase(pauli_otp.toffoli_decrypt_optimized(blind, k), expected)
            assert qsim.equal_up_to_global_phase(
                pauli_otp.toffoli_decrypt_unoptimized(blind, k), expected
            )

    def test_swap_form_equals_correction_form_exhaustively(self):
        cases = 0
        for k in pauli_otp.all_keys(3):
            for index in range(8):
                plain = qsim.basis_state(3, index)
                blind = qsim.apply(pauli_otp.encrypt(plain, k), TOFFOLI)
                assert qsim.equal_up_to_global_phase(
                    pauli_otp.toffoli_decrypt_optimized(blind, k),
                    pauli_otp.toffoli_decrypt_unoptimized(blind, k),
                )
                cases += 1
        assert cases == 512

    def test_swap_form_uses_six_extra_cnots_for_c(self):
        ops = pauli_otp.unoptimized_toffoli_ops(keys((0, 0), (1, 0), (0, 0)))
        assert len(ops) == 7
        assert all(op.kind is GateKind.CNOT for op in ops)

    def test_decrypt_on_embedded_wires(self, rng):
        psi = qsim.haar_random_state(4, rng)
        wires = (3, 0, 2)
        k = keys((1, 1), (1, 0), (0, 1))
        gate = GateOp(GateKind.TOFFOLI, wires)
        blind = qsim.apply(pauli_otp.encrypt(psi, k, wires), gate)
        out = pauli_otp.toffoli_decrypt_optimized(blind, k, wires)
        assert qsim.equal_up_to_global_phase(out, qsim.apply(psi, gate))

    def test_invalid_wires(self, rng):
        state = qsim.haar_random_state(3, rng)
        with pytest.raises(GateError):
            pauli_otp.toffoli_decrypt_optimized(state, keys((1, 0), (0, 0), (0, 0)), (0, 1, 5))
