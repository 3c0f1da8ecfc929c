"""Property-based tests for encryption, key updates and whole sessions."""

import numpy as np
import pytest

pytest.importorskip("hypothesis")

from hypothesis import given, settings  # noqa: E402
from hypothesis import strategies as st  # noqa: E402

from fdqc.delegation.blindness import encrypted_view  # noqa: E402
from fdqc.delegation.protocol import run_fdqc, run_hdqc  # noqa: E402
from fdqc.quantum import pauli_otp, qsim  # noqa: E402
from fdqc.quantum.gateset import DELEGATABLE_KINDS, direct_eval, random_program  # noqa: E402
from fdqc.quantum.pauli_otp import PauliKey  # noqa: E402

keys_strategy = st.builds(PauliKey, st.integers(0, 1), st.integers(0, 1))
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def haar(n_qubits: int, seed: int) -> qsim.Statevector:
    return qsim.haar_random_state(n_qubits, np.random.default_rng(seed))


class TestEncryptionProperties:
    @given(n=st.integers(1, 4), seed=seeds, data=st.data())
    @settings(max_examples=50, deadline=None)
    def test_decrypt_inverts_encrypt(self, n, seed, data):
        keys = data.draw(st.lists(keys_strategy, min_size=n, max_size=n))
        state = haar(n, seed)
        back = pauli_otp.decrypt(pauli_otp.encrypt(state, keys), keys)
        assert np.allclose(back.amplitudes, state.amplitudes, atol=1e-12)

    @given(seed=seeds)
    @settings(max_examples=50, deadline=None)
    def test_encrypted_qubit_is_maximally_mixed(self, seed):
        rho = encrypted_view(haar(1, seed))
        assert rho.allclose(qsim.maximally_mixed(1), 1e-10)


class TestKeyUpdateProperties:
    @given(kind=st.sampled_from(sorted(DELEGATABLE_KINDS)), seed=seeds, data=st.data())
    @settings(max_examples=100, deadline=None)
    def test_master_identity(self, kind, seed, data):
        keys = data.draw(st.lists(keys_strategy, min_size=kind.arity, max_size=kind.arity))
        assert pauli_otp.master_identity_holds(kind, keys, haar(kind.arity, seed))

    @given(data=st.data())
    @settings(max_examples=50, deadline=None)
    def test_correction_count_is_a_plus_c_plus_f(self, data):
        keys = data.draw(st.lists(keys_strategy, min_size=3, max_size=3))
        update = pauli_otp.key_update("TOFFOLI", keys)
        assert len(update.corrections) == keys[0].a + keys[1].a + keys[2].b


class TestSessionProperties:
    @given(n=st.integers(1, 3), length=st.integers(0, 8), seed=seeds)
    @settings(max_examples=40, deadline=None)
    def test_fdqc_matches_direct_eval(self, n, length, seed):
        program = random_program(n, length, seed)
        state = haar(n, seed)
        result = run_fdqc(program, state, seed)
        assert qsim.equal_up_to_global_phase(result.output, direct_eval(program, state))
        assert result.rounds == length + result.corrections

    @given(length=st.integers(0, 6), seed=seeds)
    @settings(max_examples=20, deadline=None)
    def test_fdqc_and_hdqc_agree(self, length, seed):
        program = random_program(3, length, seed)
        state = haar(3, seed)
        blind = run_fdqc(program, state, seed)
        leaky = run_hdqc(program, state, seed)
        assert qsim.equal_up_to_global_phase(blind.output, leaky.output)
        assert blind.ground_truth == leaky.ground_truth
