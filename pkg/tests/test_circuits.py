import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from capq import linmath as lm
from capq.channels import (
    apply,
    choi,
    choi_distance,
    compose,
    dephasing,
    identity_channel,
    replacement_channel,
    unitary_channel,
)
from capq.circuits import (
    TOY_VERIFIERS,
    build_reduction,
    canonical_form,
    compile_circuit,
    evaluate_reduction,
    evaluate_reduction_joint,
    parse_circuit,
    toy_verifier,
)
from capq.errors import CircuitError, DeadQubit, QubitCap, UnknownGate
from capq.selftest import random_fragment

seeds = st.integers(0, 2**32 - 1)

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
T = np.diag([1, np.exp(1j * np.pi / 4)])
I2 = np.eye(2)


def embed(gate, wire, n):
    # oracle: explicit Kronecker product, wire 0 most significant
    return lm.kron(*[gate if k == wire else I2 for k in range(n)])


def cnot(control, target, n):
    u = np.zeros((2**n, 2**n))
    for b in range(2**n):
        bits = [(b >> (n - 1 - k)) & 1 for k in range(n)]
        if bits[control]:
            bits[target] ^= 1
        u[sum(bit << (n - 1 - k) for k, bit in enumerate(bits)), b] = 1
    return u


def test_copy_then_discard_is_dephasing():
    ch = compile_circuit(parse_circuit("PREP 1; CNOT 0 1; TRACE 1"))
    assert choi_distance(ch, dephasing(2)) <= 1e-10


def test_cnot_convention():
    u = compile_circuit(parse_circuit("CNOT 0 1")).kraus[0]
    assert np.allclose(u @ lm.ket(2, 4), lm.ket(3, 4))  # |10> -> |11>


def test_hadamard_choi_is_pure():
    j = choi(compile_circuit(parse_circuit("H 0")))
    assert np.linalg.matrix_rank(j, tol=1e-10) == 1


def test_prep_alone_is_constant_state():
    ch = compile_circuit(parse_circuit("PREP 0"))
    assert ch.dim_in == 1 and np.allclose(apply(ch, np.eye(1)), np.diag([1, 0]))


def test_reset_is_replacement_channel():
    ch = compile_circuit(parse_circuit("TRACE 0; PREP 0", n_inputs=1))
    assert choi_distance(ch, replacement_channel(2, np.diag([1.0, 0.0]))) <= 1e-12


@given(seeds)
def test_unitary_circuits_match_kronecker_oracle(seed):
    rng = np.random.default_rng(seed)
    n = 3
    lines, u = [], np.eye(2**n)
    for _ in range(8):
        kind = rng.integers(0, 3)
        if kind == 2:
            a, b = (int(x) for x in rng.choice(n, 2, replace=False))
            lines.append(f"CNOT {a} {b}")
            u = cnot(a, b, n) @ u
        else:
            q = int(rng.integers(0, n))
            lines.append(f"{'HT'[kind]} {q}")
            u = embed((H, T)[kind], q, n) @ u
    ch = compile_circuit(parse_circuit("\n".join(lines), n_inputs=n))
    assert choi_distance(ch, unitary_channel(u)) <= 1e-10


@given(seeds)
def test_compositionality(seed):
    rng = np.random.default_rng(seed)
    f1, f2 = random_fragment(rng), random_fragment(rng)
    whole = compile_circuit(parse_circuit(f1 + f2, n_inputs=3))
    parts = compose(compile_circuit(parse_circuit(f2, n_inputs=3)), compile_circuit(parse_circuit(f1, n_inputs=3)))
    assert choi_distance(whole, parts) <= 1e-10


def test_t_eight_times_is_identity():
    assert choi_distance(compile_circuit(parse_circuit("T 0\n" * 8)), identity_channel(2)) <= 1e-12


def test_canonical_form_hoists_preps():
    n_wires, gates, outs, traced = canonical_form(parse_circuit("TRACE 0; PREP 0; H 0", n_inputs=1))
    assert n_wires == 2 and gates == [("H", (1,))] and outs == [1] and traced == [0]


def test_parse_errors_carry_line_numbers():
    with pytest.raises(UnknownGate, match="line 2"):
        parse_circuit("H 0\nX 0\n")
    with pytest.raises(DeadQubit, match="line 1"):
        parse_circuit("TRACE 5", n_inputs=1)
    with pytest.raises(DeadQubit):
        parse_circuit("TRACE 0; H 0", n_inputs=1)
    with pytest.raises(CircuitError):
        parse_circuit("CNOT 1 1")
    with pytest.raises(CircuitError):
        parse_circuit("PREP 0", n_inputs=1)


def test_qubit_cap():
    with pytest.raises(QubitCap):
        parse_circuit("H 6")
    with pytest.raises(QubitCap):
        # only four live qubits at any time, but the canonical form needs seven wires
        compile_circuit(parse_circuit("INPUTS 4\n" + "TRACE 0\nPREP 0\n" * 3))


def test_comments_and_outputs_directive():
    c = parse_circuit("# swap-free\nINPUTS 2\nOUTPUTS 1 0\nH 0  # hadamard\n")
    assert c.outputs == (1, 0)
    assert parse_circuit(c.to_text()) == c


ACCEPT_PROB = {"always_accept": 1.0, "always_reject": 0.0, "measure_proof": 1.0,
               "coin_t1": (1 - np.cos(np.pi / 4)) / 2, "coin_t2": 0.5, "coin_t3": (1 + np.cos(np.pi / 4)) / 2}


@pytest.mark.parametrize("name", sorted(TOY_VERIFIERS))
def test_reduction_tracks_accept_weight(name):
    r = build_reduction(toy_verifier(name))
    assert r.weight_accept_max() == pytest.approx(ACCEPT_PROB[name], abs=1e-12)
    est = evaluate_reduction(r)
    assert est.value == pytest.approx(ACCEPT_PROB[name], abs=2e-3)


def test_always_accept_povm_degenerates():
    r = build_reduction(toy_verifier("always_accept"))
    assert np.allclose(r.povm.elements[0], np.eye(2)) and np.allclose(r.povm.elements[1], 0)
    for sigma in (np.diag([1.0, 0.0]), np.eye(2) / 2):
        assert r.direct_sum(sigma).weights == pytest.approx((1.0, 0.0))


def test_measure_proof_prefers_one():
    r = build_reduction(toy_verifier("measure_proof"))
    assert np.allclose(r.best_proof(), np.diag([0, 1]))


def test_joint_channel_agrees_on_toys():
    for name in ("always_reject", "coin_t2", "always_accept"):
        r = build_reduction(toy_verifier(name))
        assert evaluate_reduction_joint(r, restarts=8).value == pytest.approx(ACCEPT_PROB[name], abs=2e-3)


@given(seeds)
def test_measurement_povms_are_valid_and_values_in_range(seed):
    from capq.circuits import povm_from_measurement_channel

    rng = np.random.default_rng(seed)
    # random processing of a two-qubit proof, then fold it into a fresh decision qubit
    text = random_fragment(rng, n=2) + "PREP 2\nCNOT 0 2\nH 2\nCNOT 1 2\nT 2\nTRACE 0\nTRACE 1\n"
    c = parse_circuit(text, n_inputs=2)
    povm = povm_from_measurement_channel(compile_circuit(c))
    assert np.allclose(sum(povm.elements), np.eye(4), atol=1e-10)
    assert all(np.linalg.eigvalsh(e).min() >= -1e-10 for e in povm.elements)
    est = evaluate_reduction(build_reduction(c), sigma_restarts=1, rho_restarts=2, seed=seed % 1000)
    assert -1e-6 <= est.value <= 1 + 1e-6
