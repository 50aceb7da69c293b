import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from capq import linmath as lm
from capq.channels import (
    KrausChannel,
    ad_antidegrading_map,
    ad_degrading_map,
    amplitude_damping,
    apply,
    apply_adjoint,
    apply_via_choi,
    channels_equal,
    choi,
    choi_distance,
    complement,
    compose,
    dephasing,
    identity_channel,
    random_channel,
    stinespring,
    tensor,
    tensor_power,
    trace_channel,
    validate,
    verify_antidegrading_map,
    verify_degrading_map,
)
from capq.errors import DimensionCap, InvalidChannel, ParameterRange

seeds = st.integers(0, 2**32 - 1)
etas = st.floats(0.0, 1.0)


def rand_channel(seed, din=None, dout=None, r=None):
    rng = np.random.default_rng(seed)
    din = din or int(rng.integers(1, 4))
    dout = dout or int(rng.integers(1, 4))
    r = r or int(rng.integers(-(-din // dout), 4))
    return random_channel(din, dout, r, rng), rng


def test_non_trace_preserving_rejected():
    with pytest.raises(InvalidChannel):
        KrausChannel(2, 2, (np.eye(2) * 0.9,))


def test_validate_reports_failure_without_raising():
    bad = KrausChannel.unchecked(2, 2, [np.eye(2) * 0.9])
    report = validate(bad)
    assert not report["valid"] and not report["trace_preserving"]
    assert report["tp_error"] == pytest.approx(0.19)


def test_amplitude_damping_range():
    with pytest.raises(ParameterRange):
        amplitude_damping(1.2)


def test_amplitude_damping_action():
    # |1><1| -> (1 - eta)|1><1| + eta |0><0| with eta the loss probability
    out = apply(amplitude_damping(0.3), np.diag([0.0, 1.0]))
    assert np.allclose(out, np.diag([0.3, 0.7]))


def test_dephasing_kills_coherences():
    plus = lm.projector(np.array([1, 1]) / np.sqrt(2))
    assert np.allclose(apply(dephasing(2), plus), np.eye(2) / 2)


def test_identity_choi_is_max_entangled():
    assert np.allclose(choi(identity_channel(2)), lm.projector(lm.max_entangled(2)))


@given(seeds)
def test_choi_is_state_and_reproduces_action(seed):
    ch, rng = rand_channel(seed)
    j = choi(ch)
    assert lm.is_density(j, tol=1e-9)
    assert np.allclose(lm.partial_trace(j, [ch.dim_in, ch.dim_out], keep=0), lm.maximally_mixed(ch.dim_in))
    rho = lm.random_density(ch.dim_in, rng)
    assert np.allclose(apply_via_choi(j, ch.dim_in, ch.dim_out, rho), apply(ch, rho), atol=1e-10)


@given(seeds)
def test_adjoint_duality(seed):
    ch, rng = rand_channel(seed)
    rho = lm.random_density(ch.dim_in, rng)
    x = lm.random_hermitian(ch.dim_out, rng)
    assert np.trace(apply(ch, rho) @ x) == pytest.approx(np.trace(rho @ apply_adjoint(ch, x)), abs=1e-10)


@given(seeds)
def test_stinespring_is_isometry_with_both_marginals(seed):
    ch, rng = rand_channel(seed)
    v = stinespring(ch)
    assert np.allclose(lm.dagger(v) @ v, np.eye(ch.dim_in), atol=1e-10)
    rho = lm.random_density(ch.dim_in, rng)
    joint = v @ rho @ lm.dagger(v)
    dims = [ch.dim_out, ch.num_kraus]
    assert np.allclose(lm.partial_trace(joint, dims, keep=0), apply(ch, rho), atol=1e-10)
    assert np.allclose(lm.partial_trace(joint, dims, keep=1), apply(complement(ch), rho), atol=1e-10)


@given(seeds)
def test_complement_is_involution(seed):
    ch, _ = rand_channel(seed)
    assert choi_distance(complement(complement(ch)), ch) <= 1e-10


@given(seeds)
def test_output_and_environment_entropies_match_on_pure_inputs(seed):
    ch, rng = rand_channel(seed)
    psi = lm.random_density(ch.dim_in, rng, rank=1)
    s_out = lm.von_neumann_entropy(apply(ch, psi))
    s_env = lm.von_neumann_entropy(apply(complement(ch), psi))
    assert s_out == pytest.approx(s_env, abs=1e-8)


@given(etas)
def test_amplitude_damping_complement_is_ad_of_one_minus_eta(eta):
    assert choi_distance(complement(amplitude_damping(eta)), amplitude_damping(1 - eta)) <= 1e-10


@given(st.floats(0.0, 0.5))
def test_ad_degrading_map(eta):
    ch = amplitude_damping(eta)
    assert verify_degrading_map(ch, ad_degrading_map(eta))


@given(st.floats(0.5, 1.0))
def test_ad_antidegrading_map(eta):
    assert verify_antidegrading_map(amplitude_damping(eta), ad_antidegrading_map(eta))


def test_wrong_degrading_map_rejected():
    assert not verify_degrading_map(amplitude_damping(0.3), identity_channel(2))
    with pytest.raises(ParameterRange):
        ad_degrading_map(0.7)


@given(seeds)
def test_compose_order(seed):
    a, rng = rand_channel(seed, din=2, dout=3)
    b, _ = rand_channel(seed + 1, din=3, dout=2)
    rho = lm.random_density(2, rng)
    assert np.allclose(apply(compose(b, a), rho), apply(b, apply(a, rho)), atol=1e-10)


def test_tensor_of_product_state():
    rng = np.random.default_rng(5)
    a, b = random_channel(2, 2, 2, rng), random_channel(2, 3, 2, rng)
    r1, r2 = lm.random_density(2, rng), lm.random_density(2, rng)
    assert np.allclose(apply(tensor(a, b), np.kron(r1, r2)), np.kron(apply(a, r1), apply(b, r2)))


def test_tensor_dimension_cap():
    with pytest.raises(DimensionCap):
        tensor_power(identity_channel(2), 7)


def test_trace_channel_and_equality():
    assert trace_channel(3).dim_out == 1
    assert channels_equal(compose(identity_channel(2), amplitude_damping(0.2)), amplitude_damping(0.2))
    assert not channels_equal(amplitude_damping(0.2), amplitude_damping(0.25))
