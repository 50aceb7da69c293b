import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from capq import linmath as lm
from capq.errors import NegativeEigenvalue, NonHermitian

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 8)


def test_binary_entropy_oracle():
    # h(1/4) from the closed form -(1/4)log2(1/4) - (3/4)log2(3/4)
    assert lm.von_neumann_entropy(np.diag([0.75, 0.25])) == pytest.approx(0.8112781244591328, abs=1e-12)


def test_entropy_of_pure_and_mixed():
    assert lm.von_neumann_entropy(lm.projector(lm.ket(1, 3))) == pytest.approx(0.0, abs=1e-12)
    assert lm.von_neumann_entropy(lm.maximally_mixed(8)) == pytest.approx(3.0, abs=1e-12)


def test_entropy_accepts_subnormalized():
    # S(p I/2) = -2 (p/2) log2(p/2)
    p = 0.3
    assert lm.von_neumann_entropy(p * lm.maximally_mixed(2)) == pytest.approx(-p * np.log2(p / 2))


def test_entropy_clamps_tiny_negative_and_rejects_large_negative():
    assert lm.von_neumann_entropy(np.diag([1.0, -1e-10])) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(NegativeEigenvalue):
        lm.von_neumann_entropy(np.diag([1.0, -1e-3]))


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(NonHermitian):
        lm.herm_eig(np.array([[0, 1], [0, 0]]))


def test_c5_adjacency_min_eigenvalue():
    a = np.roll(np.eye(5), 1, axis=1)
    w, _ = lm.herm_eig(a + a.T)
    assert w[-1] == pytest.approx(-1.6180339887498949, abs=1e-12)  # 2 cos(4 pi / 5)


@given(seeds, dims)
def test_herm_eig_reconstructs(seed, d):
    m = lm.random_hermitian(d, np.random.default_rng(seed))
    for method in ("lapack", "jacobi"):
        w, u = lm.herm_eig(m, method=method)
        assert np.all(np.diff(w) <= 1e-12)
        assert np.allclose((u * w) @ lm.dagger(u), m, atol=1e-10)
        assert lm.is_unitary(u, tol=1e-10)


@given(seeds, dims)
def test_jacobi_agrees_with_lapack(seed, d):
    m = lm.random_hermitian(d, np.random.default_rng(seed))
    assert np.allclose(lm.herm_eig(m, method="jacobi")[0], lm.herm_eig(m)[0], atol=1e-10)


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_partial_trace_of_product(seed, da, db):
    rng = np.random.default_rng(seed)
    a, b = lm.random_density(da, rng), lm.random_density(db, rng)
    ab = np.kron(a, b)
    assert np.allclose(lm.partial_trace(ab, [da, db], keep=0), a)
    assert np.allclose(lm.partial_trace(ab, [da, db], keep="B"), b)


def test_partial_trace_three_systems(rng):
    rs = [lm.random_density(d, rng) for d in (2, 3, 2)]
    full = lm.kron(*rs)
    assert np.allclose(lm.partial_trace(full, [2, 3, 2], keep=[0, 2]), np.kron(rs[0], rs[2]))


@given(seeds, dims)
def test_entropy_bounds(seed, d):
    rho = lm.random_density(d, np.random.default_rng(seed))
    s = lm.von_neumann_entropy(rho)
    assert -1e-12 <= s <= np.log2(d) + 1e-12


@given(seeds, st.integers(1, 6))
def test_pure_bipartite_marginals_have_equal_entropy(seed, d):
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(d * 3) + 1j * rng.standard_normal(d * 3)
    rho = lm.projector(psi / np.linalg.norm(psi))
    sa = lm.von_neumann_entropy(lm.partial_trace(rho, [d, 3], keep=0))
    sb = lm.von_neumann_entropy(lm.partial_trace(rho, [d, 3], keep=1))
    assert sa == pytest.approx(sb, abs=1e-9)


def test_max_entangled_marginal():
    phi = lm.projector(lm.max_entangled(3))
    assert np.allclose(lm.partial_trace(phi, [3, 3], keep=0), lm.maximally_mixed(3))


def test_trace_distance_orthogonal_states():
    assert lm.trace_distance(lm.projector(lm.ket(0, 2)), lm.projector(lm.ket(1, 2))) == pytest.approx(1.0)
