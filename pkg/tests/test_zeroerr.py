import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from capq import linmath as lm
from capq.channels import apply
from capq.errors import DimensionMismatch, FormatError, SizeCap
from capq.zeroerr import (
    Graph,
    PvmStrategy,
    block_diagonal,
    capacity_bounds,
    check_pvm_strategy,
    classical_strategy,
    complete_graph,
    cq_channel,
    cycle_graph,
    distinguishability_certificate,
    empty_graph,
    extracted_conflict_norm,
    gram_system,
    independence_number,
    independence_number_bruteforce,
    parse_graph,
    petersen_graph,
    random_graph,
    strategy_to_encoders,
    to_dimacs,
    to_edge_list,
)

seeds = st.integers(0, 2**32 - 1)


@given(seeds, st.integers(0, 16), st.floats(0.0, 1.0))
def test_exact_mis_matches_brute_force(seed, n, p):
    g = random_graph(n, p, np.random.default_rng(seed))
    size, witness = independence_number(g)
    assert size == independence_number_bruteforce(g)
    assert len(witness) == size and g.is_independent(witness)


@pytest.mark.parametrize("g, alpha", [
    (cycle_graph(5), 2), (cycle_graph(7), 3), (petersen_graph(), 4),
    (complete_graph(5), 1), (empty_graph(4), 4),
])
def test_known_independence_numbers(g, alpha):
    assert independence_number(g)[0] == alpha


def test_exact_mis_size_cap():
    with pytest.raises(SizeCap):
        independence_number(empty_graph(41))


def test_petersen_is_three_regular():
    g = petersen_graph()
    assert g.n == 10 and len(g.edges) == 15
    assert set(g.adjacency().sum(axis=1)) == {3}


@given(seeds, st.integers(1, 12), st.floats(0.0, 1.0))
def test_gram_vectors(seed, n, p):
    g = random_graph(n, p, np.random.default_rng(seed))
    gs = gram_system(g)
    gram = gs.gram()
    assert np.allclose(np.diag(gram), 1.0, atol=1e-10)
    for v, w in itertools.combinations(range(n), 2):
        target = 1.0 / (1.0 + gs.alpha) if g.adjacent(v, w) else 0.0
        assert abs(gram[v, w] - target) <= 1e-8


def test_c5_alpha():
    assert gram_system(cycle_graph(5)).alpha == pytest.approx(0.618034, abs=1e-6)


@given(seeds, st.integers(1, 8), st.floats(0.0, 1.0))
def test_cq_channel_outputs_gram_states(seed, n, p):
    g = random_graph(n, p, np.random.default_rng(seed))
    gs = gram_system(g)
    ch = cq_channel(gs)
    for v in range(n):
        out = apply(ch, lm.projector(lm.ket(v, n)))
        assert np.allclose(out, lm.projector(gs.vectors[:, v]), atol=1e-10)


def test_graph_formats_round_trip():
    g = petersen_graph()
    assert parse_graph(to_edge_list(g)).edges == g.edges
    assert parse_graph(to_dimacs(g)).edges == g.edges
    assert parse_graph("c comment\np edge 3 1\ne 1 3\n").edges == frozenset({(0, 2)})


@pytest.mark.parametrize("text", ["", "3 2\n0 1\n", "p edge 3 1\ne 1\n", "2 1\n0 5\n", "x y\n"])
def test_malformed_graph_files(text):
    with pytest.raises(FormatError):
        parse_graph(text)


@pytest.mark.parametrize("g, alpha", [
    (cycle_graph(5), 2), (petersen_graph(), 4), (complete_graph(5), 1), (empty_graph(4), 4),
])
def test_capacity_bounds_certificates(g, alpha):
    b = capacity_bounds(g)
    assert b.independence_number == alpha
    assert b.certificate.max_overlap <= 1e-8 and b.certificate.certified_t == alpha
    assert b.lower_bits == pytest.approx(np.log2(alpha))
    assert b.upper_bits == pytest.approx(np.log2(g.n))


def test_c5_bounds():
    b = capacity_bounds(cycle_graph(5))
    assert (b.lower_bits, b.upper_bits) == pytest.approx((1.0, 2.321928094887362))


def test_confusable_answers_are_not_certified():
    g = cycle_graph(5)
    cert = distinguishability_certificate(g, classical_strategy(g, (0, 1)))
    assert cert.max_overlap > 1e-3 and cert.certified_t == 1


def test_corrupted_strategy_reports_exact_tuple():
    g = cycle_graph(5)
    bad = block_diagonal(classical_strategy(g, (0, 1)), classical_strategy(g, (2, 4)))
    ok, violations = check_pvm_strategy(bad, g)
    assert not ok
    assert [(x.kind, x.i, x.j, x.v, x.w) for x in violations] == [("Conflict", 0, 1, 0, 1)]
    assert violations[0].norm == pytest.approx(1.0)


def test_block_sums_of_valid_strategies_pass():
    g = petersen_graph()
    _, witness = independence_number(g)
    a = classical_strategy(g, witness)
    b = classical_strategy(g, witness[::-1])
    s = block_diagonal(a, b)
    assert check_pvm_strategy(s, g)[0]
    assert distinguishability_certificate(g, s).certified_t == 4
    assert extracted_conflict_norm(g, strategy_to_encoders(s)) <= 1e-10


def test_other_violation_kinds():
    g = empty_graph(2)
    half = np.eye(2) / 2
    s = PvmStrategy(1, 2, ((half, half),))
    kinds = {x.kind for x in check_pvm_strategy(s, g)[1]}
    assert kinds == {"NonProjective", "NonOrthogonal"}
    s = PvmStrategy(1, 1, ((np.eye(1), np.eye(1) * 0),))
    assert check_pvm_strategy(s, g)[0]
    s = PvmStrategy(1, 1, ((np.zeros((1, 1)), np.zeros((1, 1))),))
    assert [x.kind for x in check_pvm_strategy(s, g)[1]] == ["Incomplete"]


def test_strategy_shape_errors():
    with pytest.raises(DimensionMismatch):
        check_pvm_strategy(classical_strategy(cycle_graph(5), (0, 2)), cycle_graph(6))
    with pytest.raises(DimensionMismatch):
        PvmStrategy(2, 1, ((np.eye(1),),))


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 0)])
