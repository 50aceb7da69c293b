"""The reproducible acceptance suite behind ``capq selftest``.

Each check returns a JSON-ready dict ``{"id", "name", "passed", "metrics"}``.
Randomness for check ``k`` comes from ``default_rng([seed, k])``, so a given
seed reproduces every metric exactly.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import linmath as lm
from .capacity import coherent_information, one_shot_capacity, subnorm_entropy_identity
from .channels import amplitude_damping, choi_distance, compose, dephasing, identity_channel, random_channel
from .circuits import build_reduction, compile_circuit, evaluate_reduction, parse_circuit, toy_verifier
from .directsum import ProjectiveDirectSum, additivity_formula_check, complement_identity_check, two_outcome
from .zeroerr import (
    block_diagonal,
    capacity_bounds,
    check_pvm_strategy,
    classical_strategy,
    complete_graph,
    cycle_graph,
    distinguishability_certificate,
    empty_graph,
    extracted_conflict_norm,
    gram_system,
    petersen_graph,
    random_graph,
    strategy_to_encoders,
)


def _result(k, name, passed, **metrics):
    return {"id": k, "name": name, "passed": bool(passed), "metrics": metrics}


def random_povm_element(d: int, rng) -> np.ndarray:
    u = lm.random_unitary(d, rng)
    return (u * rng.uniform(0, 1, d)) @ lm.dagger(u)


def check_entropy_identity(seed=0, workers=1):
    rng = np.random.default_rng([seed, 1])
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(1, 9))
        omega = lm.random_density(d, rng, rank=int(rng.integers(1, d + 1)))
        p = float(rng.uniform(0, 1))
        lhs, rhs = subnorm_entropy_identity(p, omega)
        worst = max(worst, abs(lhs - rhs))
    return _result(1, "subnormalized entropy identity", worst <= 1e-9, max_error=worst)


def check_known_capacities(seed=0, workers=1):
    rng = np.random.default_rng([seed, 2])
    q_id = one_shot_capacity(identity_channel(2), seed=seed, workers=workers).value
    q_ad = one_shot_capacity(amplitude_damping(0.5), seed=seed, workers=workers).value
    ad = amplitude_damping(0.5)
    ic = max(abs(coherent_information(ad, lm.random_density(2, rng))) for _ in range(100))
    ok = abs(q_id - 1.0) <= 1e-4 and abs(q_ad) <= 1e-4 and ic <= 1e-9
    return _result(2, "known one-shot capacities", ok, q1_identity=q_id, q1_ad_half=q_ad,
                   max_abs_ic_ad_half=ic)


def check_complement_identity(seed=0, workers=1):
    rng = np.random.default_rng([seed, 3])
    worst = 0.0
    for _ in range(20):
        phi0 = random_channel(2, 2, int(rng.integers(1, 4)), rng)
        phi1 = random_channel(2, 2, int(rng.integers(1, 4)), rng)
        dm = int(rng.integers(1, 5))
        ds = ProjectiveDirectSum.create(phi0, phi1, two_outcome(random_povm_element(dm, rng)),
                                        lm.random_density(dm, rng))
        dist, _ = complement_identity_check(ds)
        worst = max(worst, dist)
    return _result(3, "complement of direct sum", worst <= 1e-8, max_choi_distance=worst)


def check_additivity_formula(seed=0, workers=1):
    rng = np.random.default_rng([seed, 4])
    worst, rows = 0.0, []
    for _ in range(10):
        e0, e1 = rng.uniform(0, 0.5, 2)
        ds = ProjectiveDirectSum.create(amplitude_damping(e0), amplitude_damping(e1),
                                        two_outcome(random_povm_element(2, rng)), lm.random_density(2, rng))
        lhs, rhs, _ = additivity_formula_check(ds, restarts=32, seed=seed, workers=workers)
        worst = max(worst, abs(lhs - rhs))
        rows.append([float(e0), float(e1), ds.weights[0], lhs, rhs])
    return _result(4, "direct-sum coherent information formula", worst <= 2e-3,
                   max_gap=worst, instances=rows)


def check_extreme_bound(seed=0, workers=1):
    values = {}
    for w0 in (0.25, 0.5, 0.75):
        sigma = np.diag([w0, 1.0 - w0])
        ds = ProjectiveDirectSum.create(identity_channel(2), amplitude_damping(0.5),
                                        two_outcome(np.diag([1.0, 0.0])), sigma)
        values[str(w0)] = one_shot_capacity(ds.channel, seed=seed, workers=workers).value
    ok = all(abs(v - float(w)) <= 2e-3 for w, v in values.items())
    return _result(5, "identity vs AD(1/2) direct sum equals weight", ok, values=values)


REDUCTION_LADDER = ("always_reject", "coin_t1", "coin_t2", "coin_t3", "always_accept")


def check_reduction(seed=0, workers=1):
    rows = []
    for name in REDUCTION_LADDER:
        r = build_reduction(toy_verifier(name))
        est = evaluate_reduction(r, seed=seed, workers=workers)
        rows.append({"verifier": name, "weight_accept_max": r.weight_accept_max(), "value": est.value})
    rows.sort(key=lambda row: row["weight_accept_max"])
    monotone = all(a["value"] <= b["value"] + 2e-3 for a, b in zip(rows, rows[1:]))
    by_name = {row["verifier"]: row["value"] for row in rows}
    ok = by_name["always_accept"] >= 0.999 and by_name["always_reject"] <= 0.001 and monotone
    return _result(6, "reduction gap and monotonicity", ok, verifiers=rows, monotone=monotone)


def random_fragment(rng, n: int = 3) -> str:
    """Random program on qubits 0..n-1 using at most one fresh ancilla (label n)."""
    lines = []
    mode = rng.integers(0, 3)
    if mode == 1:
        lines.append(f"PREP {n}")
    live = n + 1 if mode == 1 else n
    for _ in range(int(rng.integers(2, 8))):
        g = rng.choice(["H", "T", "CNOT"])
        if g == "CNOT":
            a, b = rng.choice(live, 2, replace=False)
            lines.append(f"CNOT {a} {b}")
        else:
            lines.append(f"{g} {rng.integers(0, live)}")
    if mode == 1:
        lines.append(f"TRACE {n}")
    elif mode == 2:
        q = int(rng.integers(0, n))
        lines += [f"TRACE {q}", f"PREP {q}", f"H {q}"]
    return "\n".join(lines) + "\n"


def check_circuit_compiler(seed=0, workers=1):
    rng = np.random.default_rng([seed, 7])
    dist_deph = choi_distance(compile_circuit(parse_circuit("PREP 1; CNOT 0 1; TRACE 1")), dephasing(2))
    worst = 0.0
    for _ in range(50):
        f1, f2 = random_fragment(rng), random_fragment(rng)
        c1, c2 = parse_circuit(f1, n_inputs=3), parse_circuit(f2, n_inputs=3)
        whole = parse_circuit(f1 + f2, n_inputs=3)
        d = choi_distance(compose(compile_circuit(c2), compile_circuit(c1)), compile_circuit(whole))
        worst = max(worst, d)
    ok = dist_deph <= 1e-10 and worst <= 1e-10
    return _result(7, "circuit compiler", ok, dephasing_distance=dist_deph, max_composition_distance=worst)


def check_gram_construction(seed=0, workers=1):
    rng = np.random.default_rng([seed, 8])
    worst_edge, worst_nonedge = 0.0, 0.0
    for _ in range(200):
        g = random_graph(int(rng.integers(1, 13)), float(rng.uniform(0, 1)), rng)
        gs = gram_system(g)
        gram = gs.gram()
        for v, w in itertools.combinations(range(g.n), 2):
            if g.adjacent(v, w):
                worst_edge = max(worst_edge, abs(gram[v, w] - 1.0 / (1.0 + gs.alpha)))
            else:
                worst_nonedge = max(worst_nonedge, abs(gram[v, w]))
    alpha_c5 = gram_system(cycle_graph(5)).alpha
    ok = worst_edge <= 1e-8 and worst_nonedge <= 1e-8 and abs(alpha_c5 - 0.618034) <= 1e-6
    return _result(8, "Gram vectors of the confusability matrix", ok, max_edge_error=worst_edge,
                   max_nonedge_overlap=worst_nonedge, alpha_c5=alpha_c5)


CERTIFICATE_GRAPHS = {
    "C5": (cycle_graph, (5,), 2),
    "Petersen": (petersen_graph, (), 4),
    "K5": (complete_graph, (5,), 1),
    "empty4": (empty_graph, (4,), 4),
}


def check_zero_error_certificates(seed=0, workers=1):
    rows, ok = {}, True
    for name, (make, args, expected) in CERTIFICATE_GRAPHS.items():
        b = capacity_bounds(make(*args))
        good = (b.independence_number == expected and b.certificate.max_overlap <= 1e-8
                and b.certificate.certified_t == expected)
        ok &= good
        rows[name] = {"alpha": b.independence_number, "max_overlap": b.certificate.max_overlap,
                      "lower_bits": b.lower_bits, "upper_bits": b.upper_bits}
    return _result(9, "zero-error certificates", ok, graphs=rows)


def check_strategy_checker(seed=0, workers=1):
    g = cycle_graph(5)
    good = block_diagonal(classical_strategy(g, (0, 2)), classical_strategy(g, (2, 4)))
    bad = block_diagonal(classical_strategy(g, (0, 1)), classical_strategy(g, (2, 4)))
    valid_good, _ = check_pvm_strategy(good, g)
    valid_bad, violations = check_pvm_strategy(bad, g)
    tuples = [[x.kind, x.i, x.j, x.v, x.w] for x in violations]
    rejected_exactly = (not valid_bad) and tuples == [["Conflict", 0, 1, 0, 1]]

    # every ordered independent pair gives a valid classical strategy; all pairwise block sums must pass
    pairs = [p for p in itertools.permutations(range(g.n), 2) if g.is_independent(p)]
    classical = [classical_strategy(g, p) for p in pairs]
    all_pass, worst_converse = True, 0.0
    for a, b in itertools.product(classical, repeat=2):
        s = block_diagonal(a, b)
        all_pass &= check_pvm_strategy(s, g)[0]
        if distinguishability_certificate(g, s).max_overlap <= 1e-10:
            worst_converse = max(worst_converse, extracted_conflict_norm(g, strategy_to_encoders(s)))
    ok = valid_good and rejected_exactly and all_pass and worst_converse <= 1e-4
    return _result(10, "strategy checker", ok, corrupted_violations=tuples,
                   block_sums_checked=len(classical) ** 2, all_block_sums_valid=all_pass,
                   max_extracted_conflict=worst_converse)


CHECKS = (
    check_entropy_identity,
    check_known_capacities,
    check_complement_identity,
    check_additivity_formula,
    check_extreme_bound,
    check_reduction,
    check_circuit_compiler,
    check_gram_construction,
    check_zero_error_certificates,
    check_strategy_checker,
)


def run_selftest(seed: int = 0, workers: int = 1) -> list[dict]:
    return [check(seed=seed, workers=workers) for check in CHECKS]
