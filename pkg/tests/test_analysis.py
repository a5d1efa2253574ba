import json
import math
from fractions import Fraction

import numpy as np
import pytest

from lcdgraph.analysis import (
    ExperimentReport,
    concentration_experiment,
    cond_prob_discrepancy_table,
    corollary_experiment,
    degree_histogram,
    degree_rows_to_distribution,
    empirical_fraction,
    exact_pairing_law,
    exact_sequential_law,
    hill_exponent,
    power_law_exponent,
    sum_s1,
    sum_s2_bound,
    tv_distance,
)
from lcdgraph.analysis import DegreeHistogram
from lcdgraph.errors import DomainError, InsufficientDataError
from lcdgraph.processes import ProcessParams, generate


def _loop_graph():
    return generate(ProcessParams(1, 1, "sequential", 0))


def test_histogram_loop_graph():
    g = _loop_graph()
    assert degree_histogram(g, "total_degree").counts == {2: 1}
    assert degree_histogram(g, "in_degree").counts == {1: 1}


def test_histogram_totals_and_handshake():
    g = generate(ProcessParams(2000, 3, "sequential", 4))
    h = degree_histogram(g, "total_degree")
    assert h.total_vertices() == 2000
    assert sum(d * c for d, c in h.counts.items()) == 2 * 3 * 2000
    assert int(g.in_degrees.sum()) == int(g.out_degrees.sum()) == 3 * 2000


def test_histogram_mode_validation():
    with pytest.raises(DomainError):
        degree_histogram(_loop_graph(), "diagonal")


def test_empirical_fraction_impossible_degree_is_zero():
    params = ProcessParams(50, 1, "sequential", 0)
    res = empirical_fraction(params, 2 * 50 + 5, replicates=3)
    assert res.mean == 0.0


def test_empirical_fraction_validation():
    params = ProcessParams(10, 1, "sequential", 0)
    with pytest.raises(DomainError):
        empirical_fraction(params, 2, replicates=1)
    with pytest.raises(DomainError):
        empirical_fraction(params, 2, mode="nope", replicates=2)


def test_empirical_fraction_threaded_matches_serial():
    params = ProcessParams(2000, 1, "sequential", 9)
    serial = empirical_fraction(params, 2, replicates=8, threads=1)
    threaded = empirical_fraction(params, 2, replicates=8, threads=4)
    assert serial.fractions == threaded.fractions  # replicate streams are keyed


def _synthetic_histogram(gamma: float, c: float = 10**9) -> DegreeHistogram:
    counts = {d: int(c * d**-gamma) for d in range(5, 51)}
    return DegreeHistogram("in_degree", counts, n=sum(counts.values()), m=1,
                          variant="synthetic", seed=0)


def test_power_law_recovers_synthetic_exponents():
    for gamma in (2.0, 3.0, 4.0):
        fit = power_law_exponent(_synthetic_histogram(gamma), 5, 50)
        assert abs(fit.gamma - gamma) <= max(0.05, 2 * fit.stderr)


def test_power_law_too_few_bins():
    h = DegreeHistogram("in_degree", {5: 10, 6: 8}, 18, 1, "synthetic", 0)
    with pytest.raises(InsufficientDataError):
        power_law_exponent(h, 5, 50)


def test_hill_exponent_on_synthetic():
    gamma = hill_exponent(_synthetic_histogram(3.0), 5)
    assert 2.6 <= gamma <= 3.4


def test_concentration_degenerate_n1():
    res = concentration_experiment(ProcessParams(1, 1, "sequential", 0), 1,
                                   replicates=100)
    assert res.exceedance_rate == 0.0


def test_concentration_validation():
    with pytest.raises(DomainError):
        concentration_experiment(ProcessParams(10, 1, "sequential", 0), 1,
                                 replicates=10)


def test_concentration_small_run():
    res = concentration_experiment(ProcessParams(2000, 1, "sequential", 2), 1,
                                   replicates=100)
    assert 0.0 <= res.exceedance_rate <= 1.0
    assert res.threshold == pytest.approx(math.sqrt(2000 * math.log(2000)))


def test_sum_s1_pure_power_sum_d0():
    n, beta = 10**6, 0.8
    res = sum_s1(n, 0, beta)
    m_hi = math.floor(n**beta / math.log(n))
    approx = (2.0 / 3.0) * m_hi**1.5 / math.sqrt(n)
    assert res.value == pytest.approx(approx, rel=0.05)


def test_sum_s1_precondition_violated():
    # beta = 0.5 at n = 10^6 gives M = 72 < log^2 n = 191: outside the
    # operation's stated domain
    with pytest.raises(DomainError):
        sum_s1(10**6, 3, 0.5)


def test_sum_s1_case_classification():
    # default alpha_eff = log_n d
    res = sum_s1(10**6, 3, 0.75)
    assert res.case == 1
    res = sum_s1(10**6, 1, 0.9, alpha=0.3)  # beta > 1 - 2a, d < n^0.05
    assert res.case == 2
    d = math.ceil((10**6) ** 0.2)
    res = sum_s1(10**6, d, 0.9)
    assert res.case == 3


def test_sum_s1_case_boundary_orders_coincide():
    # at beta = 1 - 2a cases 1 and 2 claim the same order
    a = sum_s1(10**6, 2, 0.6, alpha=0.2)  # beta = 1 - 2*0.2 exactly: case 1
    b = sum_s1(10**6, 2, 0.6000001, alpha=0.2)  # infinitesimally above: case 2
    assert a.case == 1 and b.case == 2
    assert a.claimed_order == pytest.approx(b.claimed_order, rel=1e-5)


def test_sum_s2_bound_chain_and_zero():
    res = sum_s2_bound(10**6, 1, 10, 0.875)
    assert 0 < res.bound_primary <= res.bound_final
    big_d = res.m_threshold + 1
    res0 = sum_s2_bound(10**6, 1, big_d, 0.875)
    assert res0.bound_primary == res0.bound_final == 0.0


def test_sum_s2_d1_bound():
    res = sum_s2_bound(10**6, 1, 1, 0.9)
    assert res.bound_primary == pytest.approx(res.m_threshold**2 / (2 * 10**6))
    assert res.bound_primary <= 2 * 10**6


def test_corollary_validation_and_impossible_degree():
    with pytest.raises(DomainError):
        corollary_experiment([100], 1, 0.25)
    res = corollary_experiment([1000], 1, 1.2, replicates=2)  # d > 2mn
    assert res.fractions == [0.0]


def test_corollary_small_grid_runs():
    res = corollary_experiment([1000, 4000], 1, 0.25, replicates=4)
    assert len(res.fractions) == 2
    assert all(0 <= f <= 1 for f in res.fractions)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_exact_laws_agree(n):
    seq = exact_sequential_law(n)
    pair = exact_pairing_law(n)
    assert seq == pair
    assert sum(seq.values()) == 1


def test_exact_sequential_law_n2_values():
    law = exact_sequential_law(2)
    assert law == {(2, 2): Fraction(1, 3), (3, 1): Fraction(2, 3)}


def test_tv_distance_basics():
    assert tv_distance({"a": 1.0}, {"a": 1.0}) == 0.0
    assert tv_distance({"a": 1.0}, {"b": 1.0}) == 1.0
    assert tv_distance({"a": 0.5, "b": 0.5}, {"a": 1.0}) == pytest.approx(0.5)


def test_degree_rows_to_distribution():
    rows = np.array([[1, 3], [1, 3], [2, 2], [1, 3]])
    dist = degree_rows_to_distribution(rows)
    assert dist[(1, 3)] == pytest.approx(0.75)
    assert dist[(2, 2)] == pytest.approx(0.25)


def test_cond_prob_discrepancy_table():
    rows = cond_prob_discrepancy_table(4)
    cell = next(r for r in rows if (r["n"], r["k"], r["s"], r["d"]) == (2, 1, 0, 0))
    assert cell["enumerated"] == 0
    assert cell["formula"] == Fraction(1, 2)
    assert not cell["match"]
    # the agreeing n=2 cells from the closed form
    ok = next(r for r in rows if (r["n"], r["k"], r["s"], r["d"]) == (2, 1, 1, 0))
    assert ok["match"]


def test_experiment_report_roundtrip(tmp_path):
    rep = ExperimentReport("demo", {"n": 5})
    rep.replicates = [{"replicate": 0, "x": 1.5}, {"replicate": 1, "x": 2.5}]
    rep.aggregates = {"mean": 2.0}
    rep.add_verdict("mean_positive", True, "mean=2.0")
    rep.wall_clock_seconds = 1.23
    assert rep.all_passed
    payload = json.loads(rep.to_json())
    assert "wall_clock_seconds" not in payload  # deterministic by default
    assert json.loads(rep.to_json(include_timing=True))["wall_clock_seconds"] == 1.23
    csv_path = rep.write_csv(tmp_path / "demo.csv")
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "replicate,x"
    assert len(lines) == 3
    rep.add_verdict("always_wrong", False)
    assert not rep.all_passed
