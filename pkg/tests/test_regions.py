from fractions import Fraction

import pytest

from lcdgraph.errors import DomainError, InfeasibleSystemError
from lcdgraph.regions import (
    BUILTIN_SYSTEMS,
    RegionSystem,
    combined_max_alpha,
    feasible_along,
    parse_inequality,
    region_max_alpha,
    region_vertices,
)


def test_parse_inequality():
    q = parse_inequality("3 1 <= 1")
    assert (q.a, q.b, q.op, q.c) == (Fraction(3), Fraction(1), "<=", Fraction(1))
    q = parse_inequality("-1 2 > 3/2")
    assert q.a == -1 and q.c == Fraction(3, 2) and q.strict


def test_parse_rejects_garbage():
    with pytest.raises(DomainError):
        parse_inequality("1 2 3")
    with pytest.raises(DomainError):
        parse_inequality("1 2 == 3")


def test_inequality_holds_and_closure():
    q = parse_inequality("1 0 < 1/3")
    assert q.holds(Fraction(1, 4), Fraction(0))
    assert not q.holds(Fraction(1, 3), Fraction(0))
    assert q.closure().holds(Fraction(1, 3), Fraction(0))


def test_first_theorem_sup_alpha_is_exactly_1_14():
    res = region_max_alpha(BUILTIN_SYSTEMS["theorem1"])
    assert res.sup_alpha == Fraction(1, 14)
    assert isinstance(res.sup_alpha, Fraction)
    assert not res.attained  # strict boundary: "sup, not attained"


def test_combined_sup_alpha_is_exactly_1_6_with_7_8_witness():
    res = combined_max_alpha()
    assert res.sup_alpha == Fraction(1, 6)
    lo, hi = res.beta_interval
    assert lo <= Fraction(7, 8) <= hi
    assert not res.attained
    # moving off the supremum along (-1, +2) enters the strict region
    sys3 = BUILTIN_SYSTEMS["theorem2-case3"]
    assert feasible_along(sys3, (Fraction(1, 6), Fraction(7, 8)), (-1, 2))


def test_case_systems_individual_suprema():
    assert region_max_alpha(BUILTIN_SYSTEMS["theorem2-case1"]).sup_alpha == Fraction(1, 10)
    assert region_max_alpha(BUILTIN_SYSTEMS["theorem2-case2"]).sup_alpha == Fraction(1, 10)
    assert region_max_alpha(BUILTIN_SYSTEMS["theorem2-case3"]).sup_alpha == Fraction(1, 6)


def test_case2_strict_system_has_no_interior():
    # its beta-window degenerates to the line beta = 1 - 2*alpha, which the
    # strict side excludes
    sys2 = BUILTIN_SYSTEMS["theorem2-case2"]
    res = region_max_alpha(sys2)
    assert not res.attained
    for a_num in range(0, 11):
        a = Fraction(a_num, 30)
        for b_num in range(0, 33):
            assert not sys2.holds(a, Fraction(b_num, 32))


def test_alpha_box_alone():
    sys = RegionSystem.from_lines(["1 0 >= 0", "1 0 <= 1/3"], "box")
    res = region_max_alpha(sys)
    assert res.sup_alpha == Fraction(1, 3)
    assert res.attained  # non-strict bound, beta unconstrained


def test_strict_alpha_bound_not_attained():
    sys = RegionSystem.from_lines(["1 0 < 1/3", "1 0 >= 0"], "strict")
    res = region_max_alpha(sys)
    assert res.sup_alpha == Fraction(1, 3)
    assert not res.attained


def test_infeasible_system():
    sys = RegionSystem.from_lines(["1 0 >= 1", "1 0 <= 0"], "empty")
    with pytest.raises(InfeasibleSystemError):
        region_max_alpha(sys)


def test_unbounded_alpha():
    sys = RegionSystem.from_lines(["1 0 >= 0"], "open")
    with pytest.raises(DomainError):
        region_max_alpha(sys)


def test_unit_box_vertices():
    sys = RegionSystem.from_lines(
        ["1 0 >= 0", "1 0 <= 1", "0 1 >= 0", "0 1 <= 1"], "unit"
    )
    verts = region_vertices(sys)
    assert set(verts) == {
        (Fraction(0), Fraction(0)),
        (Fraction(1), Fraction(0)),
        (Fraction(1), Fraction(1)),
        (Fraction(0), Fraction(1)),
    }
    assert len(verts) == 4


def test_beta_elimination_uses_cross_constraints():
    # beta >= alpha and beta <= 1 - alpha force alpha <= 1/2 even though no
    # single inequality bounds alpha above
    sys = RegionSystem.from_lines(["-1 1 >= 0", "1 1 <= 1", "1 0 >= 0"], "wedge")
    res = region_max_alpha(sys)
    assert res.sup_alpha == Fraction(1, 2)
    assert res.witness_beta == Fraction(1, 2)
    assert res.attained


def test_feasible_along_negative_case():
    sys = BUILTIN_SYSTEMS["theorem2-case3"]
    # moving toward larger alpha from the supremum leaves the region
    assert not feasible_along(sys, (Fraction(1, 6), Fraction(7, 8)), (1, 0))


def test_empty_system_rejected():
    with pytest.raises(DomainError):
        RegionSystem((), "nothing")
