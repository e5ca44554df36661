import pytest

from contactloci.curves import (
    blowup_numeric_rules,
    point_configuration,
    resolve_plane_curve,
    resolve_univariate,
)
from contactloci.errors import DomainError
from contactloci.model import validate_configuration


def by_label(cfg):
    return {d.label: d for d in cfg.divisors}


def cells_by_labels(cfg):
    labels = {d.id: d.label for d in cfg.divisors}
    return {tuple(sorted(labels[i] for i in c.ids)): c.count for c in cfg.cells}


def test_cusp_resolution_matches_hand_computation():
    cfg, log = resolve_plane_curve("x^2 + y^3")
    divs = by_label(cfg)
    assert (divs["E1"].mult, divs["E1"].disc, divs["E1"].self_int) == (2, 2, -3)
    assert (divs["E2"].mult, divs["E2"].disc, divs["E2"].self_int) == (3, 3, -2)
    assert (divs["E3"].mult, divs["E3"].disc, divs["E3"].self_int) == (6, 5, -1)
    assert (divs["D1"].mult, divs["D1"].disc) == (1, 1)
    assert not divs["D1"].exceptional and not divs["D1"].over_sigma
    assert cells_by_labels(cfg) == {("E1", "E3"): 1, ("E2", "E3"): 1, ("D1", "E3"): 1}
    assert len(log.blowups) == 3


def test_node_resolution():
    cfg, log = resolve_plane_curve("x*y")
    divs = by_label(cfg)
    assert (divs["E1"].mult, divs["E1"].disc, divs["E1"].self_int) == (2, 2, -1)
    assert cells_by_labels(cfg) == {("D1", "E1"): 1, ("D2", "E1"): 1}
    assert len(log.blowups) == 1


def test_smooth_multiple_line():
    cfg, _ = resolve_plane_curve("x^2")
    divs = by_label(cfg)
    assert (divs["E1"].mult, divs["E1"].disc) == (2, 2)
    assert (divs["D1"].mult, divs["D1"].disc) == (2, 1)


def test_smooth_multiple_line_minimal():
    cfg, log = resolve_plane_curve("x^2", ensure_sigma_divisor=False)
    assert [(d.label, d.mult, d.disc) for d in cfg.divisors] == [("D1", 2, 1)]
    assert cfg.cells == ()
    assert log.blowups == ()
    # the minimal output has no divisor over the center, validation says so
    assert any("Sigma" in str(i) for i in validate_configuration(cfg))


@pytest.mark.parametrize(
    "p,q",
    [(2, 3), (2, 5), (2, 7), (3, 4), (3, 5), (4, 5)],
)
def test_coprime_power_pairs_have_mult_pq(p, q):
    cfg, _ = resolve_plane_curve(f"x^{p} + y^{q}")
    assert max(d.mult for d in cfg.divisors) == p * q
    assert validate_configuration(cfg) == []


@pytest.mark.parametrize("text", ["x^2+y^3", "x*y", "x^3+y^4", "x^2+y^5", "x^3+y^3", "x^2+y^4"])
def test_outputs_validate(text):
    cfg, _ = resolve_plane_curve(text)
    assert validate_configuration(cfg) == []


def test_discrepancy_growth():
    # nu_new - 1 >= number of divisors through the center
    for text in ("x^2+y^3", "x^3+y^4", "x^2+y^5"):
        _, log = resolve_plane_curve(text)
        for rec in log.blowups:
            assert rec.disc - 1 >= len(rec.axis_indices)


def test_blowup_rule_first_center():
    assert blowup_numeric_rules([], 2) == (2, 2)


def test_blowup_rule_on_one_divisor():
    # cusp step two: center on E1 (m=2, nu=2) with strict multiplicity 1
    assert blowup_numeric_rules([(2, 2)], 1) == (3, 3)


def test_blowup_rule_triple_point():
    # cusp step three: center on E1, E2 and the strict transform
    assert blowup_numeric_rules([(2, 2), (3, 3)], 1) == (6, 5)


def test_conjugate_intersection_clusters():
    cfg, _ = resolve_plane_curve("x^2 + y^2")
    assert cells_by_labels(cfg) == {("D1", "E1"): 2}
    cfg3, _ = resolve_plane_curve("x^3 + y^3")
    assert cells_by_labels(cfg3) == {("D1", "E1"): 1, ("D2", "E1"): 2}
    cfg4, _ = resolve_plane_curve("x^4 + y^4")
    assert cells_by_labels(cfg4) == {("D1", "E1"): 4}


def test_tangential_smooth_pair():
    cfg, _ = resolve_plane_curve("(y - x^2)*(y + x^2)")
    divs = by_label(cfg)
    assert (divs["E1"].mult, divs["E1"].disc, divs["E1"].self_int) == (2, 2, -2)
    assert (divs["E2"].mult, divs["E2"].disc, divs["E2"].self_int) == (4, 3, -1)
    assert cells_by_labels(cfg) == {
        ("D1", "E2"): 1,
        ("D2", "E2"): 1,
        ("E1", "E2"): 1,
    }


def test_non_reduced_factor_multiplicity():
    cfg, _ = resolve_plane_curve("x^2*y")
    divs = by_label(cfg)
    assert divs["E1"].mult == 3  # 2 + 1
    strict_mults = sorted(d.mult for d in cfg.divisors if not d.exceptional)
    assert strict_mults == [1, 2]


def test_factor_away_from_origin_is_dropped():
    cfg, log = resolve_plane_curve("x*(x - 1)")
    assert log.dropped_factors == ("x - 1",)
    divs = by_label(cfg)
    assert set(divs) == {"E1", "D1"}
    # the dropped factor is a unit near the origin, so it adds nothing to m
    assert divs["E1"].mult == 1


def test_rejects_nonvanishing_germ():
    with pytest.raises(DomainError):
        resolve_plane_curve("x + 1")
    with pytest.raises(DomainError):
        resolve_plane_curve("0")


def test_blowup_step_rejects_empty_center():
    from contactloci.curves import LocalProblem, ResolutionState, blowup_step

    state = ResolutionState({})
    problem = LocalProblem.make({}, {}, "nowhere")
    with pytest.raises(DomainError):
        blowup_step(state, problem)


def test_iteration_cap():
    from contactloci.errors import ResourceLimitError

    with pytest.raises(ResourceLimitError):
        resolve_plane_curve("x^5 + y^13", max_blowups=2)


def test_point_configuration():
    cfg = point_configuration(3)
    assert cfg.ambient_dim == 1
    assert cfg.divisors[0].mult == 3
    assert cfg.divisors[0].over_sigma and not cfg.divisors[0].exceptional
    assert validate_configuration(cfg) == []


def test_resolve_univariate():
    cfg = resolve_univariate("x^4")
    assert cfg.divisors[0].mult == 4
    with pytest.raises(DomainError):
        resolve_univariate("x + 1")
