import pytest

from contactloci.covers import cover_betti
from contactloci.curves import resolve_plane_curve
from contactloci.errors import UnsupportedDimensionError
from contactloci.lefschetz import lefschetz_number, zeta_factorization
from contactloci.model import (
    Divisor,
    IntersectionCell,
    SncConfiguration,
    build_dual_complex,
    validate_configuration,
)
from contactloci.separation import (
    is_m_separating,
    min_pair_multiplicity,
    pair_multiplicities,
    separate,
)

from conftest import hand_built_cusp, hand_built_node

SUITE = ("x^2+y^3", "x*y", "x^3+y^4", "x^2+y^5")


def test_min_pair_multiplicity_examples():
    assert min_pair_multiplicity(build_dual_complex(hand_built_cusp())) == 7
    assert min_pair_multiplicity(build_dual_complex(hand_built_node())) == 3
    point = SncConfiguration(
        ambient_dim=1, divisors=(Divisor(0, "o", 3, 1, False, True),)
    )
    assert min_pair_multiplicity(build_dual_complex(point)) is None


def test_is_m_separating_examples():
    cusp = hand_built_cusp()
    assert is_m_separating(cusp, 6)
    assert not is_m_separating(cusp, 7)
    assert is_m_separating(hand_built_node(), 2)


def test_cusp_m7_single_subdivision():
    sep, records = separate(hand_built_cusp(), 7)
    assert len(records) == 1
    rec = records[0]
    assert rec.pair == (2, 3)  # E3 meets the strict transform
    assert (rec.mult, rec.disc) == (7, 6)
    sums = sorted(pm for _, _, pm in pair_multiplicities(sep))
    assert sums == [8, 8, 9, 13]  # (D,S) 8, (E1,E3) 8, (E2,E3) 9, (E3,S) 13
    assert is_m_separating(sep, 7)
    assert min_pair_multiplicity(build_dual_complex(sep)) == 8


def test_cusp_m6_is_identity():
    sep, records = separate(hand_built_cusp(), 6)
    assert records == []
    assert sep == hand_built_cusp()


def test_node_m3_two_subdivisions():
    sep, records = separate(hand_built_node(), 3)
    assert len(records) == 2
    assert all((r.mult, r.disc) == (3, 3) for r in records)
    assert min_pair_multiplicity(build_dual_complex(sep)) == 4


def test_multigraph_cells_subdivide_point_by_point():
    # x^2 + y^4 has a count-2 cell between the last exceptional curve and
    # the strict transform; each point is an independent subdivision
    cfg, _ = resolve_plane_curve("x^2 + y^4")
    cell = next(c for c in cfg.cells if c.count == 2)
    m = sum(cfg.divisor(i).mult for i in cell.ids)  # pair multiplicity 5
    sep, records = separate(cfg, m)
    from_pair = [r for r in records if r.pair == cell.ids]
    assert [r.point_index for r in from_pair[:2]] == [0, 1]
    assert is_m_separating(sep, m)


def test_new_divisor_data_and_flags():
    sep, records = separate(hand_built_cusp(), 9)
    for rec in records:
        new = sep.divisor(rec.new_id)
        assert new.exceptional and new.genus == 0
        assert new.mult == rec.mult and new.disc == rec.disc
    assert validate_configuration(sep) == []


@pytest.mark.parametrize("text", SUITE)
@pytest.mark.parametrize("m", range(1, 13))
def test_separate_properties(text, m):
    cfg, _ = resolve_plane_curve(text)
    sep, records = separate(cfg, m)
    assert is_m_separating(sep, m)
    # additivity of (m, nu) for every new divisor
    lookup = {d.id: d for d in sep.divisors}
    for rec in records:
        di, dj = lookup[rec.pair[0]], lookup[rec.pair[1]]
        assert rec.mult == di.mult + dj.mult
        assert rec.disc == di.disc + dj.disc
    # Lefschetz numbers and the reduced zeta are blowup invariants
    for mm in range(1, 13):
        assert lefschetz_number(sep, mm) == lefschetz_number(cfg, mm)
    assert zeta_factorization(sep) == zeta_factorization(cfg)
    # idempotence
    again, more = separate(sep, m)
    assert more == []
    assert again == sep


def test_contributing_content_stable_under_refinement():
    # divisors created by separating beyond m have mult > m, never enter S_m
    from contactloci.spectral import contributing_set
    from contactloci.weights import solve_weights

    cfg, _ = resolve_plane_curve("x*y")
    m = 3
    sep, _ = separate(cfg, m)
    finer, extra = separate(sep, m + 4)
    assert extra  # the refinement really subdivided
    def content(c):
        out = []
        for i, k, _ in contributing_set(c, solve_weights(c), m).members:
            d = c.divisor(i)
            out.append((d.mult, d.disc, cover_betti(c, i).betti))
        return sorted(out)

    assert content(sep) == content(finer)


def test_over_sigma_flag_propagates_to_new_divisors():
    # a cell away from the center spawns divisors away from the center
    cfg = SncConfiguration(
        ambient_dim=2,
        divisors=(
            Divisor(0, "E", 2, 2, True, True, 0, -2),
            Divisor(1, "F", 1, 1, False, False, 0, None),
            Divisor(2, "G", 2, 1, False, False, 0, None),
        ),
        cells=(
            IntersectionCell((0, 1), 1, True),
            IntersectionCell((1, 2), 1, False),
        ),
    )
    sep, records = separate(cfg, 3)  # both cells have pair multiplicity 3
    flags = {rec.pair: rec.over_sigma for rec in records}
    assert flags == {(0, 1): True, (1, 2): False}
    for rec in records:
        assert sep.divisor(rec.new_id).over_sigma == rec.over_sigma


def test_higher_dimension_checker_works_but_separation_refuses():
    cfg = SncConfiguration(
        ambient_dim=3,
        divisors=(
            Divisor(0, "E", 2, 2, True, True, euler_open=1, cover_betti=(2, 0)),
            Divisor(1, "F", 3, 1, False, True, euler_open=0),
        ),
        cells=(),
    )
    sep, records = separate(cfg, 4)  # already separating: fine
    assert records == []
    cfg2 = SncConfiguration(
        ambient_dim=3,
        divisors=cfg.divisors,
        cells=(IntersectionCell((0, 1), 1, True),),
    )
    assert not is_m_separating(cfg2, 5)
    with pytest.raises(UnsupportedDimensionError):
        separate(cfg2, 5)
