import random

import pytest

from iwasawa_tower.errors import InputError, SizeCapError
from iwasawa_tower.extint import AtLeast
from iwasawa_tower.groupring import parse_presentation
from iwasawa_tower.padic import PadicInt
from iwasawa_tower.series import required_lambda_precision
from iwasawa_tower.tower import (
    BOUNDED,
    INCONCLUSIVE,
    UNBOUNDED,
    corank1_scan,
    default_lambda_grid,
    fpdim_block_route,
    fpdim_series_route,
    fpdim_tower,
    h1_fpdim_split,
    h1_rank_bound,
    king_f,
    king_presentation,
    king_valuation,
    rank_tower,
    stabilization_from_ranks,
    stabilization_probe,
    subgroup_fp_dim,
)

from generators import annihilated_module

EX1 = "p=3; n=2; gens=1; rel: p; rel: y - 2*x + 1"
EX2 = "p=2; n=2; gens=1; rel: p; rel: y - x^2 + x - 1"
Y_MINUS_ONE = "p=3; n=2; gens=1; rel: y - 1"


def test_series_route_ex1():
    pres = parse_presentation(EX1)
    assert [fpdim_series_route(pres, s) for s in (1, 2, 3)] == [3, 9, 27]


def test_block_route_ex1():
    pres = parse_presentation(EX1)
    assert fpdim_block_route(pres, 1) == (3, 9)
    assert fpdim_block_route(pres, 2) == (9, 81)


def test_routes_agree_ex2():
    pres = parse_presentation(EX2)
    for s in (1, 2, 3):
        assert fpdim_series_route(pres, s) == fpdim_block_route(pres, s)[0] == 2**s


def test_routes_agree_on_one_variable_modules():
    for text in ["p=3; n=1; gens=1; rel: x^2 - 1", "p=5; n=1; gens=1; rel: (x - 1)^3", "p=2; n=1; gens=1; rel: x^3 + x + 1"]:
        pres = parse_presentation(text)
        for s in (1, 2):
            assert fpdim_series_route(pres, s) == fpdim_block_route(pres, s)[0]


def test_series_route_unit_relation_kills_module():
    pres = parse_presentation("p=3; n=2; gens=1; rel: 3*x - y - 1")
    # x = (y + 1)/3 is not available, but y = 3x - 1 is: y -> -1 mod 3 is a unit
    assert fpdim_series_route(pres, 1) == fpdim_block_route(pres, 1)[0]


def test_series_route_requirements():
    with pytest.raises(InputError):
        fpdim_series_route(parse_presentation("p=3; n=2; gens=2; rel: x | y"), 1)
    with pytest.raises(InputError):
        fpdim_series_route(parse_presentation("p=3; n=2; gens=1; rel: x*y - 1"), 1)


def test_fpdim_tower_report():
    rep = fpdim_tower(parse_presentation(EX1), 2, route="series")
    assert [lv.fpdim for lv in rep.levels] == [3, 9]
    assert [lv.h1_fpdim_split for lv in rep.levels] == [5, 11]
    assert h1_fpdim_split(parse_presentation(EX1), 2) == 11


def test_rank_tower_y_minus_one():
    rep = rank_tower(parse_presentation(Y_MINUS_ONE), 3)
    assert [lv.rank for lv in rep.levels] == [3, 9, 27]
    assert rep.verdict == UNBOUNDED
    assert h1_rank_bound(parse_presentation(Y_MINUS_ONE), 1) == 5


def test_rank_tower_torsion():
    pres = parse_presentation("p=3; n=1; gens=1; rel: 9*(x - 1)")
    rep = rank_tower(pres, 2, torsion=True)
    # rows span 9 * augmentation ideal: cokernel Z + (Z/9)^(3^s - 1)
    assert [lv.rank for lv in rep.levels] == [1, 1]
    assert [lv.torsion_exponents for lv in rep.levels] == [[2] * 2, [2] * 8]


def test_rank_tower_size_cap_names_feasible_level():
    with pytest.raises(SizeCapError) as info:
        rank_tower(parse_presentation(Y_MINUS_ONE), 3, size_cap=100)
    assert "s=2" in str(info.value)


def test_levels_start_at_one():
    with pytest.raises(InputError):
        rank_tower(parse_presentation(Y_MINUS_ONE), 0)


def test_stabilization_from_ranks():
    assert stabilization_from_ranks([1, 4, 4, 4]).from_level == 2
    assert stabilization_from_ranks([1, 2, 3]).from_level is None
    assert stabilization_from_ranks([1, 2, 3]).verdict == UNBOUNDED
    assert stabilization_from_ranks([2, 2]).verdict == BOUNDED


def test_stabilization_on_annihilated_modules():
    rng = random.Random(4)
    for _ in range(10):
        pres = annihilated_module(rng, 2, 2, 1)
        rep = stabilization_probe(pres, 3)
        assert rep.stabilized and rep.from_level == 1


def test_stabilization_needs_two_levels():
    with pytest.raises(InputError):
        stabilization_probe(parse_presentation(Y_MINUS_ONE), 1)


# corank-one scans


def test_scan_flags_y_minus_one():
    pres = parse_presentation(Y_MINUS_ONE)
    rep = corank1_scan(pres, default_lambda_grid(3, n_random=3))
    flagged = [e for e in rep.entries if isinstance(e.fp_dim, AtLeast)]
    assert flagged and all(e.axis_swap and e.lam.residue == 0 for e in flagged)
    assert flagged[0].fp_dim.possibly_infinite and flagged[0].fp_dim.bound >= rep.D
    assert not rep.hypothesis_plausible
    assert rep.verdict == INCONCLUSIVE
    assert rep.to_json()["entries"][1]["subgroup"] == "<y>"


def test_scan_king_module_p5():
    pres = king_presentation(5)
    rep = corank1_scan(pres, default_lambda_grid(5, n_random=5))
    assert rep.hypothesis_plausible
    assert rep.sup_observed == 4
    assert {e.fp_dim for e in rep.entries} == {2, 4}


def test_scan_entry_matches_king_valuation():
    pres = king_presentation(7)
    D = 14
    K = required_lambda_precision(7, D)
    for r in [0, 3, 11, 48]:
        lam = PadicInt(7, K, r)
        assert subgroup_fp_dim(pres, lam, False, D) == king_valuation(lam).valuation


def test_scan_needs_rank_two():
    with pytest.raises(InputError):
        corank1_scan(parse_presentation("p=3; n=1; gens=1; rel: x - 1"), [PadicInt(3, 4, 1)])


# King's module


def test_king_frozen_series():
    # values from the convolution oracle
    K = required_lambda_precision(5, 10)
    assert list(king_f(PadicInt(5, K, 0), 10).coeffs) == [0, 0, 1, 4, 1, 4, 1, 4, 1, 4]
    assert list(king_f(PadicInt(5, K, 3), 10).coeffs) == [0, 0, 0, 0, 1, 3, 4, 3, 1, 4]


def test_king_valuation_report():
    K = required_lambda_precision(5, 10)
    rep = king_valuation(PadicInt(5, K, 3))
    assert rep.valuation == 4
    assert (rep.split.z0, rep.split.a0) == (3, 2)
    assert rep.congruent and rep.bound_ok


def test_king_rejects_p2_and_small_D():
    with pytest.raises(InputError):
        king_valuation(PadicInt(2, 8, 1))
    with pytest.raises(InputError):
        king_valuation(PadicInt(5, 8, 1), D=5)


def test_king_shortest_truncation():
    # D = p + 1 still certifies valuation 4 at p = 5
    K = required_lambda_precision(5, 6)
    assert king_valuation(PadicInt(5, K, 3), D=6).valuation == 4


def test_block_route_same_on_every_backend(backend):
    pres = parse_presentation(EX1)
    assert fpdim_block_route(pres, 2) == (9, 81)
    assert [lv.rank for lv in rank_tower(parse_presentation(Y_MINUS_ONE), 2).levels] == [3, 9]
