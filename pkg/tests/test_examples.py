"""Small worked examples, one or two per operation."""

import random

import pytest

from iwasawa_tower.bounds import (
    CyclicDecomposition,
    FiveTermInput,
    WilsonBoundParams,
    coinvariant_dim_bound,
    d_of_U,
    d_of_U_direct,
    decompose_finite_module,
    five_term_bounds,
    wilson_check,
)
from iwasawa_tower.errors import InputError
from iwasawa_tower.extint import AtLeast
from iwasawa_tower.groupring import expand_level, parse_presentation, substitute_character
from iwasawa_tower.linalg import SeriesMatrix, cokernel_fp_dim, dvr_snf, integer_snf, rank_over_Fp, rank_over_Q
from iwasawa_tower.padic import PadicInt
from iwasawa_tower.series import (
    TruncatedSeries,
    one_plus_t_pow,
    required_lambda_precision,
    series_inverse,
    series_valuation,
)
from iwasawa_tower.tower import (
    UNBOUNDED,
    corank1_scan,
    default_lambda_grid,
    h1_fpdim_split,
    h1_rank_bound,
    king_f,
    king_presentation,
    king_valuation,
    rank_tower,
    stabilization_probe,
)

EX1 = "p=3; n=2; gens=1; rel: p; rel: y - 2*x + 1"
EX2 = "p=2; n=2; gens=1; rel: p; rel: y - x^2 + x - 1"
FREE_N1 = "p=3; n=1; gens=1;"
SHIFTED = "p=3; n=1; gens=1; rel: x - (1+p)"


def lam(p, r, D):
    return PadicInt(p, required_lambda_precision(p, D), r)


def f0(p=5, D=10):
    return king_f(lam(p, 0, D), D)


# series


def test_series_products():
    one_t = TruncatedSeries.one_plus_t(5, 8)
    assert (one_t * (2 - one_t)).coeffs == (1, 0, 4, 0, 0, 0, 0, 0)
    assert (TruncatedSeries.one_plus_t(3, 9) ** 3).coeffs == (1, 0, 0, 1, 0, 0, 0, 0, 0)


def test_series_inverses():
    assert series_inverse(TruncatedSeries.constant(1, 3, 4)).coeffs == (1, 0, 0, 0)
    assert series_inverse(TruncatedSeries.one_plus_t(3, 3)).coeffs == (1, 2, 1)
    assert series_inverse(TruncatedSeries.one_plus_t(5, 4, K=2)).coeffs == (1, 24, 1, 24)


def test_one_plus_t_pow_examples():
    assert one_plus_t_pow(lam(3, 1, 6), 6).coeffs == (1, 1, 0, 0, 0, 0)
    nine = one_plus_t_pow(lam(3, 9, 27), 27)
    assert nine.coeffs == tuple(1 if j in (0, 9) else 0 for j in range(27))
    assert one_plus_t_pow(lam(5, -1, 5), 5).coeffs == (1, 4, 1, 4, 1)


def test_series_valuation_examples():
    assert series_valuation(f0()) == 2
    assert series_valuation(TruncatedSeries(5, 1, 7, ())) == AtLeast(7)
    assert series_valuation(TruncatedSeries.monomial(4, 5, 9) * TruncatedSeries.one_plus_t(5, 9)) == 4


# group module


def test_free_module_level_matrix():
    lm = expand_level(parse_presentation(FREE_N1), 1)
    assert lm.shape == (0, 3)


def test_shifted_relation_level_matrix():
    # shift - 4 I, determinant 4^3 - 1 = 63 up to sign
    m = expand_level(parse_presentation(SHIFTED), 1).matrix.dense()
    assert m == [[-4, 1, 0], [0, -4, 1], [1, 0, -4]]
    assert rank_over_Q(m) == 3
    assert integer_snf(m) == [1, 1, 63]


def test_ex1_level_one_shape():
    lm = expand_level(parse_presentation(EX1), 1)
    # two relations, one block of 9 rows each, 9 group elements
    assert lm.shape == (18, 9)


def test_king_substitution_at_zero():
    rows = substitute_character(king_presentation(5), lam(5, 0, 10), D=10)
    assert rows[0][0].is_zero()  # the scalar p
    assert series_valuation(rows[1][0]) == 2


def test_ex1_axis_subgroup():
    # x -> 1 + t, y -> 1: y - 2x + 1 becomes -2t
    rows = substitute_character(parse_presentation(EX1), lam(3, 0, 6), axis_swap=True, D=6)
    assert rows[1][0].coeffs == (0, 1, 0, 0, 0, 0)


def test_parse_rejects_non_prime():
    with pytest.raises(InputError):
        parse_presentation("p=4; n=2; gens=1; rel: x - 1")


# linear algebra


def test_rank_examples():
    assert rank_over_Q([[int(i == j) for j in range(4)] for i in range(4)]) == 4
    rng = random.Random(1)
    U = [[rng.randrange(-5, 6) for _ in range(3)] for _ in range(6)]
    V = [[rng.randrange(-5, 6) for _ in range(6)] for _ in range(3)]
    UV = [[sum(U[i][k] * V[k][j] for k in range(3)) for j in range(6)] for i in range(6)]
    assert rank_over_Q(UV) == 3
    assert rank_over_Fp([[5 * int(i == j) for j in range(3)] for i in range(3)], 5) == 0
    lm = expand_level(parse_presentation(EX1), 1).matrix
    assert lm.ncols - rank_over_Fp(lm, 3) == 3


def test_integer_snf_tower_entry():
    assert integer_snf([[(1 + 3) ** 3 - 1]]) == [63]


def test_dvr_snf_examples():
    assert dvr_snf(SeriesMatrix.diagonal([2, 5], 5, 8)).divisor_valuations == [2, 5]
    assert dvr_snf(SeriesMatrix([[f0()]], 5, 10)).divisor_valuations == [2]
    row = SeriesMatrix.from_coeff_lists([[[0, 0, 0, 1], [0, 1]]], 3, 8)
    assert dvr_snf(row).divisor_valuations == [1]


@pytest.mark.parametrize("i", [1, 2, 3])
def test_ex1_substituted_ideal(i):
    p, D = 3, 3**i + 2
    one_t = TruncatedSeries.one_plus_t(p, D)
    M = SeriesMatrix([[one_t ** (p**i) - 1], [(2 * one_t - 1) ** (p**i) - 1]], p, D, 1)
    assert cokernel_fp_dim(M) == p**i
    if i == 1:
        assert decompose_finite_module(M).exponents == (3,)


def test_cokernel_examples():
    assert cokernel_fp_dim(SeriesMatrix([[f0()]], 5, 10)) == 2
    zero = cokernel_fp_dim(SeriesMatrix.from_coeff_lists([[[0]]], 5, 10))
    assert zero == AtLeast(10, possibly_infinite=True)


# tower engine


def test_rank_tower_examples():
    assert [lv.rank for lv in rank_tower(parse_presentation(FREE_N1), 2).levels] == [3, 9]
    assert [lv.rank for lv in rank_tower(parse_presentation(SHIFTED), 3).levels] == [0, 0, 0]
    rep = rank_tower(parse_presentation("p=3; n=2; gens=1; rel: y - 1"), 3)
    assert [lv.rank for lv in rep.levels] == [3, 9, 27] and rep.verdict == UNBOUNDED


def test_h1_split_examples():
    assert h1_fpdim_split(parse_presentation(EX1), 1) == 5
    assert h1_fpdim_split(parse_presentation(EX2), 3, route="series") == 10
    with pytest.raises(InputError):
        h1_fpdim_split(parse_presentation(FREE_N1), 0)


def test_h1_rank_examples():
    assert h1_rank_bound(parse_presentation(SHIFTED), 2) == 1
    assert h1_rank_bound(parse_presentation(FREE_N1), 2) == 10
    assert h1_rank_bound(parse_presentation(EX1), 1) == 2


def test_scan_examples():
    grid = [PadicInt(5, 4, r) for r in range(25)]
    rep = corank1_scan(king_presentation(5), grid)
    assert all(e.fp_dim < 5 for e in rep.entries)
    assert rep.sup_observed <= 4
    rep = corank1_scan(parse_presentation(EX1), default_lambda_grid(3))
    assert rep.hypothesis_plausible


def test_king_examples():
    assert king_valuation(lam(5, 0, 10)).valuation == 2
    assert king_valuation(lam(5, 3, 10)).valuation == 4
    assert {king_valuation(PadicInt(3, 6, r)).valuation for r in range(81)} == {2}


def test_stabilization_examples():
    rep = stabilization_probe(parse_presentation("p=3; n=2; gens=1; rel: x^3 - 1; rel: y^3 - 1; rel: 3"), 2)
    assert rep.stabilized
    rep = stabilization_probe(parse_presentation(SHIFTED), 3)
    assert rep.from_level == 1 and rep.ranks == [0, 0, 0]
    rep = stabilization_probe(parse_presentation("p=3; n=2; gens=1; rel: y - 1"), 3)
    assert not rep.stabilized
    assert rep.to_json()["message"] == "not stabilized within range"


# structure bounds


def test_decompose_examples():
    dec = decompose_finite_module(SeriesMatrix.diagonal([1, 3], 3, 10))
    assert (dec.exponents, dec.m, dec.d_H) == ((1, 3), 3, 4)
    dec = decompose_finite_module(SeriesMatrix([[f0()]], 5, 10))
    assert (dec.exponents, dec.d_H) == ((2,), 2)


def test_d_of_U_examples():
    assert d_of_U(CyclicDecomposition((1, 3)), 3, 2) == 5
    assert d_of_U(CyclicDecomposition((1,)), 2, 1) == 2
    with pytest.raises(InputError):
        d_of_U(CyclicDecomposition((4,)), 3, 1)


def test_d_of_U_direct_examples():
    M = SeriesMatrix.diagonal([1, 3], 3, 12)
    assert d_of_U_direct(M, 3, 2) == 5
    assert d_of_U_direct(M, 3, 1) == 5
    assert d_of_U_direct(SeriesMatrix.diagonal([0], 3, 12), 3, 1) == 1


def test_wilson_examples():
    assert wilson_check(5, WilsonBoundParams(2, 9))
    assert not wilson_check(7, WilsonBoundParams(2, 9))


def test_five_term_examples():
    assert five_term_bounds(FiveTermInput(3, 1, 0)) == (4, 4)
    assert five_term_bounds(FiveTermInput(3, 2, 1)) == (4, 5)
    assert five_term_bounds(FiveTermInput(0, 0, 5)) == (0, 0)


def test_coinvariant_examples():
    assert coinvariant_dim_bound(4, 2) == 3
    assert coinvariant_dim_bound(0, 1) == 0
    assert coinvariant_dim_bound(10, 4) == 10
