import pytest
from libs.gf import BadDegree, default_field
from libs.codec import code_from_coefficients, with_degree
from libs.cdp import cdp_via_minors
from libs.construct import (
    BadBeta,
    BadConstant,
    DegreeTooSmall,
    DistanceTooSmall,
    check_d4_conditions,
    construct_d3,
    construct_d4,
    example_code,
    max_distance_bound,
    max_k_bound,
    trace_hyperplane,
)
from libs.search import search
from data_classes.common_classes import SearchBudget, SearchStatus


class TestDistanceThree:

    def test_gf4(self):
        """r_1 = (1, alpha, alpha^2) and profile [2, 3]"""
        code = construct_d3(default_field(2))
        assert code.n == 4
        assert code.coeffs[1] == (1, 2, 3)
        assert cdp_via_minors(code).distances == [2, 3]

    def test_gf8(self):
        code = construct_d3(default_field(3))
        assert code.n == 8
        assert cdp_via_minors(code).is_mds

    @pytest.mark.parametrize("m", [2, 3, 4, 5] + [pytest.param(m, marks=pytest.mark.slow) for m in (6, 7, 8)])
    def test_profile_over_each_field(self, m):
        code = construct_d3(default_field(m))
        assert code.n == 2 ** m
        assert cdp_via_minors(code).distances == [2, 3]

    @pytest.mark.parametrize("m", [pytest.param(3, marks=pytest.mark.slow), pytest.param(4, marks=pytest.mark.slow)])
    def test_no_code_of_this_rate_reaches_distance_four(self, m):
        """Exhaustive search over every degree-2 code with n = 2^m"""
        result = search(default_field(m), 2 ** m, 4, use_bound=False, budget=SearchBudget(max_nodes=50_000_000))
        assert result.status == SearchStatus.INFEASIBLE
        assert result.complete

    def test_cannot_extend_to_distance_four(self):
        """Over GF(4) no degree-2 row lifts the rate 3/4 code to distance 4"""
        from itertools import product
        field = default_field(2)
        base = construct_d3(field)
        for row in product(range(1, 4), repeat=3):
            code = code_from_coefficients(field, 4, list(base.coeffs) + [row])
            assert cdp_via_minors(code).mds_depth < 2


class TestDistanceFour:

    def test_hyperplane_size(self, gf16):
        for beta in range(1, 16):
            assert len(trace_hyperplane(gf16, beta)) == 8

    def test_gf4_construction(self):
        """H_1 = {0, 1} in GF(4), so k = 1"""
        field = default_field(2)
        assert trace_hyperplane(field, 1) == [0, 1]
        code = construct_d4(field)
        assert code.n == 2
        assert code.coeffs == ((1,), (1,), (3,))
        assert cdp_via_minors(code).distances == [2, 3, 4]

    def test_gf16_construction(self, gf16):
        """Rate 7/8 over GF(16) with free distance 4"""
        code = construct_d4(gf16)
        assert code.n == 8
        profile = cdp_via_minors(code)
        assert profile.distances == [2, 3, 4]

    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
    def test_conditions_hold_for_constructions(self, m):
        code = construct_d4(default_field(m))
        assert code.n == 2 ** (m - 1)
        assert check_d4_conditions(code).all_hold
        assert cdp_via_minors(code).distances == [2, 3, 4]

    def test_other_beta_and_c(self, gf16):
        hyperplane = set(trace_hyperplane(gf16, 3))
        c = next(x for x in gf16.elements() if x not in hyperplane)
        code = construct_d4(gf16, beta=3, c=c)
        assert cdp_via_minors(code).is_mds

    def test_bad_parameters(self, gf16):
        with pytest.raises(BadBeta):
            construct_d4(gf16, beta=0)
        with pytest.raises(BadBeta):
            construct_d4(gf16, beta=16)
        with pytest.raises(BadBeta):
            trace_hyperplane(gf16, -1)
        with pytest.raises(BadConstant):
            construct_d4(gf16, beta=1, c=0)
        with pytest.raises(BadDegree):
            construct_d4(default_field(1))


class TestConditions:

    def test_example_code(self):
        """All six conditions hold for the GF(8), n=3 example"""
        report = check_d4_conditions(example_code())
        assert report.all_hold
        assert set(report.to_dict()) == {"i", "ii", "iii", "iv", "v", "vi"}

    def test_planted_ratio_violates_iv(self, gf8):
        """r_{2,s}/r_{1,s} = r_{2,t}/r_{1,t} breaks condition iv"""
        a, b = 2, 4
        ratio = 3
        code = code_from_coefficients(
            gf8, 3, [(1, 1), (a, b), (gf8.mul(a, ratio), gf8.mul(b, ratio))]
        )
        report = check_d4_conditions(code)
        assert not report["iv"].holds
        assert report["iv"].witness == (1, 2)

    def test_repeated_column_violates_ii(self, gf8):
        code = code_from_coefficients(gf8, 3, [(1, 1), (2, 2), (3, 5)])
        assert not check_d4_conditions(code)["ii"].holds
        assert cdp_via_minors(code).mds_depth == 0

    def test_needs_degree_two(self, gf8):
        with pytest.raises(DegreeTooSmall):
            check_d4_conditions(with_degree(example_code(), 1))


class TestBounds:

    def test_max_k(self, gf16):
        assert max_k_bound(gf16, 4) == 7
        assert max_k_bound(default_field(2), 3) == 3

    def test_max_distance(self, gf8):
        assert max_distance_bound(gf8, 2) == 9
        assert max_distance_bound(default_field(4), 3) == 9

    def test_bound_errors(self, gf8):
        with pytest.raises(DistanceTooSmall):
            max_k_bound(gf8, 2)
