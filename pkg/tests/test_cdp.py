import warnings
import pytest
import numpy as np
from libs.gf import default_field
from libs.codec import code_from_coefficients, code_from_log_rows
from libs.cdp import (
    BadPosition,
    BudgetExceeded,
    CannotShortenRateHalf,
    NotCanonicalWarning,
    ZeroScalar,
    cdp_bruteforce,
    cdp_via_minors,
    equivalent_codes,
    frobenius_transform,
    permute_columns,
    scale_transform,
    shorten,
)
from libs.construct import example_code
from libs.tables import entry_code, load_tables


def random_code(field, n, D, rng, canonical=True):
    k = n - 1
    first = tuple([1] * k) if canonical else tuple(int(v) for v in rng.integers(1, field.size, size=k))
    rows = [first] + [tuple(int(v) for v in rng.integers(0, field.size, size=k)) for _ in range(D)]
    return code_from_coefficients(field, n, rows)


def gf8_table_code():
    return code_from_log_rows(default_field(3), 2, [[0], [1], [4], [3]])


class TestProfiles:

    def test_table_code_is_mds(self):
        """Column distances 2, 3, ..., 6 for the GF(8), n=2 entry"""
        profile = cdp_via_minors(gf8_table_code())
        assert profile.distances == [2, 3, 4, 5, 6]
        assert profile.free_distance == 6
        assert profile.is_mds

    def test_bruteforce_agrees_on_table_code(self):
        profile = cdp_bruteforce(gf8_table_code(), 4)
        assert profile.distances == [2, 3, 4, 5, 6]
        assert profile.mds_depth == 4

    def test_example_code(self):
        """The worked GF(8), n=3 example reaches distance 4"""
        profile = cdp_via_minors(example_code())
        assert profile.mds_depth == 2
        assert profile.distances == [2, 3, 4]

    def test_failure_reports_witness(self, gf8):
        code = code_from_coefficients(gf8, 2, [(1,), (1,), (1,)])
        profile = cdp_via_minors(code)
        assert profile.mds_depth == 1
        assert profile.witness is not None
        assert profile.distances[:2] == [2, 3]
        assert profile.distances[2] < 4

    def test_zero_degree_zero_coefficient(self, gf8):
        """d_0 = 1 when some r_{0,j} vanishes"""
        code = code_from_coefficients(gf8, 3, [(0, 1), (1, 1)])
        profile = cdp_via_minors(code)
        assert profile.mds_depth == -1
        assert profile.distances[0] == 1

    def test_non_canonical_code_warns(self, gf8):
        code = code_from_coefficients(gf8, 2, [(3,), (5,)])
        with pytest.warns(NotCanonicalWarning):
            profile = cdp_via_minors(code)
        assert profile.mds_depth == 1

    def test_bruteforce_budget(self):
        with pytest.raises(BudgetExceeded):
            cdp_bruteforce(gf8_table_code(), 4, budget=100)

    def test_unknown_tail_beyond_budget(self, gf8):
        """Distances after the MDS chain stay unknown when encoding is too expensive"""
        code = code_from_coefficients(gf8, 2, [(1,), (1,), (1,)])
        profile = cdp_via_minors(code, budget=10)
        assert profile.distances == [2, 3, None]

    def test_parallel_bruteforce(self):
        assert cdp_bruteforce(example_code(), 2, jobs=2).distances == [2, 3, 4]


class TestOracleEquivalence:

    @pytest.mark.parametrize("m,n,D", [(2, 2, 3), (3, 2, 3), (2, 3, 2)])
    def test_quick_sample(self, m, n, D):
        """Minor-based MDS depth equals the exhaustive one"""
        field = default_field(m)
        rng = np.random.default_rng(m * 100 + n * 10 + D)
        for _ in range(15):
            code = random_code(field, n, D, rng)
            assert cdp_via_minors(code).mds_depth == cdp_bruteforce(code, D).mds_depth

    @pytest.mark.slow
    def test_bulk(self):
        rng = np.random.default_rng(2024)
        shapes = [(2, 2, 3), (3, 2, 3), (2, 3, 2), (3, 3, 2), (4, 2, 2)]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NotCanonicalWarning)
            for i in range(500):
                m, n, D = shapes[i % len(shapes)]
                code = random_code(default_field(m), n, D, rng, canonical=i % 2 == 0)
                assert cdp_via_minors(code).distances == cdp_bruteforce(code, D).distances


class TestTransforms:

    def test_transforms_preserve_profile(self):
        code = gf8_table_code()
        for c in range(1, 8):
            assert cdp_via_minors(scale_transform(code, c)).is_mds
        for image in equivalent_codes(code):
            assert cdp_via_minors(image).is_mds

    @pytest.mark.parametrize("entry", [e for e in load_tables() if e.m <= 5], ids=lambda e: e.label())
    def test_bundled_codes_under_transforms(self, entry):
        """Scaling and Frobenius keep the profile, shortening never lowers it"""
        code = entry_code(entry)
        distances = cdp_via_minors(code).distances
        if entry.m <= 4:
            for c in range(1, code.field.size):
                assert cdp_via_minors(scale_transform(code, c)).distances == distances, f"c = {c}"
        for image in equivalent_codes(code)[1:]:
            assert cdp_via_minors(image).distances == distances
        if code.k >= 2:
            for j0 in range(1, code.k + 1):
                shortened = cdp_via_minors(shorten(code, j0)).distances
                assert all(s >= d for s, d in zip(shortened, distances) if s is not None and d is not None)

    def test_frobenius_orbit_size_divides_m(self):
        orbit = equivalent_codes(example_code())
        assert orbit[0] == example_code()
        assert 3 % len(orbit) == 0
        assert frobenius_transform(orbit[-1]) == orbit[0]

    def test_permute_columns(self):
        code = example_code()
        swapped = permute_columns(code, [2, 1])
        assert swapped.coeffs[1] == (2, 1)
        assert cdp_via_minors(swapped).distances == cdp_via_minors(code).distances
        with pytest.raises(BadPosition):
            permute_columns(code, [1, 1])

    def test_shorten_keeps_mds(self):
        """Dropping an information position keeps the profile MDS"""
        code = example_code()
        for j0 in (1, 2):
            short = shorten(code, j0)
            assert short.n == 2
            assert cdp_via_minors(short).mds_depth == 2

    def test_transform_errors(self):
        with pytest.raises(ZeroScalar):
            scale_transform(example_code(), 0)
        with pytest.raises(CannotShortenRateHalf):
            shorten(gf8_table_code(), 1)
        with pytest.raises(BadPosition):
            shorten(example_code(), 3)
