import pytest
from unittest.mock import patch
from libs.cdp import BudgetExceeded
from libs.codec import code_to_text
from libs.construct import example_code
from services.handle_verify import VerifyError, handle_list_tables, handle_profile, handle_verify, validate_verify
from services.handle_construct import ConstructError, handle_bound, handle_construct, validate_construct
from services.handle_search import SearchRequestError, handle_delta, handle_search, parse_mode, validate_search
from services.handle_rareness import RarenessError, handle_rareness, handle_rareness_d4, report_csv, compute_rareness
from services.handle_simulate import CSV_HEADER, SimulateError, handle_simulate, stats_csv_row, run_simulation
from data_classes.common_classes import (
    BoundRequest,
    ConstructRequest,
    Profile,
    RarenessRequest,
    SearchMode,
    SearchRequest,
    SearchResult,
    SearchStats,
    SearchStatus,
    SimulateRequest,
    VerifyRequest,
)

EXAMPLE = code_to_text(example_code())
GF8_TABLE = "gf 3 0b1011\nn 2\nrows 4\n0\n1\n4\n3\n"


class TestVerify:

    def test_validate_verify_missing_code(self):
        """Validation with an empty body"""
        assert "code is required" in validate_verify(VerifyRequest(code=""))

    def test_handle_verify_pass(self):
        result = handle_verify(VerifyRequest(code=GF8_TABLE))
        assert result["verdict"] == "PASS"
        assert result["profile"]["distances"] == [2, 3, 4, 5, 6]
        assert result["m"] == 3

    def test_handle_verify_parse_error(self):
        """Parse errors keep their 400 status"""
        with pytest.raises(VerifyError) as exc_info:
            handle_verify(VerifyRequest(code="gf 3\n"))
        assert exc_info.value.status_code == 400

    @patch('services.handle_verify.cdp_via_minors')
    def test_handle_verify_fail(self, mock_cdp):
        mock_cdp.return_value = Profile(distances=[2, 3, 3], free_distance=3, mds_depth=1, degree=2)
        result = handle_verify(VerifyRequest(code=EXAMPLE))
        assert result["verdict"] == "FAIL"
        mock_cdp.assert_called_once()

    @patch('services.handle_verify.cdp_bruteforce')
    def test_handle_profile_bruteforce(self, mock_brute):
        mock_brute.return_value = Profile(distances=[2, 3], free_distance=None, mds_depth=1, degree=2)
        result = handle_profile(VerifyRequest(code=EXAMPLE), bruteforce=1)
        assert result["distances"] == [2, 3]
        assert mock_brute.call_args[0][1] == 1

    def test_list_tables(self):
        tables = handle_list_tables()
        assert tables[0]["label"] == "GF(2^3) n=2 delta=6"
        assert tables[0]["code"] == GF8_TABLE


class TestConstruct:

    def test_validate_unknown_kind(self):
        errors = validate_construct(ConstructRequest(kind="d5", m=3))
        assert "kind must be one of d3, d4" in errors

    def test_d4_construction(self):
        result = handle_construct(ConstructRequest(kind="d4", m=4))
        assert result["n"] == 8
        assert result["profile"]["is_mds"]
        assert all(c["holds"] for c in result["conditions"].values())

    def test_bad_constant(self):
        with pytest.raises(ConstructError) as exc_info:
            handle_construct(ConstructRequest(kind="d4", m=4, beta=1, c=0))
        assert exc_info.value.status_code == 400

    def test_beta_outside_field(self):
        """beta = 16 is not an element of GF(16)"""
        errors = validate_construct(ConstructRequest(kind="d4", m=4, beta=16, c=3))
        assert errors == ["beta must be an integer in 1..15"]
        with pytest.raises(ConstructError) as exc_info:
            handle_construct(ConstructRequest(kind="d4", m=4, beta=16, c=3))
        assert exc_info.value.status_code == 400
        assert "c must be an integer in 0..15" in validate_construct(ConstructRequest(kind="d4", m=4, beta=1, c=99))

    def test_bounds(self):
        assert handle_bound(BoundRequest(m=4, distance=4)) == {"m": 4, "distance": 4, "max_k": 7, "max_n": 8}
        assert handle_bound(BoundRequest(m=3, n=2))["max_distance"] == 9
        with pytest.raises(ConstructError):
            handle_bound(BoundRequest(m=3, n=2, distance=4))


class TestSearch:

    def test_validate_search(self):
        errors = validate_search(SearchRequest(m=3, n=1, target=2, resume=True))
        assert "n must be an integer >= 2" in errors
        assert "target must be an integer >= 3" in errors
        assert "resume needs a checkpoint path" in errors

    def test_handle_search_success(self):
        result = handle_search(SearchRequest(m=3, n=2, target=6))
        assert result["status"] == "success"
        assert result["complete"]
        assert len(result["log_rows"]) == 4

    @patch('services.handle_search.search')
    def test_handle_search_budget(self, mock_search):
        """A budget stop still reports the partial result"""
        stats = SearchStats(free_depths=3, nodes=10, deepest=1, deepest_assignment=[2, 3])
        partial = SearchResult(None, 5, 7, SearchStatus.BUDGET, False, stats)
        mock_search.side_effect = BudgetExceeded("budget exhausted", partial)
        result = handle_search(SearchRequest(m=3, n=2, target=7, max_nodes=10))
        assert result["status"] == "budget"
        assert result["code"] is None
        assert result["deepest_assignment"] == [2, 3]
        assert mock_search.call_args.kwargs["budget"].max_nodes == 10

    @patch('services.handle_search.establish_delta')
    def test_handle_delta_ignores_target(self, mock_delta):
        from data_classes.common_classes import DeltaReport, DeltaStatus
        mock_delta.return_value = DeltaReport(6, DeltaStatus.EXACT, example_code())
        result = handle_delta(SearchRequest(m=3, n=3, target=0))
        assert result["delta"] == 6
        assert result["status"] == "exact"

    def test_parse_mode(self):
        assert parse_mode("incomplete") == SearchMode.INCOMPLETE
        with pytest.raises(SearchRequestError):
            parse_mode("fast")


class TestRareness:

    def test_validate(self):
        with pytest.raises(RarenessError):
            handle_rareness(RarenessRequest(m=0, n=2, degree=4))

    def test_exact_report(self):
        result = handle_rareness(RarenessRequest(m=3, n=2, degree=4))
        assert result["exact"]
        assert result["rareness"] == "3.5e-2"

    @patch('services.handle_rareness.rareness_estimate')
    def test_probe_uses_seed(self, mock_estimate):
        mock_estimate.return_value = compute_rareness(RarenessRequest(m=3, n=2, degree=4))
        handle_rareness(RarenessRequest(m=3, n=2, degree=4, exact=False, seed=9))
        assert mock_estimate.call_args.kwargs["seed"] == 9

    def test_csv(self):
        report = compute_rareness(RarenessRequest(m=3, n=2, degree=4))
        lines = report_csv(report).splitlines()
        assert lines[0] == "depth,conditional,cumulative,samples"
        assert len(lines) == 4
        assert lines[1].startswith("r[2,1],")

    def test_d4(self):
        result = handle_rareness_d4(5)
        assert result["rareness"] == "1.2e-30"
        with pytest.raises(RarenessError):
            handle_rareness_d4(1)


class TestSimulate:

    def test_validate(self):
        with pytest.raises(SimulateError) as exc_info:
            run_simulation(SimulateRequest(code=GF8_TABLE, loss_rate=0.1, burst=[10, 2]))
        assert "give exactly one of loss_rate or burst" in exc_info.value.message

    def test_handle_simulate(self):
        result = handle_simulate(SimulateRequest(code=GF8_TABLE, loss_rate=0.0, blocks=50))
        assert result["delivered"] == 50
        assert result["unrecovered_fraction"] == 0

    def test_csv_row_matches_header(self):
        stats = run_simulation(SimulateRequest(code=GF8_TABLE, burst=[20, 2], blocks=100, seed=4))
        assert len(stats_csv_row(stats).split(",")) == len(CSV_HEADER.split(","))
        assert stats_csv_row(stats).startswith("4,g=20.0;b=2.0,100,")
