"""
mdsconv command line: verify, search, construct and simulate rate
(n-1)/n convolutional codes with MDS column distance profiles.

Machine-readable output goes to stdout, logs and summaries to stderr.
Exit codes: 0 success, 1 failed check or domain error, 2 usage or parse error.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional
from libs import config
from libs.errors import MdsError, UsageError
from services.handle_verify import handle_list_tables, handle_profile, handle_verify, handle_verify_tables
from services.handle_construct import handle_bound, handle_construct
from services.handle_search import handle_delta, handle_search
from services.handle_rareness import compute_rareness, handle_rareness_d4, report_csv
from services.handle_simulate import CSV_HEADER, run_simulation, stats_csv_row
from data_classes.common_classes import (
    BoundRequest,
    ConstructRequest,
    RarenessRequest,
    SearchMode,
    SearchRequest,
    SimulateRequest,
    VerifyRequest,
)

logger = logging.getLogger("mdsconv")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")


def _emit(payload) -> None:
    print(json.dumps(payload))


def _note(message: str) -> None:
    print(message, file=sys.stderr)


# commands

def cmd_verify(args) -> int:
    if args.table_all:
        report = handle_verify_tables(slow=args.slow, jobs=args.jobs)
        for row in report["results"]:
            print(f"{row['label']}\t{row['verdict']}")
        _note(f"{report['failed']} failed")
        return 0 if report["failed"] == 0 else 1
    if not args.file:
        raise UsageError("verify needs a code file or --table-all")
    result = handle_verify(VerifyRequest(code=_read(args.file)), jobs=args.jobs)
    _emit(result)
    _note(result["verdict"])
    return 0 if result["verdict"] == "PASS" else 1


def cmd_profile(args) -> int:
    _emit(handle_profile(VerifyRequest(code=_read(args.file)), bruteforce=args.bruteforce, jobs=args.jobs))
    return 0


def _search_request(args, target: int) -> SearchRequest:
    return SearchRequest(
        m=args.m,
        n=args.n,
        target=target,
        mode=SearchMode.INCOMPLETE if args.probe else SearchMode.COMPLETE,
        seed=args.seed,
        max_nodes=args.max_nodes,
        max_seconds=args.max_seconds,
        jobs=args.jobs,
        checkpoint=getattr(args, "checkpoint", None),
        resume=getattr(args, "resume", False),
    )


def cmd_search(args) -> int:
    result = handle_search(_search_request(args, args.target))
    if result["code"] is not None:
        sys.stdout.write(result["code"])
        _note(json.dumps({k: v for k, v in result.items() if k != "code"}))
        _note("exact" if result["complete"] else "found by an incomplete search")
        return 0
    _emit({k: v for k, v in result.items() if k != "code"})
    if result["status"] == "infeasible" and result["complete"]:
        if result["delta"] == args.target - 1:
            _note(f"infeasible; delta = {result['delta']} exact")
        else:
            _note(f"infeasible; delta < {args.target}")
    else:
        _note(f"{result['status']}; delta >= {result['delta']}")
    return 1


def cmd_delta(args) -> int:
    result = handle_delta(_search_request(args, 3))
    _emit(result)
    sign = "=" if result["status"] == "exact" else ">="
    _note(f"delta(2^{args.m}, {args.n}) {sign} {result['delta']}")
    return 0


def cmd_construct(args) -> int:
    if args.d3 is not None:
        if args.params:
            raise UsageError("--d3 takes no beta/c parameters")
        body = ConstructRequest(kind="d3", m=args.d3)
    else:
        if len(args.params) not in (0, 2):
            raise UsageError("--d4 takes either no parameters or both beta and c")
        beta, c = (args.params if args.params else (None, None))
        body = ConstructRequest(kind="d4", m=args.d4, beta=beta, c=c)
    result = handle_construct(body, verify=not args.no_verify)
    sys.stdout.write(result["code"])
    _note(json.dumps({"n": result["n"], "profile": result["profile"], "conditions": result["conditions"]}))
    return 0


def cmd_bound(args) -> int:
    result = handle_bound(BoundRequest(m=args.m, n=args.n, distance=args.distance))
    _emit(result)
    if "max_k" in result:
        _note(f"k <= {result['max_k']}")
    else:
        _note(f"distance <= {result['max_distance']}")
    return 0


def cmd_rareness(args) -> int:
    report = compute_rareness(RarenessRequest(
        m=args.m,
        n=args.n,
        degree=args.degree,
        exact=not args.probe,
        seed=args.seed,
        max_nodes=args.max_nodes,
        jobs=args.jobs,
    ))
    sys.stdout.write(report_csv(report))
    _note(f"rareness {report.probability:.2g} ({'exact' if report.exact else 'estimated'})")
    return 0


def cmd_rareness_d4(args) -> int:
    result = handle_rareness_d4(args.m)
    _emit(result)
    _note(f"rareness {result['rareness']}")
    return 0


def cmd_simulate(args) -> int:
    stats = run_simulation(SimulateRequest(
        code=_read(args.file),
        loss_rate=args.loss,
        burst=args.burst,
        blocks=args.blocks,
        seed=args.seed,
        window=args.window,
        parity_only=args.parity_only,
    ))
    print(CSV_HEADER)
    print(stats_csv_row(stats))
    _note(f"unrecovered fraction {stats.unrecovered_fraction:.3g}")
    return 0


def cmd_tables(args) -> int:
    for entry in handle_list_tables():
        print(f"{entry['label']}\t{entry['rareness']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdsconv", description=__doc__.strip().splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    parser.add_argument("--jobs", type=int, default=config.JOBS, help="worker processes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a code file or every bundled table entry")
    p.add_argument("file", nargs="?")
    p.add_argument("--table-all", action="store_true")
    p.add_argument("--slow", action="store_true", help="include entries over GF(2^10) and larger")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("profile", help="column distance profile of a code file")
    p.add_argument("file")
    p.add_argument("--bruteforce", type=int, metavar="L", help="exhaustive column distances d_0..d_L")
    p.set_defaults(func=cmd_profile)

    def search_options(p):
        p.add_argument("m", type=int)
        p.add_argument("n", type=int)
        group = p.add_mutually_exclusive_group()
        group.add_argument("--complete", action="store_true", default=True)
        group.add_argument("--probe", action="store_true")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-nodes", type=int)
        p.add_argument("--max-seconds", type=float)

    p = sub.add_parser("search", help="search for a code reaching a target distance")
    search_options(p)
    p.add_argument("target", type=int)
    p.add_argument("--checkpoint")
    p.add_argument("--resume", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("delta", help="largest distance reachable for (m, n)")
    search_options(p)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("construct", help="closed-form constructions")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--d3", type=int, metavar="M")
    group.add_argument("--d4", type=int, metavar="M")
    p.add_argument("params", nargs="*", type=int, metavar="BETA C")
    p.add_argument("--no-verify", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("bound", help="upper bound on distance or on k")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--distance", type=int)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("rareness", help="fraction of random encoders that are MDS")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("degree", type=int)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", default=True)
    group.add_argument("--probe", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-nodes", type=int)
    p.set_defaults(func=cmd_rareness)

    p = sub.add_parser("rareness-d4", help="closed-form rareness of the degree-2 construction")
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_rareness_d4)

    p = sub.add_parser("simulate", help="erasure channel simulation")
    p.add_argument("file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--loss", type=float, metavar="P")
    group.add_argument("--burst", type=float, nargs=2, metavar=("G", "B"))
    p.add_argument("--blocks", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", type=int)
    p.add_argument("--parity-only", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tables", help="list bundled table entries")
    p.set_defaults(func=cmd_tables)
    return parser


def configure_logging(verbosity: int) -> None:
    level = config.LOG_LEVEL.upper()
    if verbosity == 1:
        level = "INFO"
    elif verbosity >= 2:
        level = "DEBUG"
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.func(args)
    except MdsError as e:
        _note(f"error: {e.message}")
        return e.exit_code
    except Exception as e:
        logger.error(f"unexpected failure: {str(e)}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
