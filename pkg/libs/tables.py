"""
Bundled table of rate (n-1)/n codes with MDS column distance profiles,
one entry per line of tables.txt.
"""
import logging
from pathlib import Path
from typing import List, Optional, Tuple
from libs.errors import MdsError
from libs.gf import default_field
from libs.codec import code_from_log_rows
from libs.cdp import cdp_via_minors
from data_classes.common_classes import CodeSpec, Profile, TableEntry

logger = logging.getLogger(__name__)

TABLE_PATH = Path(__file__).with_name("tables.txt")

# entries over GF(2^10) and larger take minutes each
HEAVY_DEGREE = 10


def parse_entry(line: str) -> TableEntry:
    fields = line.rstrip("\n").split("\t")
    if len(fields) != 5:
        raise MdsError(f"malformed table line: {line!r}", 400)
    m, n, delta, coeffs, rareness = fields
    exact = not delta.startswith(">=")
    log_rows = [[int(v) for v in row.split()] for row in coeffs.split(",")]
    return TableEntry(
        m=int(m),
        n=int(n),
        delta=int(delta.lstrip(">=")),
        exact=exact,
        log_rows=log_rows,
        rareness=rareness,
    )


def load_tables(path: Optional[Path] = None) -> List[TableEntry]:
    entries = []
    with open(path or TABLE_PATH, encoding="utf-8") as f:
        for line in f:
            if not line.strip() or line.startswith("#"):
                continue
            entries.append(parse_entry(line))
    return entries


def entry_code(entry: TableEntry) -> CodeSpec:
    return code_from_log_rows(default_field(entry.m), entry.n, entry.log_rows)


def find_entry(m: int, n: int) -> TableEntry:
    for entry in load_tables():
        if (entry.m, entry.n) == (m, n):
            return entry
    raise MdsError(f"no bundled code for GF(2^{m}), n={n}", 404)


def is_heavy(entry: TableEntry) -> bool:
    return entry.m >= HEAVY_DEGREE


def verify_entry(entry: TableEntry, jobs: int = 1) -> Tuple[bool, Profile]:
    """PASS when the column distances are exactly 2, 3, ..., delta."""
    code = entry_code(entry)
    profile = cdp_via_minors(code, jobs=jobs)
    passed = profile.mds_depth == entry.delta - 2
    logger.info(f"{entry.label()}: {'PASS' if passed else 'FAIL'}")
    return passed, profile
