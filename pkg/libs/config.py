import os
from typing import Optional
from dotenv import load_dotenv

load_dotenv()


def _int(name: str, default: int) -> int:
    return int(float(os.getenv(name, default)))


def _optional_float(name: str) -> Optional[float]:
    value = os.getenv(name)
    return float(value) if value else None


MINOR_CAP = _int("MDS_MINOR_CAP", 10**8)
BRUTEFORCE_BUDGET = _int("MDS_BRUTEFORCE_BUDGET", 2**26)
DET_CACHE = _int("MDS_DET_CACHE", 2**20)

SEARCH_MAX_NODES = _int("MDS_SEARCH_MAX_NODES", 2_000_000)
SEARCH_MAX_SECONDS = _optional_float("MDS_SEARCH_MAX_SECONDS")
PROBE_SAMPLE = _int("MDS_PROBE_SAMPLE", 8)
PROBE_MAX_NODES = _int("MDS_PROBE_MAX_NODES", 200_000)
CHECKPOINT_EVERY = _int("MDS_CHECKPOINT_EVERY", 100_000)
PROGRESS_EVERY = _int("MDS_PROGRESS_EVERY", 100_000)

WINDOW_SLACK = _int("MDS_WINDOW_SLACK", 8)
JOBS = _int("MDS_JOBS", 1)
LOG_LEVEL = os.getenv("MDS_LOG_LEVEL", "WARNING")
PORT = _int("PORT", 5000)
