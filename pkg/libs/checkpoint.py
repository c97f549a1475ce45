"""
Checkpoint files for long searches.

Layout: the 8-byte magic b"MDSCKPT1", a little-endian uint16 format
version, a little-endian uint32 payload length, then the payload as
UTF-8 JSON.
"""
import json
import logging
import os
import struct
from pathlib import Path
from typing import Any, Dict, Union
from libs.errors import MdsError

logger = logging.getLogger(__name__)

MAGIC = b"MDSCKPT1"
VERSION = 1
_HEADER = struct.Struct("<HI")


class CheckpointError(MdsError):
    pass


def save_checkpoint(path: Union[str, Path], payload: Dict[str, Any]) -> None:
    body = json.dumps(payload, separators=(",", ":")).encode("utf-8")
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as f:
        f.write(MAGIC)
        f.write(_HEADER.pack(VERSION, len(body)))
        f.write(body)
    os.replace(tmp, path)
    logger.info(f"checkpoint written to {path} ({len(body)} bytes)")


def load_checkpoint(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {str(e)}")

    if data[:len(MAGIC)] != MAGIC:
        raise CheckpointError(f"{path} is not a search checkpoint")
    offset = len(MAGIC)
    if len(data) < offset + _HEADER.size:
        raise CheckpointError(f"{path} is truncated")
    version, length = _HEADER.unpack_from(data, offset)
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    body = data[offset + _HEADER.size:]
    if len(body) != length:
        raise CheckpointError(f"{path} payload is {len(body)} bytes, header says {length}")
    try:
        return json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointError(f"corrupt checkpoint payload: {str(e)}")
