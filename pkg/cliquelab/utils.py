import hashlib
import json
import logging
import os
from fractions import Fraction

from .errors import ResourceGuardError

logger = logging.getLogger(__name__)

DEFAULT_MAX_CLIQUES = 200_000
DEFAULT_MAX_NODES = 100_000_000


class NodeBudget:
    """Counts search nodes and raises once ``limit`` is passed."""

    def __init__(self, limit: int = DEFAULT_MAX_NODES, guard: str = "max_nodes"):
        self.limit = limit
        self.guard = guard
        self.used = 0

    def tick(self, detail: str = "") -> None:
        self.used += 1
        if self.used > self.limit:
            raise ResourceGuardError(self.guard, self.limit, detail)


def derive_seed(master: int, *coordinates) -> int:
    """64-bit seed for one cell of a sweep, stable across runs and processes."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(master)).encode())
    for c in coordinates:
        h.update(b"\x1f")
        h.update(str(c).encode())
    return int.from_bytes(h.digest(), "big")


def jsonable(value):
    """Fractions become ``"p/q"`` strings, sets become sorted lists."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (set, frozenset)):
        return sorted(jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    return value


def sidecar_path(path) -> str:
    return f"{path}.meta.json"


def load_metadata_from_file(filepath):
    """Load a metadata sidecar; a missing file reads as an empty dict."""
    try:
        if os.path.exists(filepath):
            with open(filepath, "r", encoding="utf-8") as f:
                return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"❌ Failed to load metadata from {filepath}: {e}")
    return {}


def save_metadata_to_file(data, filepath):
    """Write a metadata sidecar with sorted keys so reruns are byte-identical."""
    directory = os.path.dirname(filepath)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(filepath, "w", encoding="utf-8") as f:
        json.dump(jsonable(data), f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
    logger.info(f"💾 Metadata saved to: {filepath}")
