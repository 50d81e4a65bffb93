"""
config.py — central configuration for the quasi-uniform structure lab.

Size caps, oracle defaults and the specialization convention live here.
Override any value through the environment, or drop it in a local .env file
(loaded automatically by python-dotenv).
"""

import os
from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw, 0)      # accepts 0x.. for seeds


# ---------------------------------------------------------------------------
# Size caps
# ---------------------------------------------------------------------------
# Hard cap on any carrier.  Subsets are int bitmasks, so this is also the
# widest bit vector we ever build.
MAX_CARRIER: int = _env_int("QULAB_MAX_CARRIER", 16)

# Operations that materialise a full 2^n table (closure tables, topogenous
# bit matrices, exhaustive subset scans) refuse carriers above this.
MAX_TABLE_CARRIER: int = _env_int("QULAB_MAX_TABLE_CARRIER", 8)

# Exhaustive enumeration of structures; 3 is allowed only with --force.
ENUM_CARRIER: int = _env_int("QULAB_ENUM_CARRIER", 2)
FORCED_ENUM_CARRIER: int = _env_int("QULAB_FORCED_ENUM_CARRIER", 3)

# Enumeration of finite spaces and preorders (355 topologies at 4 points).
MAX_ENUM_POINTS: int = _env_int("QULAB_MAX_ENUM_POINTS", 4)

# Maps scanned per hom-set when building a concrete category.
MAX_HOM_SCAN: int = _env_int("QULAB_MAX_HOM_SCAN", 4096)

# ---------------------------------------------------------------------------
# Oracle defaults
# ---------------------------------------------------------------------------
DEFAULT_SEED: int = _env_int("QULAB_SEED", 0xC0FFEE)
DEFAULT_CANDIDATES: int = _env_int("QULAB_CANDIDATES", 200)

# ---------------------------------------------------------------------------
# Specialization convention
# ---------------------------------------------------------------------------
# "up":   x R y  iff  y lies in every open set containing x.
#         R[A] is then the smallest open superset and opens are R-up-sets.
# "down": the opposite relation; R[A] is the Kuratowski closure and opens
#         are R-down-sets.
SPECIALIZATION: str = os.environ.get("QULAB_SPECIALIZATION", "up")
if SPECIALIZATION not in ("up", "down"):
    raise SystemExit(
        f"QULAB_SPECIALIZATION must be 'up' or 'down', got {SPECIALIZATION!r}"
    )

# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------
JSON_INDENT: int = _env_int("QULAB_JSON_INDENT", 2)
