import os
import sys

# ── path fix so imports resolve from the repo root ────────────────────────────
sys.path.insert(0, os.path.dirname(__file__))
