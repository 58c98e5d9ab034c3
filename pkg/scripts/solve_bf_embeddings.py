#!/usr/bin/env python3
"""Re-derive the pair-value embeddings into the i/j/k subspaces and
rewrite the golden file the package ships.

Usage: python scripts/solve_bf_embeddings.py
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qcalc.semantics import _EMBEDDING_PATH, solve_bf_embeddings


def main() -> int:
    solved = solve_bf_embeddings()
    _EMBEDDING_PATH.write_text(json.dumps(solved, indent=2, sort_keys=True) + "\n")
    print(f"wrote {_EMBEDDING_PATH}")
    for alpha, table in solved.items():
        print(f"  {alpha}: " + ", ".join(f"{s}->{d}" for s, d in table.items()))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
