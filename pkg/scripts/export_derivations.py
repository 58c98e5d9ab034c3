#!/usr/bin/env python3
"""Dump the builtin derivation scripts as JSON files (the same format the
`qcalc check-derivation` subcommand reads).

Usage: python scripts/export_derivations.py [outdir]
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qcalc.derivations import builtin_derivations


def main() -> int:
    outdir = Path(sys.argv[1] if len(sys.argv) > 1 else "derivations_json")
    outdir.mkdir(parents=True, exist_ok=True)
    for d in builtin_derivations():
        path = outdir / f"{d.name}.json"
        path.write_text(d.dumps() + "\n")
        print(f"wrote {path} ({len(d.steps)} steps)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
