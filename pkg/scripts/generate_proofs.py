#!/usr/bin/env python3
"""Regenerate the bundled proof scripts and re-check the registry.

Usage: python3 scripts/generate_proofs.py [DEST]

Builds every script with the derivation builders, checks each one, writes
the results to DEST (default: the directory containing this file), and
finally replays the registry check over the written files.
"""

import sys
from pathlib import Path

from pitl.derivations import write_scripts
from pitl.proofsys import check_registry


def main() -> int:
    dest = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent
    written = write_scripts(dest)
    for name in written:
        print(f"wrote {dest / name}")
    for line in check_registry(dest):
        print(line)
    print("registry check passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
