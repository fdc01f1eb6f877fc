"""Regenerate the tower, spectrum, coherence and structural tables for a base graph.

    python3 scripts/regenerate_tables.py --base complete:4 --levels 3 --out results/k4
"""

import argparse
import sys

from hl2lab.cli import main as cli_main


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--base", default="complete:4")
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results")
    args = ap.parse_args(argv)
    common = ["--base", args.base, "--levels", str(args.levels), "--seed", str(args.seed), "--out", args.out]
    for cmd in ("lift", "spectrum", "coherence", "structural"):
        code = cli_main([cmd, *common])
        if code:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
