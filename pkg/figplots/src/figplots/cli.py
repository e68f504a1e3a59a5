"""Command line entry point: render one figure per plot spec file.

Exit codes mirror the analysis CLI: 0 success, 2 spec parse error,
3 missing or unusable input data.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .io import PlotError
from .render import render
from .spec import parse_plotspec


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dnes-plot",
        description="Render figures from dnes trajectory CSVs and "
                    "analysis reports.")
    parser.add_argument("specs", nargs="+",
                        help="plot spec files (one figure each)")
    args = parser.parse_args(argv)

    for ref in args.specs:
        path = Path(ref)
        if not path.is_file():
            sys.stderr.write(f"error: no such spec file: {path}\n")
            return 2
        try:
            spec = parse_plotspec(path.read_text(encoding="utf-8"),
                                  base=path.parent)
        except PlotError as exc:
            sys.stderr.write(f"error: {path}: {exc}\n")
            return 2
        try:
            render(spec)
        except PlotError as exc:
            sys.stderr.write(f"error: {path}: {exc}\n")
            return 3
        sys.stdout.write(f"wrote {spec.out}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
