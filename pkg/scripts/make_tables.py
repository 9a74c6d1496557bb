#!/usr/bin/env python3
"""Regenerate the four published panels (exact) into build/tables/.

Writes the two 26x10 coefficient panels and the two multiplicity panels
as both JSON and CSV, using the same schemas as the CLI.
"""

import pathlib
import subprocess
import sys

OUT = pathlib.Path(__file__).resolve().parent.parent / "build" / "tables"

JOBS = [
    ("hg_coeffs", ["coeffs", "--all", "--kind", "hg", "--order", "10"]),
    ("etainv_coeffs", ["coeffs", "--all", "--kind", "etainv", "--order", "10"]),
    ("hg_decomp", ["decompose", "--kind", "hg", "--rows", "10"]),
    ("etainv_decomp", ["decompose", "--kind", "etainv", "--rows", "10"]),
]


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    for stem, argv in JOBS:
        for fmt in ("json", "csv"):
            out = subprocess.run(
                [sys.executable, "-m", "m24rad.cli", *argv, "--format", fmt],
                check=True, capture_output=True, text=True,
            ).stdout
            path = OUT / f"{stem}.{fmt}"
            path.write_text(out)
            print("wrote", path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
