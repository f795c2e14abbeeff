"""Rewrite tests/golden/ from configs/*.json. Run after an intentional output change."""

import glob
import os

from xform_acoustics.cli import run
from xform_acoustics.config import parse_config

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
GOLDEN = os.path.join(ROOT, "tests", "golden")


def main():
    os.makedirs(GOLDEN, exist_ok=True)
    for path in sorted(glob.glob(os.path.join(ROOT, "configs", "*.json"))):
        name = os.path.splitext(os.path.basename(path))[0]
        with open(path, "rb") as fh:
            report = run(parse_config(fh.read()), os.path.join(GOLDEN, name))
        print(name, report.verdict or "-", *[os.path.basename(p) for p in report.outputs])


if __name__ == "__main__":
    main()
