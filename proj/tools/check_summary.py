#!/usr/bin/env python3
"""Validate barrierfix summary files against docs/summary.schema.json."""
import argparse
import json
import pathlib
import sys

import jsonschema

SCHEMA = pathlib.Path(__file__).resolve().parent.parent / "docs" / "summary.schema.json"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("summaries", nargs="+", type=pathlib.Path)
    args = parser.parse_args()
    validator = jsonschema.Draft202012Validator(json.loads(SCHEMA.read_text()))
    failed = 0
    for path in args.summaries:
        errors = sorted(validator.iter_errors(json.loads(path.read_text())), key=str)
        for err in errors:
            print(f"{path}: {'/'.join(map(str, err.absolute_path)) or '<root>'}: {err.message}")
        failed += bool(errors)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
