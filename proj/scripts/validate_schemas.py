#!/usr/bin/env python3
"""Validates control API response bodies and config files against docs/schemas.

usage: validate_schemas.py [--expect-invalid] SCHEMA_DIR RESPONSE_DIR [CONFIG.json ...]

With --expect-invalid every document must be rejected.

Response files are matched to a schema by name prefix: health_*, command_*,
error_*, config_*.
"""
import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource

PREFIXES = {"health": "health", "command": "command", "error": "error", "config": "config"}


def main(argv):
    expect_invalid = "--expect-invalid" in argv
    argv = [a for a in argv if a != "--expect-invalid"]
    if len(argv) < 3:
        print(__doc__, file=sys.stderr)
        return 2
    schema_dir, response_dir = pathlib.Path(argv[1]), pathlib.Path(argv[2])
    schemas = {p.name.split(".")[0]: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    registry = Registry().with_resources(
        (f"{name}.schema.json", Resource.from_contents(s)) for name, s in schemas.items()
    ).with_resources((s["$id"], Resource.from_contents(s)) for s in schemas.values())
    for s in schemas.values():
        jsonschema.Draft202012Validator.check_schema(s)

    jobs = []
    for p in sorted(response_dir.glob("*.json")):
        prefix = p.name.split("_")[0]
        if prefix not in PREFIXES:
            print(f"no schema for {p.name}", file=sys.stderr)
            return 1
        jobs.append((p, PREFIXES[prefix]))
    jobs += [(pathlib.Path(c), "config") for c in argv[3:]]
    seen = {kind for _, kind in jobs}
    missing = set(PREFIXES.values()) - seen
    if missing and not expect_invalid:
        print(f"no samples for schemas: {sorted(missing)}", file=sys.stderr)
        return 1

    failures = 0
    for path, kind in jobs:
        validator = jsonschema.Draft202012Validator(schemas[kind], registry=registry)
        errors = list(validator.iter_errors(json.loads(path.read_text())))
        if expect_invalid:
            print(f"{'ok  ' if errors else 'FAIL'} {path.name} ({kind}) rejected with {len(errors)} errors")
            failures += not errors
            continue
        for e in errors:
            print(f"FAIL {path.name}: {'/'.join(map(str, e.absolute_path))}: {e.message}")
        failures += bool(errors)
        if not errors:
            print(f"ok   {path.name} ({kind})")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
