"""Validates JSON Lines report files against schema/report.schema.json."""
import json
import pathlib
import sys

import jsonschema

schema_path = pathlib.Path(__file__).resolve().parent.parent / "schema" / "report.schema.json"
validator = jsonschema.Draft202012Validator(json.loads(schema_path.read_text()))

failures = 0
for name in sys.argv[1:]:
    for n, line in enumerate(pathlib.Path(name).read_text().splitlines(), 1):
        for err in validator.iter_errors(json.loads(line)):
            print(f"{name}:{n}: {err.message}")
            failures += 1
print(f"{failures} schema violations")
sys.exit(1 if failures else 0)
