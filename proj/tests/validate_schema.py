"""Runs the CLI on a small generated table and validates its JSON against docs/report.schema.json."""

import json
import random
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def table(path: Path) -> None:
    rng = random.Random(3)
    with path.open("w") as out:
        out.write("grade,score,age,label,pred\n")
        for _ in range(600):
            grade = rng.choice("ABCD")
            score = rng.random()
            age = rng.randint(18, 80)
            acc = 0.45 if grade == "C" or 0.3 <= score <= 0.4 else 0.92
            label = rng.randint(0, 1)
            pred = label if rng.random() < acc else 1 - label
            out.write(f"{grade},{score:.4f},{age},{label},{pred}\n")


def main() -> int:
    binary, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    with tempfile.TemporaryDirectory() as tmp:
        data = Path(tmp) / "table.csv"
        table(data)
        for extra in ([], ["--max-order", "3"], ["--pvalue", "1e-300"]):
            run = subprocess.run([binary, str(data), "-g", "label", "-p", "pred", *extra],
                                 capture_output=True, text=True, check=True)
            report = json.loads(run.stdout)
            jsonschema.validate(report, schema, cls=jsonschema.Draft202012Validator)
            print(f"valid: {' '.join(extra) or 'defaults'} ({len(report['slices'])} slices)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
