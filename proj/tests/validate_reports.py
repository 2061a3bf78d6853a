"""Runs every report-producing subcommand and validates its JSON against the schema."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def main():
    cli, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(pathlib.Path(schema_path).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    work = pathlib.Path(tempfile.mkdtemp(prefix="mdlocal_schema_"))

    def write(name, text):
        p = work / name
        p.write_text(text)
        return str(p)

    c4 = write("c4.txt", "0 1\n1 2\n2 3\n3 0\n")
    loops = write("loops.txt", "# loop and parallel pair\n0 0\n0 1\n0 1\n1 2\n")
    weighted = write("w.txt", "0 1 0.5\n1 2 2.0\n2 0 1.5\n")
    sides = write("c4.sides", "0 0\n2 0\n1 1\n3 1\n")
    gen = subprocess.run([cli, "gen", "--vertices", "500", "--degree", "3", "--seed", "3"],
                         check=True, capture_output=True, text=True).stdout
    big = write("reg500.txt", gen)

    runs = [
        ["marginal", "--graph", c4, "--vertex", "1"],
        ["marginal", "--graph", loops, "--vertex", "0", "--restricted", "--seed", "2"],
        ["hardcore-marginal", "--graph", c4, "--vertex", "2", "--lambda", "0.5"],
        ["logz", "--graph", c4, "--seed", "1"],
        ["logz", "--graph", weighted, "--format", "weighted", "--lambda", "2"],
        ["logz", "--graph", big, "--budget", "50", "--verbose", "--epsilon", "0.3"],
        ["avg-matching", "--graph", loops, "--verbose"],
        ["entropy", "--graph", c4, "--lambda", "3"],
        ["max-matching", "--graph", c4, "--epsilon", "0.5"],
        ["permanent", "--graph", c4, "--bipartition", sides, "--alpha", "0.5"],
        ["permanent", "--graph", c4, "--bipartition", sides, "--activity-override", "8"],
        ["hardcore-logz", "--graph", c4, "--lambda", "0.5"],
        ["hardcore-logz", "--graph", big, "--lambda", "5", "--epsilon", "0.5"],
        ["exact", "--graph", loops, "--hardcore"],
        ["exact", "--graph", c4, "--permanent", "--bipartition", sides, "--lambda", "2"],
        ["sweep", "--graph", big, "--epsilon-list", "0.3,0.2", "--output-format", "json"],
        ["sweep", "--graph", c4, "--epsilon-list", "0.3", "--output-format", "json",
         "--statistic", "hardcore-logz"],
    ]
    failures = 0
    for args in runs:
        proc = subprocess.run([cli, *args], capture_output=True, text=True)
        label = " ".join(args[:1] + [a for a in args[1:] if not a.startswith(str(work))])
        if proc.returncode not in (0, 3):
            print(f"FAIL {label}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        errors = sorted(validator.iter_errors(json.loads(proc.stdout)), key=str)
        if errors:
            print(f"FAIL {label}: {errors[0].message}")
            failures += 1
        else:
            print(f"ok   {label} (exit {proc.returncode})")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
