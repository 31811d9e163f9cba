"""Regenerate tests/data/golden from the CLI.  Review the diff before committing."""

import contextlib
import io
import json
from pathlib import Path

from popbranch.cli import main

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"

CASES = {
    "solve_four_cycle": ["solve", "-i", "four_cycle.json"],
    "solve_star": ["solve", "-i", "star.json"],
    "minmargin_four_cycle": ["minmargin", "-i", "four_cycle.json"],
    "mixed_four_cycle": ["mixed", "-i", "four_cycle.json"],
    "oracle_four_cycle": ["oracle", "-i", "four_cycle.json"],
    "factor_g3": ["factor", "-i", "g3.json"],
    "factor_of_four_cycle": ["factor-of", "-i", "four_cycle.json", "--branching", '["ab", "ac", "cd"]'],
    "margin_four_cycle": ["margin", "-i", "four_cycle.json", "--branching", '["ab", "ac", "cd"]'],
    "gen_random": ["gen", "random", "--n", "6", "--m", "12", "--model", "weak:2", "--seed", "42"],
    "reduce_3sat": ["reduce", "3sat", "-i", "phi.cnf", "--assignment", "1,-2"],
    "reduce_hampath": ["reduce", "hampath", "-i", "path3.json", "--path", "r,u2,u0,u1"],
    "reduce_3dm": ["reduce", "3dm", "-i", "toy3dm.json", "--matching",
                   '[["x1","y1","z1"],["x2","y2","z2"],["x3","y3","z3"],["x4","y4","z4"]]'],
    "emit_face_star": ["emit-lp", "-i", "star.json"],
    "emit_extended_star": ["emit-lp", "--form", "extended", "-i", "star.json"],
}


def run(argv):
    """(exit code, stdout) of one CLI call with paths resolved against the data directory."""
    argv = [str(DATA / a) if a.endswith((".json", ".cnf")) and not a.startswith("[") else a for a in argv]
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


if __name__ == "__main__":
    out = DATA / "golden"
    out.mkdir(exist_ok=True)
    for name, argv in CASES.items():
        code, text = run(argv)
        (out / f"{name}.out").write_text(text)
        (out / f"{name}.code").write_text(f"{code}\n")
        print(f"{name}: exit {code}")
    print(json.dumps(sorted(CASES)))
