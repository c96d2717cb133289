#!/usr/bin/env python3
"""Solve an LP-format model with HiGHS and write a `name value` listing.

Usage: highs_solve.py MODEL.lp SOLUTION.txt

The listing starts with an `objective` line; the exit status is nonzero
unless HiGHS proves optimality.
"""
import sys

import highspy


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    model, solution = sys.argv[1], sys.argv[2]
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    if h.readModel(model) != highspy.HighsStatus.kOk:
        print(f"cannot read {model}", file=sys.stderr)
        return 1
    h.run()
    status = h.getModelStatus()
    if status != highspy.HighsModelStatus.kOptimal:
        print(f"solver status: {h.modelStatusToString(status)}", file=sys.stderr)
        return 1
    lp = h.getLp()
    values = h.getSolution().col_value
    with open(solution, "w") as out:
        out.write(f"objective {h.getInfo().objective_function_value!r}\n")
        for name, value in zip(lp.col_names_, values):
            out.write(f"{name} {value!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
