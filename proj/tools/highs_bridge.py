#!/usr/bin/env python3
"""Solve a CPLEX-LP file with HiGHS and write "name value" lines.

usage: highs_bridge.py model.lp solution.txt time_limit
"""
import sys

import highspy


def main():
    if len(sys.argv) != 4:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    lp_path, sol_path, limit = sys.argv[1], sys.argv[2], float(sys.argv[3])
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", limit)
    h.setOptionValue("threads", 1)
    if h.readModel(lp_path) != highspy.HighsStatus.kOk:
        print("cannot read " + lp_path, file=sys.stderr)
        return 1
    h.run()
    status = h.getModelStatus()
    info = h.getInfo()
    with open(sol_path, "w") as out:
        if status == highspy.HighsModelStatus.kOptimal:
            out.write("status Optimal\n")
        elif status == highspy.HighsModelStatus.kInfeasible:
            out.write("status Infeasible\n")
            return 0
        elif info.primal_solution_status == 2:
            out.write("status Feasible\n")
        else:
            out.write("status Unknown\n")
            return 0
        names = h.getLp().col_names_
        for name, value in zip(names, h.getSolution().col_value):
            out.write("%s %.9g\n" % (name, value))
    return 0


if __name__ == "__main__":
    sys.exit(main())
