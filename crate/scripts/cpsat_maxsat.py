#!/usr/bin/env python3
"""Solve a classic WCNF file with OR-Tools CP-SAT.

Prints MaxSAT-competition output (`o`, `s` and `v` lines) on stdout.

    python3 scripts/cpsat_maxsat.py instance.wcnf [workers]
"""

import os
import sys

from ortools.sat.python import cp_model


def read_wcnf(path):
    hard, soft = [], []
    top = None
    with open(path) as f:
        for line in f:
            if line.startswith("c") or not line.strip():
                continue
            if line.startswith("p"):
                _, _, nvars, _, top = line.split()
                nvars, top = int(nvars), int(top)
                continue
            nums = [int(t) for t in line.split()]
            w, lits = nums[0], nums[1:-1]
            (hard if w >= top else soft).append((w, lits))
    return nvars, hard, soft


def main(argv):
    if len(argv) not in (2, 3):
        print("usage: cpsat_maxsat.py INSTANCE.wcnf [workers]", file=sys.stderr)
        return 1
    nvars, hard, soft = read_wcnf(argv[1])
    m = cp_model.CpModel()
    x = [None] + [m.NewBoolVar(f"x{i}") for i in range(1, nvars + 1)]

    def lit(l):
        return x[l] if l > 0 else x[-l].Not()

    for _, c in hard:
        m.AddBoolOr([lit(l) for l in c])
    cost = []
    for w, c in soft:
        if len(c) == 1:
            cost.append(w * lit(-c[0]))
        else:
            r = m.NewBoolVar("")
            m.AddBoolOr([lit(l) for l in c] + [r])
            cost.append(w * r)
    m.Minimize(sum(cost))
    solver = cp_model.CpSolver()
    solver.parameters.num_workers = int(argv[2]) if len(argv) == 3 else min(os.cpu_count() or 1, 8)
    status = solver.Solve(m)
    if status == cp_model.OPTIMAL:
        print(f"o {int(round(solver.ObjectiveValue()))}")
        print("s OPTIMUM FOUND")
        vals = (i if solver.Value(x[i]) else -i for i in range(1, nvars + 1))
        print("v " + " ".join(map(str, vals)) + " 0")
        return 30
    if status == cp_model.INFEASIBLE:
        print("s UNSATISFIABLE")
        return 20
    print("s UNKNOWN")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
