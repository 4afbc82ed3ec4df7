#!/usr/bin/env python3
"""Run the RC2 MaxSAT solver from python-sat on a classic WCNF file.

Prints MaxSAT-competition output (`o`, `s` and `v` lines) on stdout.
Fine for four-variable instances; larger ones are better served by
cpsat_maxsat.py.

    python3 scripts/rc2_maxsat.py instance.wcnf
"""

import sys

from pysat.examples.rc2 import RC2Stratified
from pysat.formula import WCNF


def main(argv):
    if len(argv) != 2:
        print("usage: rc2_maxsat.py INSTANCE.wcnf", file=sys.stderr)
        return 1
    wcnf = WCNF(from_file=argv[1])
    with RC2Stratified(wcnf, solver="g4", adapt=True, exhaust=True, minz=True) as rc2:
        model = rc2.compute()
        if model is None:
            print("s UNSATISFIABLE")
            return 20
        print(f"o {rc2.cost}")
        print("s OPTIMUM FOUND")
        print("v " + " ".join(str(l) for l in model) + " 0")
    return 30


if __name__ == "__main__":
    sys.exit(main(sys.argv))
