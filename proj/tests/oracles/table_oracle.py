#!/usr/bin/env python3
"""Reference generator for the iteration tables.

Emulates 10-significant-digit decimal arithmetic (round half to even per
operation, correctly rounded cube root) independently of the C++ Decimal
type, and writes the golden CSVs the CLI is expected to reproduce byte for
byte. Run from the repository root:

    python3 tests/oracles/table_oracle.py
"""

import os
from decimal import Decimal, getcontext, localcontext, ROUND_HALF_EVEN

getcontext().prec = 10
getcontext().rounding = ROUND_HALF_EVEN

H = Decimal("0.5")


def cbrt(x):
    with localcontext() as c:
        c.prec = 30
        r = x ** (Decimal(1) / Decimal(3))
    return +r  # round back to working precision


def T(x):
    return cbrt(3 * x + 18)


def comb(a, b, w):
    return (1 - w) * a + w * b


def picard(x):
    return T(x)


def mann(x):
    return comb(x, T(x), H)


def ishikawa(x):
    y = comb(x, T(x), H)
    return comb(x, T(y), H)


def noor(x):
    z = comb(x, T(x), H)
    y = comb(x, T(z), H)
    return comb(x, T(y), H)


def sp(x):
    z = comb(x, T(x), H)
    y = comb(z, T(z), H)
    return comb(y, T(y), H)


def s_scheme(x):
    tx = T(x)
    y = comb(x, tx, H)
    return comb(tx, T(y), H)


def cr(u):
    tu = T(u)
    w = comb(u, tu, H)
    v = comb(tu, T(w), H)
    return comb(v, T(v), H)


def picard_s(x):
    tx = T(x)
    z = comb(x, tx, H)
    y = comb(tx, T(z), H)
    return T(y)


def fmt(x):
    with localcontext() as c:
        c.prec = 25
        return str(x.quantize(Decimal("1e-9"), rounding="ROUND_HALF_UP"))


def column(step, rows):
    x = Decimal(1000)
    out = []
    for _ in range(rows):
        x = step(x)
        out.append(fmt(x))
    return out


def write_table(path, header, steps, rows):
    cols = [column(s, rows) for s in steps]
    with open(path, "w", newline="") as f:
        f.write(",".join(["n"] + header) + "\n")
        for r in range(rows):
            f.write(",".join([str(r + 1)] + [c[r] for c in cols]) + "\n")


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    golden = os.path.join(here, "..", "golden")
    os.makedirs(golden, exist_ok=True)
    write_table(os.path.join(golden, "table1.csv"), ["PicardS", "S"],
                [picard_s, s_scheme], 11)
    write_table(os.path.join(golden, "table2.csv"), ["Picard", "SP", "CR"],
                [picard, sp, cr], 16)
    write_table(os.path.join(golden, "table3.csv"), ["Mann", "Ishikawa", "Noor"],
                [mann, ishikawa, noor], 47)


if __name__ == "__main__":
    main()
