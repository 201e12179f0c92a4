#!/usr/bin/env python3
"""Generate the nFilters feedback loop: n Filter instances in a ring."""

import argparse
import sys

FILTER = """\
node Filter (in1 : bool; in2 : real)
returns (out1 : bool; out2 : real);
(*@contract
  assume in1;
  assume -1.0 <= in2 and in2 <= 1.0;
  guarantee out1;
  guarantee -1.0 <= out2 and out2 <= 1.0;
*)
var sum, D1, D2 : real;
let
  out1 = in1;
  sum = 0.0582 * (if in1 then in2 else -in2) - (-1.49 * D1) - 0.881 * D2;
  D1 = 0.0 -> pre sum;
  D2 = 0.0 -> pre D1;
  out2 = (sum - D2) / 1.25;
tel
"""


def toplevel(n: int) -> str:
    if n < 2:
        raise ValueError("n must be at least 2")
    bools = [f"b{k}" for k in range(1, n + 1)] + [f"pre_b{k}" for k in range(1, n)]
    reals = [f"s{k}" for k in range(1, n)]
    lines = [
        "node Toplevel (in : real)",
        "returns (out : real);",
        "(*@contract",
        "  assume -1.0 <= in and in <= 1.0;",
        "  guarantee -1.0 <= out and out <= 1.0;",
        "*)",
        f"var {', '.join(bools)} : bool; {', '.join(reals)} : real;",
        "let",
        f"  b1, s1 = Filter(b{n}, in);",
    ]
    for k in range(1, n):
        lines.append(f"  pre_b{k} = true -> pre b{k};")
        result = "out" if k + 1 == n else f"s{k + 1}"
        lines.append(f"  b{k + 1}, {result} = Filter(pre_b{k}, s{k});")
    lines.append("tel")
    return "\n".join(lines) + "\n"


def program(n: int) -> str:
    return f"-- {n} filters in a ring.\n" + FILTER + "\n" + toplevel(n)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("n", type=int)
    ap.add_argument("-o", "--output")
    args = ap.parse_args()
    text = program(args.n)
    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
