#!/usr/bin/env python3
"""Exhaustive 0-1 solver for small exported LP models.

Reads a CPLEX-style LP file with binary variables only, enumerates every
0/1 combination with early constraint pruning, and writes the optimum as a
"name value" solution listing. Only practical for models up to ~24
variables; meant for producing reference solution fixtures for tiny
instances without depending on an external MILP solver.

Usage: solve_lp_enum.py model.lp solution.sol
"""

import re
import sys


def tokenize(text):
    lines = []
    for raw in text.splitlines():
        if raw.startswith("\\"):
            continue
        lines.append(raw)
    return " ".join(lines).split()


def parse_lp(text):
    toks = tokenize(text)
    sections = {"Minimize": [], "Subject": [], "Binary": [], "End": []}
    current = None
    i = 0
    while i < len(toks):
        tok = toks[i]
        if tok in ("Minimize", "Maximize"):
            current = "Minimize"
            i += 1
            continue
        if tok == "Subject" and i + 1 < len(toks) and toks[i + 1] == "To":
            current = "Subject"
            i += 2
            continue
        if tok in ("Binary", "Binaries"):
            current = "Binary"
            i += 1
            continue
        if tok == "End":
            break
        sections[current].append(tok)
        i += 1

    def parse_terms(toks):
        """[(coef, var), ...] plus optional (sense, rhs) tail."""
        terms = []
        sense = None
        rhs = None
        sign = 1.0
        j = 0
        while j < len(toks):
            tok = toks[j]
            if tok == "+":
                sign = 1.0
                j += 1
            elif tok == "-":
                sign = -1.0
                j += 1
            elif tok in ("<=", "=<"):
                sense, rhs = "L", float(toks[j + 1])
                j += 2
            elif tok in ("=", ">=", "=>"):
                sense, rhs = ("E" if tok == "=" else "G"), float(toks[j + 1])
                j += 2
            else:
                try:
                    coef = float(tok)
                    terms.append((sign * coef, toks[j + 1]))
                    j += 2
                except ValueError:
                    terms.append((sign, tok))
                    j += 1
                sign = 1.0
        return terms, sense, rhs

    # Objective: drop the leading "obj:" label.
    obj_toks = [t for t in sections["Minimize"] if not t.endswith(":")]
    objective, _, _ = parse_terms(obj_toks)

    # Constraints: split on label tokens ("name:").
    rows = []
    row_toks = []
    for tok in sections["Subject"]:
        if tok.endswith(":"):
            if row_toks:
                rows.append(parse_terms(row_toks))
            row_toks = []
        else:
            row_toks.append(tok)
    if row_toks:
        rows.append(parse_terms(row_toks))

    binaries = sections["Binary"]
    return objective, rows, binaries


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    with open(sys.argv[1]) as f:
        objective, rows, binaries = parse_lp(f.read())

    variables = sorted(set(binaries))
    index = {v: k for k, v in enumerate(variables)}
    n = len(variables)
    if n > 26:
        sys.exit(f"{n} binaries is too many for exhaustive enumeration")

    obj_vec = [0.0] * n
    for coef, var in objective:
        obj_vec[index[var]] += coef
    row_data = []
    for terms, sense, rhs in rows:
        vec = [0.0] * n
        for coef, var in terms:
            vec[index[var]] += coef
        row_data.append((vec, sense, rhs))

    best = None
    best_bits = None
    for bits in range(1 << n):
        x = [(bits >> k) & 1 for k in range(n)]
        ok = True
        for vec, sense, rhs in row_data:
            lhs = sum(c * v for c, v in zip(vec, x) if c)
            if sense == "E" and abs(lhs - rhs) > 1e-9:
                ok = False
            elif sense == "L" and lhs > rhs + 1e-9:
                ok = False
            elif sense == "G" and lhs < rhs - 1e-9:
                ok = False
            if not ok:
                break
        if not ok:
            continue
        value = sum(c * v for c, v in zip(obj_vec, x) if c)
        if best is None or value < best - 1e-12:
            best = value
            best_bits = x

    if best is None:
        sys.exit("model is infeasible")

    with open(sys.argv[2], "w") as out:
        out.write(f"# objective {best:.9f}\n")
        for var in variables:
            out.write(f"{var} {best_bits[index[var]]}\n")
    print(f"optimum {best:.9f} over {n} binaries -> {sys.argv[2]}")


if __name__ == "__main__":
    main()
