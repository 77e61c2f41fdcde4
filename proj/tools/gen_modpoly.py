#!/usr/bin/env python3
"""Regenerate data/modpoly/phi_m.txt from PARI/GP's classical modular polynomials.

Requires cypari2 (pip install --only-binary=:all: cypari2). The output uses the
"[i j] c" convention with i >= j, one coefficient per line.
"""
import argparse
import pathlib

import cypari2


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/modpoly")
    ap.add_argument("levels", nargs="*", type=int, default=[2, 3, 5, 7, 11, 13, 17, 19])
    args = ap.parse_args()
    pari = cypari2.Pari()
    pari.allocatemem(2 * 10**9, silent=True)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for m in args.levels:
        phi = pari(f"polmodular({m})")
        lines = [f"# classical modular polynomial Phi_{m}(X,Y), entries [i j] c with i >= j"]
        for i in range(m + 2):
            cx = pari.polcoef(phi, i, "x")
            for j in range(i + 1):
                c = int(pari.polcoef(cx, j, "y"))
                if c != 0:
                    lines.append(f"[{i} {j}] {c}")
        (out / f"phi_{m}.txt").write_text("\n".join(lines) + "\n")
        print(f"phi_{m}: {len(lines) - 1} entries")


if __name__ == "__main__":
    main()
