"""Betti numbers of N(J_n(k)) next to the configuration-space prediction.

    python3 scripts/milgram_table.py --cells 2,2 2,3 2,4 3,2 3,3 --dim 3
"""
import argparse

from noperads.harness import configuration_betti
from noperads.homotopy import betti, nerve
from noperads.ordinals import milgram_poset


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cells", nargs="+", default=["2,2", "2,3", "2,4", "3,2", "3,3"])
    ap.add_argument("--dim", type=int, default=3)
    args = ap.parse_args()

    print(f"{'cell':<8}{'objects':>8}  {'betti_q':<24}{'predicted':<24}")
    for cell in args.cells:
        n, k = (int(x) for x in cell.split(","))
        J = milgram_poset(n, k)
        rep = betti(nerve(J, args.dim + 1))
        top = min(args.dim, rep.exact_through)
        got = list(rep.betti[: top + 1])
        want = (configuration_betti(n, k) + [0] * (top + 1))[: top + 1]
        flag = "" if got == want else "  MISMATCH"
        print(f"J_{n}({k}){'':<2}{J.n_objects:>8}  {str(got):<24}{str(want):<24}{flag}")


if __name__ == "__main__":
    main()
