"""Per-case table of the uncertainty checks over the seeded suite.

    python3 scripts/uncertainty_report.py --scale desk --seed 0
"""
import argparse

from qwolct.grid import l2_norm
from qwolct.qwolct import analyze
from qwolct.uncertainty import heisenberg_check, localisation_check, log_uncertainty_check, sup_bound_check
from qwolct.verify import SCALES, suite


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--scale", choices=sorted(SCALES), default="desk")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    head = f"{'case':<14} {'b1':>6} {'b2':>6} {'heis1':>7} {'heis2':>7} {'log lhs':>9} {'log gap':>9} {'sup/bnd':>8} {'local':>9}"
    print(head)
    print("-" * len(head))
    for case in suite(SCALES[args.scale], args.seed):
        C = analyze(case.f, case.g, case.A1, case.A2)
        h = [heisenberg_check(case.f, case.g, case.A1, case.A2, ax, C).ratio for ax in (1, 2)]
        lg = log_uncertainty_check(case.f, case.g, case.A1, case.A2, C)
        norm2 = l2_norm(case.f) ** 2 * case.g.norm**2
        sp = sup_bound_check(C, case.f, case.g, case.A1, case.A2)
        loc = localisation_check(case.f, case.g, case.A1, case.A2, 1, C)
        print(
            f"{case.label:<14} {case.A1.b:6.3f} {case.A2.b:6.3f} {h[0]:7.4f} {h[1]:7.4f} "
            f"{lg.lhs / norm2:9.4f} {lg.gap / norm2:9.4f} {sp.ratio:8.4f} {loc:9.2e}"
        )
    print("\nheis: spread product over |b|/2; log: normalised by ||f||^2 ||g||^2; local: localisation identity gap")


if __name__ == "__main__":
    main()
