#!/usr/bin/env python3
"""Reproduce the exact price-of-EF1 values of the named lower-bound instances.

Fast (< 1 s): brute-force oracles on the 2x4, 3x6, 4x4 tight instances and
the 2x3 intro example, plus both algorithms' welfare on their home instances.
"""

from fractions import Fraction

from ef1price.fairness import social_welfare
from ef1price.algorithms import m2rr, rmm
from ef1price.generators import (
    gen_intro_example,
    gen_sqrt_n_instance,
    gen_three_agent_tight,
    gen_two_agent_tight,
)
from ef1price.oracle import decimal6, price_of_ef1


def show(name, inst, expected):
    report = price_of_ef1(inst)
    flag = "ok" if report.price == expected else "MISMATCH"
    print(
        f"{name:12s} opt={str(report.opt):>6s} ef1_opt={str(report.ef1_opt):>6s} "
        f"price={str(report.price):>8s} ({decimal6(report.price)})  [{flag}]"
    )
    return report


def main():
    show("two-tight", gen_two_agent_tight(), Fraction(12, 11))
    show("three-tight", gen_three_agent_tight(), Fraction(6, 5))
    show("sqrt-n(4)", gen_sqrt_n_instance(4, 1), Fraction(4, 3))
    show("intro", gen_intro_example(), Fraction(125, 124))

    two = gen_two_agent_tight()
    alloc, _ = m2rr(two)
    print(f"m2rr on two-tight:   SW = {social_welfare(two, alloc)} (best EF1 is 11/2)")
    three = gen_three_agent_tight()
    alloc, _ = rmm(three)
    print(f"rmm on three-tight:  SW = {social_welfare(three, alloc)} (best EF1 is 10)")


if __name__ == "__main__":
    main()
