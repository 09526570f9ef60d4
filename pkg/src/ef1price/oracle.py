"""Brute-force ground truth: optimal social welfare, the best EF1 welfare,
exact price-of-EF1 reports, and the exhaustive worst-case sweep.

Welfare maximization under EF1 is done by full enumeration of the n^m
complete allocations (it is hard in general, and at these sizes enumeration
is the trustworthy option). The inner loop runs on an integer-scaled copy of
the matrix: rescaling by the common denominator changes no comparison, and
exact fractions are reconstructed at the boundary.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product, repeat
from typing import Iterable, Sequence

from .algorithms import run_algorithm
from .core import (
    Allocation,
    BadShape,
    Instance,
    classify_ternary,
    format_rational,
    integer_matrix,
)
from .generators import EnumerationParams, enumerate_ternary_instances

DEFAULT_BUDGET = 10**8

CSV_COLUMNS = (
    "instance_id",
    "n",
    "m",
    "a",
    "b",
    "opt",
    "ef1_opt",
    "price_num",
    "price_den",
    "price_dec",
    "m2rr_sw",
    "m2rr_ratio",
    "rmm_sw",
    "rmm_ratio",
)

SWEEP_ALGS = {"m2rr": 2, "rmm": 3}  # algorithm -> agent count it applies to


class BudgetExceeded(Exception):
    def __init__(self, n: int, m: int, budget: int):
        self.n = n
        self.m = m
        self.budget = budget
        super().__init__(
            f"enumerating {n}^{m} = {n ** m} allocations exceeds the budget of {budget}"
        )


def decimal6(value: Fraction) -> str:
    """Exact 6-place decimal rendering (half-up), advisory only."""
    p, q = value.numerator, value.denominator
    scaled = (2 * p * 10**6 + q) // (2 * q)
    whole, frac = divmod(scaled, 10**6)
    return f"{whole}.{frac:06d}"


@dataclass(frozen=True)
class PriceReport:
    """Exact optimum, exact EF1 optimum, and their ratio for one instance."""

    opt: Fraction
    opt_allocation: Allocation
    ef1_opt: Fraction
    ef1_opt_allocation: Allocation
    price: Fraction


@dataclass(frozen=True)
class SweepRow:
    instance_id: int
    n: int
    m: int
    a: Fraction
    b: Fraction
    opt: Fraction
    ef1_opt: Fraction
    price: Fraction
    alg_sw: tuple[tuple[str, Fraction], ...]
    alg_ratio: tuple[tuple[str, Fraction], ...]

    def csv_fields(self) -> list[str]:
        sw = dict(self.alg_sw)
        ratio = dict(self.alg_ratio)
        return [
            str(self.instance_id),
            str(self.n),
            str(self.m),
            format_rational(self.a),
            format_rational(self.b),
            format_rational(self.opt),
            format_rational(self.ef1_opt),
            str(self.price.numerator),
            str(self.price.denominator),
            decimal6(self.price),
            format_rational(sw["m2rr"]) if "m2rr" in sw else "",
            format_rational(ratio["m2rr"]) if "m2rr" in ratio else "",
            format_rational(sw["rmm"]) if "rmm" in sw else "",
            format_rational(ratio["rmm"]) if "rmm" in ratio else "",
        ]


@dataclass(frozen=True)
class SearchReport:
    params: EnumerationParams
    instances_checked: int
    worst_price: Fraction | None
    worst_instance: Instance | None
    worst_instance_id: int | None
    alg_worst_ratios: tuple[tuple[str, Fraction], ...]
    csv_path: str | None


def optimal_social_welfare(inst: Instance) -> tuple[Fraction, Allocation]:
    """Each item to an agent valuing it most (ties: lowest agent index)."""
    bundles: list[list[int]] = [[] for _ in range(inst.n)]
    total = Fraction(0)
    for g in range(inst.m):
        best_agent = max(range(inst.n), key=lambda i: (inst.values[i][g], -i))
        bundles[best_agent].append(g)
        total += inst.values[best_agent][g]
    return total, Allocation.from_lists(bundles)


def _ef1_holds_int(vals: Sequence[Sequence[int]], n: int, assign: Sequence[int]) -> bool:
    # assign[g] = receiving agent; mirrors fairness.is_ef1 on the int view.
    size = len(assign)
    values = [[0] * n for _ in range(n)]
    best_item = [[0] * n for _ in range(n)]
    for g in range(size):
        j = assign[g]
        for i in range(n):
            x = vals[i][g]
            values[i][j] += x
            if x > best_item[i][j]:
                best_item[i][j] = x
    for i in range(n):
        own = values[i][i]
        for j in range(n):
            if j != i and own < values[i][j] - best_item[i][j]:
                return False
    return True


def max_ef1_welfare(
    inst: Instance, budget: int = DEFAULT_BUDGET
) -> tuple[Fraction, Allocation]:
    """Maximum social welfare over all EF1 complete allocations, with the
    first witnessing allocation in base-n counter order (item 0 is the
    fastest-varying digit).
    """
    n, m = inst.n, inst.m
    if n**m > budget:
        raise BudgetExceeded(n, m, budget)
    vals, scale = integer_matrix(inst)
    cols = [[vals[i][g] for i in range(n)] for g in range(m)]

    best = -1
    best_assign: tuple[int, ...] | None = None
    for t in product(range(n), repeat=m):
        assign = t[::-1]
        sw = 0
        for g in range(m):
            sw += cols[g][assign[g]]
        if sw <= best:
            continue
        if _ef1_holds_int(vals, n, assign):
            best = sw
            best_assign = assign
    assert best_assign is not None  # round-robin always yields an EF1 allocation
    bundles = [[g for g in range(m) if best_assign[g] == j] for j in range(n)]
    return Fraction(best, scale), Allocation.from_lists(bundles)


def price_of_ef1(inst: Instance, budget: int = DEFAULT_BUDGET) -> PriceReport:
    """Exact ratio of unrestricted optimal welfare to the best EF1 welfare."""
    opt, opt_alloc = optimal_social_welfare(inst)
    ef1_opt, ef1_alloc = max_ef1_welfare(inst, budget=budget)
    return PriceReport(
        opt=opt,
        opt_allocation=opt_alloc,
        ef1_opt=ef1_opt,
        ef1_opt_allocation=ef1_alloc,
        price=opt / ef1_opt,
    )


def algorithm_ratio(inst: Instance, alg: str, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Optimal welfare divided by the welfare of the named algorithm's output."""
    opt, _ = optimal_social_welfare(inst)
    _, _, sw = run_algorithm(inst, alg)
    if sw == 0:
        raise BadShape(f"{alg} produced zero welfare; ratio undefined")
    return opt / sw


def _instance_sort_key(inst: Instance):
    return (inst.n, inst.m, inst.values)


def evaluate_sweep_instance(
    instance_id: int, inst: Instance, algs: Sequence[str], budget: int
) -> SweepRow:
    """One sweep row: price report plus per-algorithm welfare and ratio."""
    profile = classify_ternary(inst)
    report = price_of_ef1(inst, budget=budget)
    alg_sw = []
    alg_ratio = []
    for alg in algs:
        _, _, sw = run_algorithm(inst, alg)
        alg_sw.append((alg, sw))
        alg_ratio.append((alg, report.opt / sw))
    return SweepRow(
        instance_id=instance_id,
        n=inst.n,
        m=inst.m,
        a=profile.a,
        b=profile.b,
        opt=report.opt,
        ef1_opt=report.ef1_opt,
        price=report.price,
        alg_sw=tuple(alg_sw),
        alg_ratio=tuple(alg_ratio),
    )


def _eval_batch(batch: list[tuple[int, Instance]], algs: tuple[str, ...], budget: int):
    rows: list[SweepRow] = []
    for instance_id, inst in batch:
        try:
            rows.append(evaluate_sweep_instance(instance_id, inst, algs, budget))
        except BudgetExceeded as exc:
            return rows, (exc.n, exc.m, exc.budget)
    return rows, None


def _batched(iterable: Iterable, size: int) -> Iterable[list]:
    batch: list = []
    for entry in iterable:
        batch.append(entry)
        if len(batch) == size:
            yield batch
            batch = []
    if batch:
        yield batch


def resolve_algs(params: EnumerationParams, algs: Sequence[str] | None) -> tuple[str, ...]:
    """Default to the algorithm matching the agent count; reject misfits."""
    if algs is None:
        return tuple(alg for alg, n in SWEEP_ALGS.items() if n == params.n)
    for alg in algs:
        if alg not in SWEEP_ALGS:
            raise BadShape(f"unknown sweep algorithm {alg!r}")
        if SWEEP_ALGS[alg] != params.n:
            raise BadShape(f"{alg} applies to n={SWEEP_ALGS[alg]}, sweep has n={params.n}")
    return tuple(sorted(set(algs), key=list(SWEEP_ALGS).index))


def worst_case_search(
    params: EnumerationParams,
    algs: Sequence[str] | None = None,
    csv_path: str | None = None,
    jobs: int = 1,
    budget: int = DEFAULT_BUDGET,
    batch_size: int = 512,
) -> SearchReport:
    """Fold the price oracle and algorithm ratios over the enumerated stream.

    Emits one CSV row per instance (byte-identical across reruns, regardless
    of jobs) and returns the maxima with their witnessing instances. Price
    ties keep the lexicographically smallest witness. On a budget abort the
    rows computed so far are flushed before the error propagates.
    """
    algs = resolve_algs(params, algs)
    stream = enumerate(enumerate_ternary_instances(params))

    writer = None
    handle = None
    if csv_path is not None:
        handle = open(csv_path, "w", newline="")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)

    checked = 0
    worst_price: Fraction | None = None
    worst_instance: Instance | None = None
    worst_id: int | None = None
    ratio_max: dict[str, Fraction] = {}
    instances_by_id: dict[int, Instance] = {}

    def consume(rows: list[SweepRow]) -> None:
        nonlocal checked, worst_price, worst_instance, worst_id
        for row in rows:
            checked += 1
            if writer is not None:
                writer.writerow(row.csv_fields())
            inst = instances_by_id.pop(row.instance_id)
            better = worst_price is None or row.price > worst_price
            tied = worst_price is not None and row.price == worst_price
            if better or (
                tied and _instance_sort_key(inst) < _instance_sort_key(worst_instance)
            ):
                worst_price = row.price
                worst_instance = inst
                worst_id = row.instance_id
            for alg, ratio in row.alg_ratio:
                if alg not in ratio_max or ratio > ratio_max[alg]:
                    ratio_max[alg] = ratio

    def batches():
        for batch in _batched(stream, batch_size):
            for instance_id, inst in batch:
                instances_by_id[instance_id] = inst
            yield batch

    error: tuple[int, int, int] | None = None
    try:
        if jobs <= 1:
            for batch in batches():
                rows, error = _eval_batch(batch, algs, budget)
                consume(rows)
                if error is not None:
                    break
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for rows, err in pool.map(_eval_batch, batches(), repeat(algs), repeat(budget)):
                    consume(rows)
                    if err is not None:
                        error = err
                        break
    finally:
        if handle is not None:
            handle.close()

    if error is not None:
        raise BudgetExceeded(*error)

    return SearchReport(
        params=params,
        instances_checked=checked,
        worst_price=worst_price,
        worst_instance=worst_instance,
        worst_instance_id=worst_id,
        alg_worst_ratios=tuple(sorted(ratio_max.items())),
        csv_path=csv_path,
    )
