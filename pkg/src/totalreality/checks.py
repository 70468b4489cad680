"""Self-checks of the genus-bound engine over a range of degrees."""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .bounds import (
    G0,
    G1,
    budget,
    classify,
    curve_data,
    cusp_count,
    derived_bound,
    even_case_slack,
    genus_ceiling,
    integral_threshold,
    node_count,
)

# |G0(d) - d^2/4| / d and |G1(d) - d^2/3| / d stay below this for every d >= 1
ASYMPTOTIC_CONSTANT = 3
BUDGET_D_MAX = 20


class CheckResult(NamedTuple):
    name: str
    ok: bool
    detail: str


def check_derived_bounds(d_max: int) -> CheckResult:
    bad = [d for d in range(2, d_max + 1) if derived_bound(d) != integral_threshold(G0(d))]
    if bad:
        return CheckResult("derived-bound", False, f"derived bound differs from G0 at d={bad[:10]}")
    return CheckResult("derived-bound", True, f"derived bounds match G0 for d=2..{d_max}")


def check_even_closed_form(k_max: int) -> CheckResult:
    bad = []
    for k in range(1, k_max + 1):
        d = 2 * k
        passing = [g for g in range(genus_ceiling(d) + 1) if even_case_slack(k, g) >= 0]
        top = max(passing, default=-1)
        if top != k * k - 2 * k:
            bad.append(k)
    return CheckResult("even-closed-form", not bad, f"max g = k^2-2k for k=1..{k_max}" if not bad else f"k={bad}")


def check_gap(d_max: int) -> CheckResult:
    bad = []
    for d in range(1, d_max + 1):
        k = (d + 1) // 2
        gap = -Fraction((k - 1) ** 2, 3)
        if not G0(d) - G1(d) <= gap <= 0:
            bad.append(d)
    return CheckResult("G0-G1-gap", not bad, f"G0-G1 <= -(k-1)^2/3 <= 0 for d=1..{d_max}" if not bad else f"d={bad}")


def check_asymptotics(d_max: int) -> CheckResult:
    worst = Fraction(0)
    for d in range(1, d_max + 1):
        worst = max(worst, abs(G0(d) - Fraction(d * d, 4)) / d, abs(G1(d) - Fraction(d * d, 3)) / d)
    ok = worst <= ASYMPTOTIC_CONSTANT
    return CheckResult("asymptotics", ok, f"max deviation / d = {worst}")


def check_budget(d_max: int) -> CheckResult:
    bad = []
    count = 0
    for d in range(4, min(d_max, BUDGET_D_MAX) + 1, 2):
        for g in range(genus_ceiling(d) + 1):
            n = node_count(g, d)
            splits = [(n, 0)] + ([(n - 2, 1)] if n >= 2 else [])
            for split in splits:
                b = budget(curve_data(g, d, split), "even")
                count += 1
                if b.ell3_S != b.curve.c:
                    bad.append((g, d, split))
    return CheckResult("budget-ell3", not bad, f"ell_3(discr S^-) = c on {count} budgets" if not bad else f"{bad[:5]}")


def check_conservation(d_max: int) -> CheckResult:
    bad = [
        (g, d)
        for d in range(2, d_max + 1)
        for g in range(genus_ceiling(d) + 1)
        if g + cusp_count(g, d) + node_count(g, d) != (d - 1) ** 2
    ]
    return CheckResult("genus-formula", not bad, "g + c + n = (d-1)^2" if not bad else f"{bad[:5]}")


def check_monotone(d_max: int) -> CheckResult:
    bad = []
    for d in range(1, d_max + 1):
        for g in range(genus_ceiling(d) + 3):
            if "G0-bound" in classify(g, d).sources and "G0-bound" not in classify(g + 1, d).sources:
                bad.append((g, d))
    return CheckResult("monotone", not bad, "G0 coverage is upward closed in g" if not bad else f"{bad[:5]}")


def check_known_cases(d_max: int) -> CheckResult:
    bad = [(0, d) for d in range(1, d_max + 1) if classify(0, d).status != "Covered"]
    bad += [(g, d) for d in range(1, 5) for g in range(21) if classify(g, d).status != "Covered"]
    return CheckResult("known-cases", not bad, "(0,d) and d<=4 covered" if not bad else f"{bad[:5]}")


def run_all(d_max: int) -> list[CheckResult]:
    if d_max < 2:
        raise ValueError("d_max must be >= 2")
    return [
        check_derived_bounds(d_max),
        check_even_closed_form(d_max // 2),
        check_gap(d_max),
        check_asymptotics(d_max),
        check_budget(d_max),
        check_conservation(d_max),
        check_monotone(d_max),
        check_known_cases(d_max),
    ]
