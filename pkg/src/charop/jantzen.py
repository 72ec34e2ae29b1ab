"""Jantzen-type sum formulas for antidominant Verma characters."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from .charexpr import Add, Basis, CharExpr, Evaluator, FamilySum, Scale, Verma, Window, family_sum
from .errors import DomainError
from .rootdata import RootSystem, Weight, add, dot_reflect, is_antidominant


def nu_p(p: int, m: int) -> int:
    """Exponent of p in |m|."""
    if m == 0:
        raise DomainError("the p-adic valuation of 0 is undefined")
    m = abs(m)
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def _verma_family(terms, top, label) -> FamilySum:
    """Family of ``(coefficient, weight)`` pairs, sorted by decreasing weight."""
    def gen():
        for c, lam in terms():
            yield Scale(c, Verma(lam))
    return family_sum(gen, [top], label)


def per_root_summand(rs: RootSystem, mu, beta_index: int, p: int) -> CharExpr:
    """sum_{a > A} nu_p(a) Delta(s_beta . mu - a beta) - sum_{b > 0} nu_p(b) Delta(mu - b beta).

    Here A = -<mu + rho, beta^vee> >= 0, so s_beta . mu - a beta = mu - (a - A) beta
    and both families have ceiling mu - beta.
    """
    mu = tuple(mu)
    pair = rs.pair(add(mu, rs.rho), beta_index)
    if pair > 0:
        raise DomainError(f"<{list(mu)} + rho, beta^vee> = {pair} > 0 for root {list(rs.positive_roots[beta_index])}")
    big_a = -pair
    bw = rs.positive_roots_w[beta_index]
    refl = dot_reflect(rs, beta_index, mu)
    top = tuple(a - b for a, b in zip(mu, bw))
    name = f"beta={list(rs.positive_roots[beta_index])}"

    def first():
        for a in itertools.count(big_a + 1):
            yield nu_p(p, a), tuple(x - a * b for x, b in zip(refl, bw))

    def second():
        for b in itertools.count(1):
            yield nu_p(p, b), tuple(x - b * y for x, y in zip(mu, bw))

    plus = _verma_family(first, top, f"J+({name})")
    minus = _verma_family(second, top, f"J-({name})")
    return Add((plus, Scale(-1, minus)))


@dataclass
class SumFormulaReport:
    mu: Weight
    p: int
    per_root: dict = field(default_factory=dict)
    total: CharExpr | None = None
    window: Window | None = None


def jantzen_sum(rs: RootSystem, mu, p: int, window: Window | None = None) -> SumFormulaReport:
    mu = tuple(mu)
    if not is_antidominant(mu):
        raise DomainError(f"weight {list(mu)} is not antidominant")
    per = {rs.positive_roots[i]: per_root_summand(rs, mu, i, p) for i in range(len(rs.positive_roots))}
    return SumFormulaReport(mu, p, per, Add(tuple(per.values())), window)


def evaluate_report(rs: RootSystem, report: SumFormulaReport, window: Window) -> dict:
    """Windowed values of every per-root summand and of the total."""
    ev = Evaluator(rs)
    out = {"per_root": {b: ev.evaluate(e, window) for b, e in report.per_root.items()}}
    out["total"] = ev.evaluate(report.total, window)
    return out


def _check_negative(mu: int) -> int:
    if isinstance(mu, (tuple, list)):
        (mu,) = mu
    if mu >= 0:
        raise DomainError(f"sl2 weight {mu} is not negative")
    return mu


def binom_neg(mu: int, i: int) -> int:
    """binom(mu, i) for any integer mu via the reflection identity."""
    if mu >= 0:
        return comb(mu, i)
    return (-1) ** i * comb(i - mu - 1, i)


def sl2_torsion_char_binomial(mu, p: int) -> CharExpr:
    """sum_{i > 0} nu_p(binom(mu, i)) e^{mu - 2i}."""
    mu = _check_negative(mu)

    def terms():
        for i in itertools.count(1):
            v = nu_p(p, binom_neg(mu, i))
            yield Scale(v, Basis((mu - 2 * i,)))

    return family_sum(terms, [(mu - 2,)], f"ch_t C({mu})")


def sl2_torsion_char_verma(mu, p: int) -> CharExpr:
    """sum_{a > lam + 1} nu_p(a) Delta(lam - 2a) - sum_{b > 0} nu_p(b) Delta(mu - 2b), lam = -mu - 2."""
    mu = _check_negative(mu)
    lam = -mu - 2
    top = (mu - 2,)

    def first():
        for a in itertools.count(lam + 2):
            yield nu_p(p, a), (lam - 2 * a,)

    def second():
        for b in itertools.count(1):
            yield nu_p(p, b), (mu - 2 * b,)

    return Add((_verma_family(first, top, f"L+({mu})"),
                Scale(-1, _verma_family(second, top, f"L-({mu})"))))


__all__ = [
    "nu_p", "per_root_summand", "jantzen_sum", "SumFormulaReport", "evaluate_report",
    "sl2_torsion_char_binomial", "sl2_torsion_char_verma", "binom_neg",
]

