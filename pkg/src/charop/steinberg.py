"""Steinberg-type factorizations of simple characters.

Every simple character is assembled from a finite database of restricted
characters: dominant weights factor through their base-p digits, and an
arbitrary weight splits as ``lam0 + p^r * omega`` with ``lam0`` restricted and
``omega`` in Y (all coordinates in {-1, 0}).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .charexpr import Basis, CharExpr, Frob, InfProduct, Scale, Star, Verma, family_sum
from .database import CharDatabase
from .errors import DomainError
from .partition import cached_simplex, partition_table
from .rootdata import Weight, is_antidominant, is_dominant, scale, sub


@dataclass(frozen=True)
class SteinbergDecomposition:
    r: int
    lambda0: Weight
    tail: Weight


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise DomainError(f"p must be a prime, got {p!r}")


def restricted_decompose(lam, r: int, p: int) -> tuple[Weight, Weight]:
    """Coordinatewise division: lam = lam0 + p^r lam1 with lam0 in X_r."""
    if r < 0:
        raise DomainError(f"r must be nonnegative, got {r}")
    _check_prime(p)
    q = p ** r
    lam0 = tuple(x % q for x in lam)
    lam1 = tuple((x - y) // q for x, y in zip(lam, lam0))
    return lam0, lam1


def y_decompose(lam, p: int) -> SteinbergDecomposition:
    """lam = lam0 + p^r omega with omega in Y and r minimal."""
    _check_prime(p)
    r = 0
    while not all(-(p ** r) <= x <= p ** r - 1 for x in lam):
        r += 1
    lam0, omega = restricted_decompose(lam, r, p)
    return SteinbergDecomposition(r, lam0, omega)


def p_adic_digits(lam, p: int) -> list[Weight]:
    """Base-p digits of a dominant weight, lowest first."""
    lam = tuple(lam)
    if not is_dominant(lam):
        raise DomainError(f"weight {list(lam)} is not dominant")
    _check_prime(p)
    digits = []
    cur = lam
    while any(cur) or not digits:
        digits.append(tuple(x % p for x in cur))
        cur = tuple(x // p for x in cur)
    return digits


def _restricted_char(lam: Weight, db: CharDatabase) -> CharExpr:
    if lam in db:
        return db.get(lam)
    if not any(lam):
        return Basis(lam)
    return db.get(lam)


def dominant_simple_char(lam, db: CharDatabase) -> CharExpr:
    """Product of Frobenius twists of the restricted characters of the digits."""
    lam = tuple(lam)
    p = db.p
    digits = p_adic_digits(lam, p)
    factors = [Frob(i, _restricted_char(d, db), p) if i else _restricted_char(d, db)
               for i, d in enumerate(digits) if any(d)]
    if not factors:
        return _restricted_char(lam, db)
    if len(factors) == 1 and len(digits) == 1:
        return factors[0]
    out = factors[0]
    for f in factors[1:]:
        out = Star(out, f)
    return out


def y_char(omega, db: CharDatabase) -> CharExpr:
    """ch L(omega) for omega in Y: database entry, builtin, or infinite product."""
    omega = tuple(omega)
    rs = db.rs
    if omega in db:
        return db.get(omega)
    if not any(omega):
        return Basis(omega)
    if omega == tuple(-x for x in rs.rho):
        return Verma(omega)
    return y_simple_char(omega, 1, db)


def general_simple_char(lam, db: CharDatabase) -> CharExpr:
    lam = tuple(lam)
    dec = y_decompose(lam, db.p)
    if dec.r == 0:
        return y_char(dec.tail, db)
    head = dominant_simple_char(dec.lambda0, db)
    if not any(dec.tail):
        return head
    return Star(head, Frob(dec.r, y_char(dec.tail, db), db.p))


def antidominant_simple_char(lam, db: CharDatabase) -> CharExpr:
    """ch L(p^r rho + lam) times the twisted Verma tail, as a certified family."""
    lam = tuple(lam)
    rs = db.rs
    if not is_antidominant(lam):
        raise DomainError(f"weight {list(lam)} is not antidominant")
    p = db.p
    r = 0
    while not all(p ** r + x >= 0 for x in lam):
        r += 1
    q = p ** r
    top = tuple(q + x for x in lam)
    head = dominant_simple_char(top, db)
    return Star(head, twisted_verma_tail(rs, q))


def twisted_verma_tail(rs, q: int) -> CharExpr:
    """sum over mu >= 0 of P(mu) e^{-q(rho + mu)}, one term per mu in order of height."""
    table = partition_table(rs)
    base = scale(-q, rs.rho)

    def terms():
        for k in itertools.count():
            for nu in cached_simplex(rs.rank, k):
                if sum(nu) == k:
                    yield Scale(table.value(nu), Basis(sub(base, scale(q, rs.root_to_weight(nu)))))

    return family_sum(terms, [base], label=f"Frob-tail(q={q})")


def y_simple_char(omega, r: int, db: CharDatabase) -> CharExpr:
    """ch L(omega) = prod_k ch^(rk) L((1 - p^r) omega), normalized to top omega."""
    omega = tuple(omega)
    if any(x not in (-1, 0) for x in omega):
        raise DomainError(f"weight {list(omega)} is not in Y")
    if r < 1:
        raise DomainError(f"r must be at least 1, got {r}")
    if not any(omega):
        return Basis(omega)
    p = db.p
    q = p ** r
    nu = tuple((1 - q) * x for x in omega)
    base = Star(Basis(tuple(-x for x in nu)), dominant_simple_char(nu, db))

    def factors():
        for k in itertools.count():
            yield base if k == 0 else Frob(r * k, base, p)

    return InfProduct(omega, factors, lambda k: q ** k, label=f"chL({list(omega)})")
