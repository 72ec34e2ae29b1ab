"""Finite tilting and infinite tilting character identities."""

from __future__ import annotations

from functools import lru_cache

from .charexpr import Add, Basis, CharExpr, DBChar, Evaluator, Finite, Frob, Scale, Star, Verma, Window, leq_on
from .database import CharDatabase, sl2_chi
from .errors import DomainError
from .rootdata import RootSystem, build_root_system, dot_action, enumerate_weyl, is_dominant, longest_element


@lru_cache(maxsize=None)
def _weyl_coeffs(rs: RootSystem, lam: tuple) -> tuple:
    alt = Add(tuple(Scale(w.sign(rs), Verma(dot_action(rs, w, lam))) for w in enumerate_weyl(rs)))
    low = longest_element(rs).apply(rs, lam)
    depth = rs.depth_below(lam, low)
    vals = Evaluator(rs).evaluate(alt, Window(rs, (lam,), depth))
    return tuple(sorted(vals.coeffs.items()))


def weyl_coeffs(rs: RootSystem, lam) -> dict:
    lam = tuple(lam)
    if not is_dominant(lam):
        raise DomainError(f"weight {list(lam)} is not dominant")
    return dict(_weyl_coeffs(rs, lam))


def weyl_char(rs: RootSystem, lam) -> CharExpr:
    """Weyl character chi(lam) as the alternating sum of Verma characters, expanded."""
    lam = tuple(lam)
    return Finite(weyl_coeffs(rs, lam), label=f"chi({list(lam)})")


def weyl_dimension(rs: RootSystem, lam) -> int:
    """Weyl dimension formula, an independent check on :func:`weyl_char`."""
    from fractions import Fraction

    num = Fraction(1)
    for i in range(len(rs.positive_roots)):
        num *= Fraction(rs.pair(tuple(a + 1 for a in lam), i), rs.pair(rs.rho, i))
    return int(num)


def weyl_expansion(rs: RootSystem, coeffs: dict) -> dict:
    """Coefficients of a W-symmetric finite character in the Weyl basis.

    Peels off a maximal dominant weight at a time.
    """
    rest = {k: v for k, v in coeffs.items() if v}
    out = {}
    while rest:
        dom = [k for k in rest if is_dominant(k)]
        if not dom:
            raise DomainError("character is not W-symmetric (no dominant weight left)")
        top = max(dom, key=lambda k: sum(rs.scaled_root(k)))
        c = rest[top]
        out[top] = c
        for k, v in weyl_coeffs(rs, top).items():
            nv = rest.get(k, 0) - c * v
            if nv:
                rest[k] = nv
            else:
                rest.pop(k, None)
    return out


def _check_bound(rs: RootSystem, p: int, force: bool) -> None:
    h = rs.coxeter_number
    if p < 2 * h - 2 and not force:
        raise DomainError(f"p={p} is below 2h-2={2 * h - 2} for {rs.name}; pass force to override")


def donkin_product(db: CharDatabase, lam, mu, r: int, force: bool = False) -> CharExpr:
    """ch T(lam + p^r mu) = ch T(lam) * ch^(r) T(mu)."""
    rs, p = db.rs, db.p
    lam, mu = tuple(lam), tuple(mu)
    if r < 1:
        raise DomainError(f"r must be at least 1, got {r}")
    q = p ** r
    for x in lam:
        if not q - 1 <= x <= 2 * q - 2:
            raise DomainError(f"weight {list(lam)} is not in (p^r - 1)rho + X_r for p={p}, r={r}")
    if not is_dominant(mu):
        raise DomainError(f"weight {list(mu)} is not dominant")
    _check_bound(rs, p, force)
    head = db.get(lam)
    if not any(mu):
        return head
    target = tuple(a + q * b for a, b in zip(lam, mu))
    return DBChar(target, Star(head, Frob(r, _tilting(db, mu), p)), "Donkin product")


def _tilting(db: CharDatabase, mu) -> CharExpr:
    mu = tuple(mu)
    if mu not in db and not any(mu):
        return Basis(mu)
    return db.get(mu)


def infty_tilting_char(lam, r: int, db: CharDatabase, force: bool = False) -> CharExpr:
    """ch T^inf(lam) = ch T(lam + p^r rho) * ch^(r) Delta(-rho)."""
    rs, p = db.rs, db.p
    lam = tuple(lam)
    if r < 1:
        raise DomainError(f"r must be at least 1, got {r}")
    q = p ** r
    if not all(0 <= x + 1 < q for x in lam):
        raise DomainError(f"weight {list(lam)} is not in X_r - rho for p={p}, r={r}")
    _check_bound(rs, p, force)
    top = tuple(x + q for x in lam)
    neg_rho = tuple(-x for x in rs.rho)
    return Star(db.get(top), Frob(r, Verma(neg_rho), p))


def infty_tilting_upper_bound_check(candidate: CharExpr, lam, r: int, db: CharDatabase, window: Window) -> bool:
    """Pointwise check candidate <= ch T(lam + p^r rho) * ch^(r) Delta(-rho); valid for every p."""
    bound = infty_tilting_char(lam, r, db, force=True)
    return leq_on(candidate, bound, window)


def sl2_tilting_fixture(p: int, bound: int | None = None) -> CharDatabase:
    """Tilting characters T(m) of sl2 for 0 <= m <= bound.

    T(m) = chi(m) for m < p, chi(m) + chi(2p - 2 - m) for p <= m <= 2p - 2,
    and larger m by the Donkin product with r = 1.
    """
    rs = build_root_system("A", 1)
    if bound is None:
        bound = p * p + 2 * p
    coeffs: dict = {}
    prov: dict = {}
    for m in range(bound + 1):
        if m < p:
            c = sl2_chi(m)
            prov[(m,)] = "classical sl2: T(m) = chi(m)"
        elif m <= 2 * p - 2:
            c = dict(sl2_chi(m))
            for k, v in sl2_chi(2 * p - 2 - m).items():
                c[k] = c.get(k, 0) + v
            prov[(m,)] = "classical sl2: T(m) = chi(m) + chi(2p-2-m)"
        else:
            lam = p - 1 + (m - (p - 1)) % p
            mu = (m - lam) // p
            c = _product(coeffs[(lam,)], {(p * k[0],): v for k, v in coeffs[(mu,)].items()})
            prov[(m,)] = f"Donkin product T({lam}) * T({mu})^(1)"
        coeffs[(m,)] = c
    return CharDatabase(rs, p, coeffs, prov, kind="tilting")


def _product(a: dict, b: dict) -> dict:
    out: dict = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            k = tuple(x + y for x, y in zip(k1, k2))
            out[k] = out.get(k, 0) + v1 * v2
    return {k: v for k, v in out.items() if v}


def lowest_weight(rs: RootSystem, lam) -> tuple:
    return longest_element(rs).apply(rs, tuple(lam))


def weyl_depth(rs: RootSystem, lam) -> int:
    """Height of lam minus its lowest W-conjugate, i.e. the depth of chi(lam)."""
    return rs.depth_below(tuple(lam), lowest_weight(rs, lam))


__all__ = [
    "weyl_char", "weyl_coeffs", "weyl_dimension", "weyl_expansion", "donkin_product",
    "infty_tilting_char", "infty_tilting_upper_bound_check", "sl2_tilting_fixture", "weyl_depth",
]
