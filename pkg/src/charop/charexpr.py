"""Lazy elements of the completed character ring with exact windowed evaluation.

A formal character is a map ``X -> Z`` whose support lies below finitely many
ceilings.  Expressions are trees of immutable nodes; nothing is expanded until
:func:`evaluate` is asked for the coefficients on a :class:`Window`, and the
answer is exact on every weight of that window.

Internally each node is reduced to one ceiling per class of X / ZR (any two
ceilings in the same class have a join).  A node evaluated "naturally at depth
D" returns every coefficient within height D of its own ceiling.  Heights add
across a star product, so a product is exact at depth D as soon as both
factors are, which is what makes lazy evaluation exact without bookkeeping of
truncation errors.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .errors import CertificateError, DomainError, ResourceError
from .partition import cached_simplex, partition_table
from .rootdata import RootSystem, Weight, add, scale, weight_from_json, weight_to_json

DEFAULT_CAP = 10**6
DEFAULT_MAX_TERMS = 3_000_000


@dataclass(frozen=True)
class Window:
    """Finite region: weights at most ``depth`` below one of the ceilings."""

    rs: RootSystem
    ceilings: tuple
    depth: int

    def __post_init__(self):
        if not isinstance(self.depth, int) or self.depth < 0:
            raise DomainError(f"window depth must be a nonnegative integer, got {self.depth!r}")
        ceils = tuple(tuple(c) for c in self.ceilings)
        for c in ceils:
            if len(c) != self.rs.rank:
                raise DomainError(f"ceiling {list(c)} does not have rank {self.rs.rank}")
        object.__setattr__(self, "ceilings", ceils)

    def contains(self, lam: Sequence[int]) -> bool:
        for c in self.ceilings:
            h = self.rs.depth_below(c, lam)
            if h is not None and h <= self.depth:
                return True
        return False

    def region(self) -> list[Weight]:
        rs = self.rs
        seen = set()
        out = []
        for c in self.ceilings:
            for nu in cached_simplex(rs.rank, self.depth):
                lam = tuple(a - b for a, b in zip(c, rs.root_to_weight(nu)))
                if lam not in seen:
                    seen.add(lam)
                    out.append(lam)
        return out

    def size(self) -> int:
        return len(self.ceilings) * math.comb(self.depth + self.rs.rank, self.rs.rank)

    def to_json(self) -> dict:
        return {"ceilings": [weight_to_json(c) for c in self.ceilings], "depth": self.depth}

    @classmethod
    def from_json(cls, rs: RootSystem, obj: Mapping) -> "Window":
        return cls(rs, tuple(weight_from_json(c, rs.rank) for c in obj["ceilings"]), int(obj["depth"]))


@dataclass
class FiniteCharacter:
    """Coefficients of a character, exact on every weight of ``window``.

    Weights of the window missing from ``coeffs`` have coefficient zero.
    ``ceilings`` bounds the support of the full (possibly infinite) character.
    """

    coeffs: dict
    ceilings: tuple
    window: Window

    def __getitem__(self, lam) -> int:
        return self.coeffs.get(tuple(lam), 0)

    def __len__(self):
        return len(self.coeffs)

    def items(self) -> list[tuple[Weight, int]]:
        rs = self.window.rs
        return sorted(self.coeffs.items(), key=lambda kv: (-sum(rs.scaled_root(kv[0])), kv[0]))

    def support(self) -> set:
        return {k for k, v in self.coeffs.items() if v}

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json(),
            "ceilings": [weight_to_json(c) for c in self.ceilings],
            "coefficients": [[weight_to_json(k), str(v)] for k, v in self.items()],
        }

    @classmethod
    def from_json(cls, rs: RootSystem, obj: Mapping) -> "FiniteCharacter":
        window = Window.from_json(rs, obj["window"])
        coeffs = {weight_from_json(w, rs.rank): int(c) for w, c in obj["coefficients"]}
        ceilings = tuple(weight_from_json(c, rs.rank) for c in obj.get("ceilings", ()))
        return cls({k: v for k, v in coeffs.items() if v}, ceilings, window)


# -- expression nodes ---------------------------------------------------------------


class CharExpr:
    """Base class for lazy character expressions.

    ``f + g``, ``f - g``, ``k * f`` and ``f * g`` (the star product) build new
    nodes.  Nodes compare by identity.
    """

    __slots__ = ()

    def __add__(self, other):
        if not isinstance(other, CharExpr):
            return NotImplemented
        return Add((self, other))

    def __sub__(self, other):
        if not isinstance(other, CharExpr):
            return NotImplemented
        return Add((self, Scale(-1, other)))

    def __neg__(self):
        return Scale(-1, self)

    def __mul__(self, other):
        if isinstance(other, CharExpr):
            return Star(self, other)
        if isinstance(other, int):
            return Scale(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return Scale(other, self)
        return NotImplemented

    # subclasses implement these two against an Evaluator
    def _ceilings(self, ev: "Evaluator") -> dict:
        raise NotImplementedError

    def _natural(self, ev: "Evaluator", depth: int) -> dict:
        raise NotImplementedError


class Basis(CharExpr):
    """The characteristic function e^lam."""

    __slots__ = ("weight",)

    def __init__(self, weight):
        self.weight = tuple(weight)

    def __repr__(self):
        return f"e^{list(self.weight)}"

    def _ceilings(self, ev):
        return {ev.rs.coset(self.weight): self.weight}

    def _natural(self, ev, depth):
        return {self.weight: 1}


class Verma(CharExpr):
    """ch Delta(lam) = sum over nu >= 0 of P(nu) e^(lam - nu)."""

    __slots__ = ("weight",)

    def __init__(self, weight):
        self.weight = tuple(weight)

    def __repr__(self):
        return f"chDelta({list(self.weight)})"

    def _ceilings(self, ev):
        return {ev.rs.coset(self.weight): self.weight}

    def _natural(self, ev, depth):
        ev.check_size(math.comb(depth + ev.rs.rank, ev.rs.rank), f"Verma character at depth {depth}")
        lam = self.weight
        return {tuple(a - b for a, b in zip(lam, off)): v for off, _, v in ev.table.weighted_table(depth)}


class Finite(CharExpr):
    """A finitely supported character given by explicit coefficients."""

    __slots__ = ("coeffs", "label")

    def __init__(self, coeffs: Mapping, label: str = ""):
        self.coeffs = {tuple(k): int(v) for k, v in coeffs.items() if v}
        self.label = label

    def __repr__(self):
        return self.label or f"Finite({len(self.coeffs)} terms)"

    def _ceilings(self, ev):
        out: dict = {}
        for lam in self.coeffs:
            ev.join_into(out, lam)
        return out

    def _natural(self, ev, depth):
        ceil = ev.ceilings(self)
        return {k: v for k, v in self.coeffs.items() if ev.depth_in(ceil, k) <= depth}


class DBChar(CharExpr):
    """A database entry: a labelled reference to another expression."""

    __slots__ = ("weight", "child", "provenance")

    def __init__(self, weight, child: CharExpr, provenance: str = ""):
        self.weight = tuple(weight)
        self.child = child
        self.provenance = provenance

    def __repr__(self):
        return f"chL({list(self.weight)})"

    def _ceilings(self, ev):
        return ev.ceilings(self.child)

    def _natural(self, ev, depth):
        return ev.natural(self.child, depth)


class Add(CharExpr):
    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[CharExpr]):
        self.terms = tuple(terms)

    def __repr__(self):
        return "(" + " + ".join(map(repr, self.terms)) + ")" if self.terms else "0"

    def _ceilings(self, ev):
        out: dict = {}
        for t in self.terms:
            for c in ev.ceilings(t).values():
                ev.join_into(out, c)
        return out

    def _natural(self, ev, depth):
        ceil = ev.ceilings(self)
        acc: dict = defaultdict(int)
        for t in self.terms:
            tc = ev.ceilings(t)
            if not tc:
                continue
            child_depth = max(depth - ev.rs.depth_below(ceil[k], c) for k, c in tc.items())
            if child_depth < 0:
                continue
            for lam, v in ev.natural(t, child_depth).items():
                if ev.depth_in(ceil, lam) <= depth:
                    acc[lam] += v
        return {k: v for k, v in acc.items() if v}


class Scale(CharExpr):
    __slots__ = ("factor", "child")

    def __init__(self, factor: int, child: CharExpr):
        self.factor = int(factor)
        self.child = child

    def __repr__(self):
        return f"{self.factor}*{self.child!r}"

    def _ceilings(self, ev):
        return ev.ceilings(self.child)

    def _natural(self, ev, depth):
        if self.factor == 0:
            return {}
        k = self.factor
        return {lam: k * v for lam, v in ev.natural(self.child, depth).items()}


class Star(CharExpr):
    """Convolution product f * g (character of a tensor product)."""

    __slots__ = ("left", "right")

    def __init__(self, left: CharExpr, right: CharExpr):
        self.left = left
        self.right = right

    def __repr__(self):
        return f"({self.left!r} * {self.right!r})"

    def _ceilings(self, ev):
        out: dict = {}
        for a in ev.ceilings(self.left).values():
            for b in ev.ceilings(self.right).values():
                ev.join_into(out, add(a, b))
        return out

    def _natural(self, ev, depth):
        ceil = ev.ceilings(self)
        lc, rc = ev.ceilings(self.left), ev.ceilings(self.right)
        if not lc or not rc:
            return {}
        rs = ev.rs
        left = ev.natural(self.left, depth)
        right = ev.natural(self.right, depth)
        groups: dict = defaultdict(list)
        for lam, v in right.items():
            k = rs.coset(lam)
            groups[k].append((rs.depth_below(rc[k], lam), lam, v))
        for g in groups.values():
            g.sort(key=lambda t: t[0])
        gaps = {}
        for kl, cl in lc.items():
            for kr, cr in rc.items():
                top = add(cl, cr)
                gaps[kl, kr] = rs.depth_below(ceil[rs.coset(top)], top)
        acc: dict = defaultdict(int)
        ops = 0
        for mu, a in left.items():
            kl = rs.coset(mu)
            dl = rs.depth_below(lc[kl], mu)
            for kr, entries in groups.items():
                limit = depth - gaps[kl, kr] - dl
                for dr, nu, b in entries:
                    if dr > limit:
                        break
                    acc[tuple(x + y for x, y in zip(mu, nu))] += a * b
                    ops += 1
            if ops > ev.max_terms * 10:
                raise ResourceError(f"star product at depth {depth} exceeds the work limit")
        return {k: v for k, v in acc.items() if v}


class Frob(CharExpr):
    """Frobenius twist: f^(r) is supported on p^r supp(f), f^(r)(p^r lam) = f(lam)."""

    __slots__ = ("r", "child", "p")

    def __init__(self, r: int, child: CharExpr, p: int):
        if r < 0:
            raise DomainError(f"Frobenius twist exponent must be >= 0, got {r}")
        self.r = int(r)
        self.child = child
        self.p = int(p)

    def __repr__(self):
        return f"Frob{self.r}({self.child!r})"

    def _ceilings(self, ev):
        q = self.p ** self.r
        out: dict = {}
        for c in ev.ceilings(self.child).values():
            ev.join_into(out, scale(q, c))
        return out

    def _natural(self, ev, depth):
        q = self.p ** self.r
        return {scale(q, lam): v for lam, v in ev.natural(self.child, depth // q).items()}


class FamilySum(CharExpr):
    """Sum of a summable family.

    ``terms`` is a zero-argument callable returning a fresh iterable of
    expressions.  The certificate: every term lies below the declared
    ``ceilings``, the depth of successive term ceilings below them never
    decreases, and only finitely many terms share a depth.  The last
    condition cannot be checked, so the evaluator's cap bounds it.
    """

    __slots__ = ("terms", "ceilings", "label")

    def __init__(self, terms: Callable[[], Iterable[CharExpr]], ceilings: Iterable, label: str = ""):
        self.terms = terms
        self.ceilings = tuple(tuple(c) for c in ceilings)
        self.label = label

    def __repr__(self):
        return self.label or "FamilySum(...)"

    def _ceilings(self, ev):
        out: dict = {}
        for c in self.ceilings:
            ev.join_into(out, c)
        return out

    def _natural(self, ev, depth):
        ceil = ev.ceilings(self)
        rs = ev.rs
        acc: dict = defaultdict(int)
        prev = None
        for count, term in enumerate(self.terms()):
            if count >= ev.cap:
                raise CertificateError(f"{self!r}: family did not leave the window within {ev.cap} terms")
            tc = ev.ceilings(term)
            if not tc:
                continue
            gaps = []
            for k, c in tc.items():
                top = ceil.get(k)
                g = None if top is None else rs.depth_below(top, c)
                if g is None:
                    raise CertificateError(f"{self!r}: term {count} has ceiling {list(c)} above the family ceilings")
                gaps.append(g)
            td = min(gaps)
            if prev is not None and td < prev:
                raise CertificateError(f"{self!r}: term ceilings must not rise again (term {count})")
            prev = td
            if td > depth:
                break
            for lam, v in ev.natural(term, depth - td).items():
                if ev.depth_in(ceil, lam) <= depth:
                    acc[lam] += v
        return {k: v for k, v in acc.items() if v}


class InfProduct(CharExpr):
    """e^top times a convergent product of normalized factors.

    ``factors()`` yields G_0, G_1, ... each of the form 1 + (terms strictly
    below 0); ``drop(k)`` certifies that every nonconstant term of G_k lies
    at least that far below 0.  Drops must be nondecreasing and unbounded.
    """

    __slots__ = ("top", "factors", "drop", "label")

    def __init__(self, top, factors: Callable[[], Iterable[CharExpr]], drop: Callable[[int], int], label: str = ""):
        self.top = tuple(top)
        self.factors = factors
        self.drop = drop
        self.label = label

    def __repr__(self):
        return self.label or "InfProduct(...)"

    def _ceilings(self, ev):
        return {ev.rs.coset(self.top): self.top}

    def _natural(self, ev, depth):
        rs = ev.rs
        zero = tuple([0] * rs.rank)
        zkey = rs.coset(zero)
        acc = {zero: 1}
        prev = None
        for k, g in enumerate(self.factors()):
            if k >= ev.cap:
                raise CertificateError(f"{self!r}: product did not converge within {ev.cap} factors")
            d = self.drop(k)
            if prev is not None and d < prev:
                raise CertificateError(f"{self!r}: factor drops must be nondecreasing")
            prev = d
            if d > depth:
                break
            if ev.ceilings(g) != {zkey: zero}:
                raise CertificateError(f"{self!r}: factor {k} is not normalized to ceiling 0")
            vals = ev.natural(g, depth)
            if vals.get(zero) != 1:
                raise CertificateError(f"{self!r}: factor {k} does not have constant term 1")
            terms = []
            for lam, v in vals.items():
                h = rs.depth_below(zero, lam)
                if 0 < h < d:
                    raise CertificateError(f"{self!r}: factor {k} has a term at depth {h} < certified {d}")
                terms.append((h, lam, v))
            terms.sort(key=lambda t: t[0])
            nxt: dict = defaultdict(int)
            for mu, a in acc.items():
                dm = rs.depth_below(zero, mu)
                for h, lam, v in terms:
                    if dm + h > depth:
                        break
                    nxt[add(mu, lam)] += a * v
            acc = {x: v for x, v in nxt.items() if v}
        return {add(self.top, lam): v for lam, v in acc.items()}


# -- evaluation ------------------------------------------------------------------------


class Evaluator:
    """Evaluation context: memoizes ceilings and natural evaluations per node."""

    def __init__(self, rs: RootSystem, cap: int = DEFAULT_CAP, max_terms: int = DEFAULT_MAX_TERMS):
        self.rs = rs
        self.cap = cap
        self.max_terms = max_terms
        self.table = partition_table(rs)
        self._ceil: dict = {}
        self._memo: dict = {}

    def check_size(self, n: int, what: str) -> None:
        if n > self.max_terms:
            raise ResourceError(f"{what} needs {n} terms, above the limit {self.max_terms}")

    def join_into(self, ceils: dict, lam) -> None:
        rs = self.rs
        lam = tuple(lam)
        k = rs.coset(lam)
        cur = ceils.get(k)
        if cur is None:
            ceils[k] = lam
        elif cur != lam:
            s = tuple(max(a, b) for a, b in zip(rs.scaled_root(cur), rs.scaled_root(lam)))
            ceils[k] = rs.from_scaled(s)

    def depth_in(self, ceil: dict, lam) -> float:
        """Depth of ``lam`` below the ceiling of its class (inf if not below)."""
        c = ceil.get(self.rs.coset(lam))
        if c is None:
            return math.inf
        h = self.rs.depth_below(c, lam)
        return math.inf if h is None else h

    def ceilings(self, node: CharExpr) -> dict:
        hit = self._ceil.get(id(node))
        if hit is None:
            hit = (node, node._ceilings(self))
            self._ceil[id(node)] = hit
        return hit[1]

    def natural(self, node: CharExpr, depth: int) -> dict:
        if depth < 0:
            return {}
        hit = self._memo.get(id(node))
        if hit is not None:
            _, d, vals = hit
            if d == depth:
                return vals
            if d > depth:
                ceil = self.ceilings(node)
                return {k: v for k, v in vals.items() if self.depth_in(ceil, k) <= depth}
        vals = node._natural(self, depth)
        self._memo[id(node)] = (node, depth, vals)
        return vals

    def required_depth(self, node: CharExpr, window: Window) -> int:
        rs = self.rs
        ceil = self.ceilings(node)
        best = -1
        for mu in window.ceilings:
            c = ceil.get(rs.coset(mu))
            if c is None:
                continue
            diff = [(a - b) // rs.det for a, b in zip(rs.scaled_root(c), rs.scaled_root(mu))]
            need = sum(max(0, -x) for x in diff)
            if need <= window.depth:
                best = max(best, sum(diff) + window.depth)
        return best

    def evaluate(self, node: CharExpr, window: Window) -> FiniteCharacter:
        if window.rs is not self.rs:
            raise DomainError("window and evaluator use different root systems")
        depth = self.required_depth(node, window)
        ceil = self.ceilings(node)
        coeffs = {}
        if depth >= 0:
            for lam, v in self.natural(node, depth).items():
                if v and window.contains(lam):
                    coeffs[lam] = v
        return FiniteCharacter(coeffs, tuple(ceil.values()), window)


def evaluate(expr: CharExpr, window: Window, *, cap: int = DEFAULT_CAP,
             evaluator: Evaluator | None = None) -> FiniteCharacter:
    """Exact coefficients of ``expr`` on every weight of ``window``."""
    ev = evaluator or Evaluator(window.rs, cap=cap)
    return ev.evaluate(expr, window)


def equal_on(f: CharExpr, g: CharExpr, window: Window, *, evaluator: Evaluator | None = None) -> bool:
    ev = evaluator or Evaluator(window.rs)
    a, b = ev.evaluate(f, window), ev.evaluate(g, window)
    return a.coeffs == b.coeffs


def leq_on(f: CharExpr, g: CharExpr, window: Window, *, evaluator: Evaluator | None = None) -> bool:
    """Pointwise ``f <= g`` on the window."""
    ev = evaluator or Evaluator(window.rs)
    a, b = ev.evaluate(f, window), ev.evaluate(g, window)
    return all(a[k] <= b[k] for k in set(a.coeffs) | set(b.coeffs))


def family_sum(enumerator, ceilings: Iterable, label: str = "") -> FamilySum:
    """Summable family; ``enumerator`` is a callable or a re-iterable collection."""
    if callable(enumerator):
        return FamilySum(enumerator, ceilings, label)
    items = tuple(enumerator)
    return FamilySum(lambda: iter(items), ceilings, label)


def zero() -> CharExpr:
    return Add(())


def expr_ceilings(rs: RootSystem, expr: CharExpr) -> list[Weight]:
    """Natural ceilings of an expression, one per class of X / ZR."""
    return list(Evaluator(rs).ceilings(expr).values())


def window_for(rs: RootSystem, expr: CharExpr, depth: int) -> Window:
    """Window whose ceilings are the expression's own ceilings."""
    return Window(rs, tuple(expr_ceilings(rs, expr)), depth)
