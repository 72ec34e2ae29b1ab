"""Affine Weyl group orbits, strong linkage and Verma-basis bookkeeping.

The affine Weyl group W_p acts on X by the dot action and is generated by the
reflections ``s_{beta, mp}``.  An element is recorded as an :class:`AffineWord`
of ``(root index, m)`` pairs.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .charexpr import Add, CharExpr, Evaluator, Scale, Verma, Window
from .errors import DomainError
from .rootdata import RootSystem, Weight, add, affine_reflect, dominance_leq, weight_from_json, weight_to_json


@dataclass(frozen=True)
class AffineWord:
    """w = s_{b1,m1 p} ... s_{bk,mk p}; the rightmost reflection acts first."""

    steps: tuple = ()

    def apply(self, rs: RootSystem, p: int, lam: Sequence) -> tuple:
        out = tuple(lam)
        for b, m in reversed(self.steps):
            out = affine_reflect(rs, b, m, p, out)
        return out

    def inverse(self) -> "AffineWord":
        return AffineWord(tuple(reversed(self.steps)))

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class LinkageClass:
    representative: Weight


@dataclass
class VermaExpansion:
    """Finite combination of Verma characters, exact on ``window``."""

    coeffs: dict
    window: Window | None = None

    def to_expr(self) -> CharExpr:
        return Add(tuple(Scale(v, Verma(k)) for k, v in sorted(self.coeffs.items()) if v))

    def items(self) -> list:
        return sorted(self.coeffs.items(), key=lambda kv: (-sum(kv[0]), kv[0]))

    def to_json(self) -> dict:
        out = {"expansion": [[weight_to_json(k), str(v)] for k, v in sorted(self.coeffs.items(), reverse=True)]}
        if self.window is not None:
            out["window"] = self.window.to_json()
        return out


def _pairings(rs: RootSystem, lam) -> list:
    shifted = add(lam, rs.rho)
    return [rs.pair(shifted, i) for i in range(len(rs.positive_roots))]


def in_closed_alcove(rs: RootSystem, lam, p: int) -> bool:
    """0 <= <lam + rho, beta^vee> <= p for every positive root."""
    return all(0 <= a <= p for a in _pairings(rs, lam))


def in_open_alcove(rs: RootSystem, lam, p: int) -> bool:
    return all(0 < a < p for a in _pairings(rs, lam))


def fundamental_domain_rep(rs: RootSystem, lam, p: int) -> tuple[Weight, AffineWord]:
    """(nu, w) with nu in the closed fundamental alcove and w . nu = lam.

    Reflects in a violated wall until none is left; each reflection moves the
    point strictly closer to the alcove, so the loop terminates.
    """
    x = tuple(lam)
    applied = []
    while True:
        worst = None
        for i, a in enumerate(_pairings(rs, x)):
            if a < 0:
                gap, m = -a, 0
            elif a > p:
                gap, m = a - p, 1
            else:
                continue
            if worst is None or gap > worst[0]:
                worst = (gap, i, m)
        if worst is None:
            break
        _, i, m = worst
        x = affine_reflect(rs, i, m, p, x)
        applied.append((i, m))
    return x, AffineWord(tuple(applied))


def linkage_class(rs: RootSystem, lam, p: int) -> LinkageClass:
    return LinkageClass(fundamental_domain_rep(rs, lam, p)[0])


def strongly_linked(rs: RootSystem, mu, lam, p: int) -> bool:
    """True iff a chain of downward affine reflections leads from lam to mu."""
    mu, lam = tuple(mu), tuple(lam)
    if mu == lam:
        return True
    if not dominance_leq(rs, mu, lam):
        return False
    seen = {lam}
    queue = deque([lam])
    while queue:
        x = queue.popleft()
        room = rs.depth_below(x, mu)
        for i, a in enumerate(_pairings(rs, x)):
            hb = sum(rs.positive_roots[i])
            bw = rs.positive_roots_w[i]
            k = a % p or p
            while k * hb <= room:
                y = tuple(c - k * b for c, b in zip(x, bw))
                if y == mu:
                    return True
                if y not in seen and rs.depth_below(y, mu) is not None:
                    seen.add(y)
                    queue.append(y)
                k += p
    return False


def verma_expansion(rs: RootSystem, expr: CharExpr, window: Window,
                    evaluator: Evaluator | None = None) -> VermaExpansion:
    """Coefficients b with expr = sum b_lam ch Delta(lam) near the top of ``expr``.

    Works on the window whose ceilings are the expression's own ceilings and
    which is deep enough to contain ``window``; the result is exact there.
    """
    ev = evaluator or Evaluator(rs)
    depth = ev.required_depth(expr, window)
    ceil = ev.ceilings(expr)
    if depth < 0 or not ceil:
        return VermaExpansion({}, window)
    work = Window(rs, tuple(ceil.values()), depth)
    rem = dict(ev.evaluate(expr, work).coeffs)
    table = ev.table
    order = sorted(work.region(), key=lambda x: -sum(rs.scaled_root(x)))
    region = set(order)
    out = {}
    for lam in order:
        b = rem.get(lam)
        if not b:
            continue
        out[lam] = b
        for off, h, v in table.weighted_table(depth):
            x = tuple(a - c for a, c in zip(lam, off))
            if x not in region:
                continue
            nv = rem.get(x, 0) - b * v
            if nv:
                rem[x] = nv
            else:
                rem.pop(x, None)
    return VermaExpansion(out, work)


def split_by_linkage(rs: RootSystem, exp: VermaExpansion, p: int) -> dict:
    """Group Verma constituents by linkage class; the parts sum to ``exp``."""
    parts: dict = defaultdict(dict)
    for k, v in exp.coeffs.items():
        if v:
            parts[linkage_class(rs, k, p)][k] = v
    return {c: VermaExpansion(d, exp.window) for c, d in parts.items()}


def in_upper_closure(rs: RootSystem, w: AffineWord, lam, p: int) -> bool:
    """Whether w . lam lies in the upper closure of the alcove w . C."""
    h = rs.coxeter_number
    if p < h:
        raise DomainError(f"p={p} is smaller than the Coxeter number {h} of {rs.name}; the alcove has no interior")
    lam = tuple(lam)
    if not in_closed_alcove(rs, lam, p):
        raise DomainError(f"weight {list(lam)} is not in the closed fundamental alcove for p={p}")
    x0 = tuple(Fraction(p, h) - 1 for _ in rs.rho)
    centre = _pairings(rs, w.apply(rs, p, x0))
    y = _pairings(rs, w.apply(rs, p, lam))
    for c, a in zip(centre, y):
        n = math.floor(c / p)
        if not n * p < a <= (n + 1) * p:
            return False
    return True


def _transport_window(rs: RootSystem, window: Window, mu, lam) -> Window | None:
    from .rootdata import enumerate_weyl

    diff = tuple(a - b for a, b in zip(lam, mu))
    deltas = {g.apply(rs, diff) for g in enumerate_weyl(rs)}
    droots = [rs.to_root(d) for d in deltas]
    umax = [max(d[j] for d in droots) for j in range(rs.rank)]
    hmax = max(sum(d) for d in droots)
    lam_root = rs.to_root(lam)
    mu_key = rs.coset(mu)
    ceilings, depths = [], []
    for m in window.ceilings:
        if rs.coset(m) != mu_key:
            continue
        target = [a + u for a, u in zip(rs.to_root(m), umax)]
        new_root = [lr + math.floor(t - lr) for lr, t in zip(lam_root, target)]
        new = tuple(int(x) for x in rs.root_to_weight(new_root))
        d = math.floor(window.depth + sum(new_root) - sum(rs.to_root(m)) - hmax)
        if d >= 0:
            ceilings.append(new)
            depths.append(d)
    if not ceilings:
        return None
    return Window(rs, tuple(ceilings), min(depths))


def translate_expansion(rs: RootSystem, exp: VermaExpansion | Mapping, mu, lam, p: int) -> VermaExpansion:
    """Move each constituent Delta(w . mu) to Delta(w . lam), merging collisions."""
    mu, lam = tuple(mu), tuple(lam)
    if isinstance(exp, Mapping):
        exp = VermaExpansion(dict(exp), None)
    for name, x in (("source", mu), ("target", lam)):
        if not in_closed_alcove(rs, x, p):
            raise DomainError(f"{name} weight {list(x)} is not in the closed fundamental alcove for p={p}")
    if mu == lam:
        return VermaExpansion({k: v for k, v in exp.coeffs.items() if v}, exp.window)
    if not in_open_alcove(rs, mu, p):
        raise DomainError(f"source weight {list(mu)} lies on a wall; translation needs a regular source")
    out: dict = defaultdict(int)
    for key, v in exp.coeffs.items():
        rep, word = fundamental_domain_rep(rs, key, p)
        if rep != mu:
            raise DomainError(f"weight {list(key)} is not in the orbit of {list(mu)}")
        out[word.apply(rs, p, lam)] += v
    window = None if exp.window is None else _transport_window(rs, exp.window, mu, lam)
    return VermaExpansion({k: v for k, v in out.items() if v}, window)


def wall_simple_char(rs: RootSystem, w: AffineWord, lam, column: VermaExpansion | Mapping, p: int,
                     mu=None) -> CharExpr:
    """ch L(w . lam) = sum_y c_{y,w} ch Delta(y . lam) for w . lam in the upper closure.

    ``column`` maps y . mu to c_{y,w} for a regular weight mu (default: the
    common orbit representative of the keys, normally 0).
    """
    lam = tuple(lam)
    if not in_upper_closure(rs, w, lam, p):
        raise DomainError(f"w . {list(lam)} is not in the upper closure of w . C for p={p}")
    coeffs = column.coeffs if isinstance(column, VermaExpansion) else dict(column)
    if mu is None:
        reps = {fundamental_domain_rep(rs, k, p)[0] for k in coeffs}
        if len(reps) > 1:
            raise DomainError("column keys lie in more than one linkage class")
        mu = reps.pop() if reps else lam
    res = translate_expansion(rs, VermaExpansion(dict(coeffs), getattr(column, "window", None)), mu, lam, p)
    return res.to_expr()


def wall_window(rs: RootSystem, column: VermaExpansion, mu, lam) -> Window | None:
    """Window on which the translated column is exact."""
    if column.window is None:
        return None
    return _transport_window(rs, column.window, tuple(mu), tuple(lam))


class UniTriangularMatrix:
    """Square matrix indexed by ``index`` with unit diagonal.

    ``index`` lists keys so that smaller keys come later; entry (row, col) may
    be nonzero only when row comes at or after col, i.e. the matrix is lower
    unitriangular in positional form.
    """

    def __init__(self, index: Iterable[Hashable], entries: Mapping, rs: RootSystem | None = None):
        self.index = tuple(index)
        self.pos = {k: i for i, k in enumerate(self.index)}
        if len(self.pos) != len(self.index):
            raise DomainError("matrix index has repeated keys")
        self.entries = {}
        for (r, c), v in entries.items():
            if r not in self.pos or c not in self.pos:
                raise DomainError(f"matrix entry ({r}, {c}) is outside the index")
            if v:
                self.entries[r, c] = int(v)
        for k in self.index:
            if self.entries.get((k, k), 0) != 1:
                raise DomainError(f"diagonal entry at {k} is {self.entries.get((k, k), 0)}, not 1")
        for (r, c), v in self.entries.items():
            if self.pos[r] < self.pos[c]:
                raise DomainError(f"entry ({r}, {c}) violates the index order")
            if rs is not None and r != c and not dominance_leq(rs, r, c):
                raise DomainError(f"entry ({list(r)}, {list(c)}) is nonzero but {list(r)} is not below {list(c)}")

    def __getitem__(self, rc) -> int:
        return self.entries.get(tuple(rc), 0)

    def __eq__(self, other):
        return isinstance(other, UniTriangularMatrix) and self.index == other.index and self.entries == other.entries

    def dense(self) -> list[list[int]]:
        return [[self.entries.get((r, c), 0) for c in self.index] for r in self.index]

    @classmethod
    def from_dense(cls, index, rows) -> "UniTriangularMatrix":
        index = tuple(index)
        entries = {(index[i], index[j]): v for i, row in enumerate(rows) for j, v in enumerate(row) if v}
        return cls(index, entries)

    @classmethod
    def identity(cls, index) -> "UniTriangularMatrix":
        return cls(index, {(k, k): 1 for k in index})

    def matmul(self, other: "UniTriangularMatrix") -> "UniTriangularMatrix":
        if self.index != other.index:
            raise DomainError("matrices have different indices")
        rows: dict = defaultdict(dict)
        for (r, c), v in other.entries.items():
            rows[r][c] = v
        out: dict = defaultdict(int)
        for (r, k), a in self.entries.items():
            for c, b in rows[k].items():
                out[r, c] += a * b
        return UniTriangularMatrix(self.index, out)

    def to_json(self) -> dict:
        idx = [weight_to_json(k) if isinstance(k, tuple) else k for k in self.index]
        ents = sorted([self.pos[r], self.pos[c], str(v)] for (r, c), v in self.entries.items())
        return {"index": idx, "entries": ents}

    @classmethod
    def from_json(cls, obj: Mapping, rs: RootSystem | None = None) -> "UniTriangularMatrix":
        index = [weight_from_json(k) if isinstance(k, list) else k for k in obj["index"]]
        entries = {}
        for i, j, v in obj["entries"]:
            entries[index[int(i)], index[int(j)]] = int(v)
        return cls(index, entries, rs)


def invert_unitriangular(a: UniTriangularMatrix) -> UniTriangularMatrix:
    """Exact integer inverse by forward substitution, one column at a time."""
    n = len(a.index)
    dense = a.dense()
    inv = [[0] * n for _ in range(n)]
    for j in range(n):
        inv[j][j] = 1
        for i in range(j + 1, n):
            row = dense[i]
            inv[i][j] = -sum(row[k] * inv[k][j] for k in range(j, i) if row[k])
    return UniTriangularMatrix.from_dense(a.index, inv)


__all__ = [
    "AffineWord", "LinkageClass", "VermaExpansion", "UniTriangularMatrix", "fundamental_domain_rep",
    "linkage_class", "strongly_linked", "verma_expansion", "split_by_linkage", "in_upper_closure",
    "translate_expansion", "wall_simple_char", "wall_window", "invert_unitriangular",
    "in_closed_alcove", "in_open_alcove",
]
