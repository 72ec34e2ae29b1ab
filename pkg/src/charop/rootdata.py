"""Finite root systems, the weight lattice and (affine) Weyl group actions.

Weights are integer tuples in fundamental-weight coordinates, so that
``lam[i]`` is the pairing of ``lam`` with the i-th simple coroot.  Elements of
the root lattice are stored in simple-root coordinates.  The Cartan matrix
uses the convention ``cartan[i][j] = <alpha_j, alpha_i^vee>``, hence the
simple root ``alpha_j`` in weight coordinates is column ``j``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError

Weight = tuple  # tuple[int, ...] in fundamental coordinates
RootVector = tuple  # tuple[int | Fraction, ...] in simple-root coordinates

_VALID_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}

# Known |R+| per type, used as a construction-time sanity check.
_POSITIVE_ROOT_COUNT = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}


def _cartan_matrix(label: str, n: int) -> list[list[int]]:
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, a_ij=-1, a_ji=-1):
        a[i][j] = a_ij
        a[j][i] = a_ji

    if label in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if label == "B":
            link(n - 2, n - 1, -1, -2)  # alpha_n short
        elif label == "C":
            link(n - 2, n - 1, -2, -1)  # alpha_n long
    elif label == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif label == "E":
        # Bourbaki: 1-3-4-5-...-n with 2 attached to 4
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif label == "F":
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif label == "G":
        link(0, 1, -3, -1)  # alpha_1 short
    return a


def _symmetrizer(a: list[list[int]]) -> tuple[int, ...]:
    """Squared root lengths d_i with d_i a_ij = d_j a_ji, scaled to coprime ints."""
    n = len(a)
    d: list[Fraction | None] = [None] * n
    d[0] = Fraction(1)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(n):
            if a[i][j] != 0 and i != j and d[j] is None:
                d[j] = d[i] * a[i][j] / a[j][i]
                queue.append(j)
    if any(x is None for x in d):
        raise DomainError("Cartan matrix is not connected")
    lcm = 1
    for x in d:
        lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in d]
    g = 0
    for x in ints:
        g = _gcd(g, x)
    return tuple(x // g for x in ints)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _det_and_adjugate(a: list[list[int]]) -> tuple[int, list[list[int]]]:
    """Exact determinant and adjugate via Fraction Gauss-Jordan elimination."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise DomainError("singular Cartan matrix")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        pv = m[col][col]
        det *= pv
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    inv = [row[n:] for row in m]
    adj = [[int(x * det) for x in row] for row in inv]
    return int(det), adj


def _is_positive_definite(sym: list[list[Fraction]]) -> bool:
    n = len(sym)
    m = [row[:] for row in sym]
    for col in range(n):
        if m[col][col] <= 0:
            return False
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return True


class RootSystem:
    """Immutable bundle of Lie-theoretic data for a finite irreducible type."""

    def __init__(self, type_label: str, rank: int):
        label = str(type_label).upper()
        if label not in _VALID_RANKS or not isinstance(rank, int) or not _VALID_RANKS[label](rank):
            raise DomainError(f"invalid root system type {type_label}{rank}")
        self.type_label = label
        self.rank = n = rank
        a = _cartan_matrix(label, n)
        self.cartan = tuple(tuple(row) for row in a)
        self.symmetrizer = _symmetrizer(a)
        self.det, adj = _det_and_adjugate(a)
        self._adj = tuple(tuple(row) for row in adj)
        sym = [[Fraction(a[i][j] * self.symmetrizer[i], 2) for j in range(n)] for i in range(n)]
        if not _is_positive_definite(sym):
            raise DomainError("symmetrized Cartan matrix is not positive definite")
        self._inner = sym

        self.positive_roots = tuple(self._close_roots())
        expected = _POSITIVE_ROOT_COUNT[label](n)
        if len(self.positive_roots) != expected:
            raise AssertionError(f"root closure produced {len(self.positive_roots)} roots, expected {expected}")
        self.positive_roots_w = tuple(self.root_to_weight(b) for b in self.positive_roots)
        self.coroots = tuple(self._coroot(b) for b in self.positive_roots)
        self.simple_roots_w = tuple(tuple(a[i][j] for i in range(n)) for j in range(n))
        self.rho = tuple([1] * n)
        self.coxeter_number = max(sum(c) for c in self.coroots) + 1
        self._scaled_cache: dict = {}

    def __repr__(self):
        return f"RootSystem({self.type_label}{self.rank})"

    @property
    def name(self) -> str:
        return f"{self.type_label}{self.rank}"

    # -- construction helpers -------------------------------------------------

    def _pair_simple(self, beta: Sequence[int], i: int) -> int:
        return sum(self.cartan[i][j] * beta[j] for j in range(self.rank))

    def _close_roots(self) -> list[tuple[int, ...]]:
        n = self.rank
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        found = set(simple)
        level = list(simple)
        roots = list(simple)
        while level:
            nxt = []
            for beta in level:
                for i in range(n):
                    if beta == simple[i]:
                        continue
                    # alpha_i-string through beta: r - q = <beta, alpha_i^vee>
                    r = 0
                    down = list(beta)
                    while True:
                        down[i] -= 1
                        if tuple(down) in found:
                            r += 1
                        else:
                            break
                    q = r - self._pair_simple(beta, i)
                    if q > 0:
                        up = list(beta)
                        up[i] += 1
                        up = tuple(up)
                        if up not in found:
                            found.add(up)
                            nxt.append(up)
            roots.extend(sorted(nxt))
            level = nxt
        return roots

    def _coroot(self, beta: Sequence[int]) -> tuple[int, ...]:
        n = self.rank
        norm = sum(beta[i] * beta[j] * self._inner[i][j] for i in range(n) for j in range(n))
        coeffs = [Fraction(beta[j] * self.symmetrizer[j]) / norm for j in range(n)]
        assert all(c.denominator == 1 for c in coeffs)
        return tuple(int(c) for c in coeffs)

    # -- coordinates ------------------------------------------------------------

    def root_to_weight(self, nu: Sequence) -> Weight:
        """Simple-root coordinates to fundamental-weight coordinates."""
        n = self.rank
        return tuple(sum(self.cartan[i][j] * nu[j] for j in range(n)) for i in range(n))

    def scaled_root(self, lam: Sequence[int]) -> tuple[int, ...]:
        """``det * (root coordinates of lam)``; integral for every weight."""
        lam = tuple(lam)
        s = self._scaled_cache.get(lam)
        if s is None:
            n = self.rank
            s = tuple(sum(self._adj[i][j] * lam[j] for j in range(n)) for i in range(n))
            self._scaled_cache[lam] = s
        return s

    def to_root(self, lam: Sequence[int]) -> RootVector:
        """Exact rational root coordinates of a weight."""
        return tuple(Fraction(x, self.det) for x in self.scaled_root(lam))

    def coset(self, lam: Sequence[int]) -> tuple[int, ...]:
        """Key of the class of ``lam`` in X / ZR."""
        return tuple(x % self.det for x in self.scaled_root(lam))

    def from_scaled(self, s: Sequence[int]) -> Weight:
        w = self.root_to_weight(s)
        return tuple(x // self.det for x in w)

    def depth_below(self, top: Sequence[int], lam: Sequence[int]) -> int | None:
        """height(top - lam) if lam <= top, else None."""
        st, sl = self.scaled_root(top), self.scaled_root(lam)
        total = 0
        d = self.det
        for a, b in zip(st, sl):
            diff = a - b
            if diff < 0 or diff % d:
                return None
            total += diff
        return total // d

    def pair(self, lam: Sequence, beta_index: int):
        """<lam, beta^vee> for the positive root with the given index."""
        return sum(c * x for c, x in zip(self.coroots[beta_index], lam))

    def root_index(self, beta: Sequence[int]) -> int:
        try:
            return self.positive_roots.index(tuple(beta))
        except ValueError:
            raise DomainError(f"{list(beta)} is not a positive root of {self.name}") from None

    def height(self, nu: Sequence) -> int | Fraction:
        return sum(nu)

    def weyl_group(self) -> list["WeylElement"]:
        return enumerate_weyl(self)


@lru_cache(maxsize=None)
def build_root_system(type_label: str, rank: int) -> RootSystem:
    """Root system of the given finite type; cached so instances are shared."""
    return RootSystem(type_label, rank)


def parse_type(text: str) -> tuple[str, int]:
    """Split labels such as ``"A2"`` or ``"b3"`` into (type, rank)."""
    text = text.strip()
    try:
        return text[0].upper(), int(text[1:])
    except (IndexError, ValueError):
        raise DomainError(f"cannot parse root system label {text!r}") from None


# -- weights -------------------------------------------------------------------


def add(lam: Sequence, mu: Sequence) -> Weight:
    return tuple(a + b for a, b in zip(lam, mu))


def sub(lam: Sequence, mu: Sequence) -> Weight:
    return tuple(a - b for a, b in zip(lam, mu))


def scale(k, lam: Sequence) -> Weight:
    return tuple(k * a for a in lam)


def is_dominant(lam: Sequence[int]) -> bool:
    return all(x >= 0 for x in lam)


def is_antidominant(lam: Sequence[int]) -> bool:
    return all(x < 0 for x in lam)


def dominance_leq(rs: RootSystem, lam: Sequence[int], mu: Sequence[int]) -> bool:
    """True iff ``mu - lam`` is a nonnegative integral combination of simple roots."""
    return rs.depth_below(mu, lam) is not None


# -- Weyl group ----------------------------------------------------------------


def simple_reflect(rs: RootSystem, i: int, lam: Sequence) -> Weight:
    x = lam[i]
    return tuple(a - x * b for a, b in zip(lam, rs.simple_roots_w[i]))


def reflect(rs: RootSystem, beta_index: int, lam: Sequence) -> Weight:
    """Linear reflection s_beta."""
    k = rs.pair(lam, beta_index)
    return tuple(a - k * b for a, b in zip(lam, rs.positive_roots_w[beta_index]))


@dataclass(frozen=True)
class WeylElement:
    """Element of W, stored as a word in simple reflections.

    ``word = (i1, ..., ik)`` means ``s_i1 ... s_ik``; equality compares the
    image of rho, which determines the element.
    """

    word: tuple = field(compare=False)
    rho_image: tuple

    def apply(self, rs: RootSystem, lam: Sequence) -> Weight:
        out = tuple(lam)
        for i in reversed(self.word):
            out = simple_reflect(rs, i, out)
        return out

    def inverse(self, rs: RootSystem) -> "WeylElement":
        word = tuple(reversed(self.word))
        img = tuple(rs.rho)
        for i in reversed(word):
            img = simple_reflect(rs, i, img)
        return WeylElement(word, img)

    def length(self, rs: RootSystem) -> int:
        """Number of positive roots sent to negative roots."""
        count = 0
        for bw in rs.positive_roots_w:
            img = self.apply(rs, bw)
            if any(x < 0 for x in rs.scaled_root(img)):
                count += 1
        return count

    def sign(self, rs: RootSystem) -> int:
        return -1 if self.length(rs) % 2 else 1


def identity(rs: RootSystem) -> WeylElement:
    return WeylElement((), tuple(rs.rho))


def weyl_element(rs: RootSystem, word: Iterable[int]) -> WeylElement:
    word = tuple(word)
    img = tuple(rs.rho)
    for i in reversed(word):
        img = simple_reflect(rs, i, img)
    return WeylElement(word, img)


@lru_cache(maxsize=None)
def _weyl_cache(rs: RootSystem) -> tuple:
    start = tuple(rs.rho)
    seen = {start: ()}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for i in range(rs.rank):
            y = simple_reflect(rs, i, x)
            if y not in seen:
                seen[y] = (i,) + seen[x]
                queue.append(y)
    return tuple(WeylElement(word, img) for img, word in seen.items())


def enumerate_weyl(rs: RootSystem) -> list[WeylElement]:
    """All elements of W by BFS on the (free) orbit of rho; words are reduced."""
    return list(_weyl_cache(rs))


def longest_element(rs: RootSystem) -> WeylElement:
    return max(enumerate_weyl(rs), key=lambda w: len(w.word))


def dot_action(rs: RootSystem, w: WeylElement, lam: Sequence) -> Weight:
    """w . lam = w(lam + rho) - rho."""
    return sub(w.apply(rs, add(lam, rs.rho)), rs.rho)


def dot_reflect(rs: RootSystem, beta_index: int, lam: Sequence) -> Weight:
    k = rs.pair(add(lam, rs.rho), beta_index)
    return tuple(a - k * b for a, b in zip(lam, rs.positive_roots_w[beta_index]))


def affine_reflect(rs: RootSystem, beta, m: int, p: int, lam: Sequence) -> Weight:
    """s_{beta, mp} . lam = s_beta . lam + m p beta.

    ``beta`` is either a positive-root index or a root in simple coordinates.
    Works for rational points as well as weights.
    """
    idx = beta if isinstance(beta, int) else rs.root_index(beta)
    if not 0 <= idx < len(rs.positive_roots):
        raise DomainError(f"no positive root with index {idx}")
    k = rs.pair(add(lam, rs.rho), idx) - m * p
    return tuple(a - k * b for a, b in zip(lam, rs.positive_roots_w[idx]))


def weight_to_json(lam: Sequence[int]) -> list[int]:
    return [int(x) for x in lam]


def weight_from_json(obj, rank: int | None = None) -> Weight:
    if isinstance(obj, (int,)) and not isinstance(obj, bool):
        obj = [obj]
    if not isinstance(obj, (list, tuple)) or not all(isinstance(x, int) and not isinstance(x, bool) for x in obj):
        raise DomainError(f"weight must be an integer array, got {obj!r}")
    if rank is not None and len(obj) != rank:
        raise DomainError(f"weight {list(obj)} has length {len(obj)}, expected rank {rank}")
    return tuple(obj)
