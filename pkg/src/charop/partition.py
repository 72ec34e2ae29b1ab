"""Kostant partition function with a shared, lock-protected memo."""

from __future__ import annotations

import json
import logging
import os
import threading
from pathlib import Path
from typing import Sequence

from .rootdata import RootSystem

log = logging.getLogger(__name__)

CACHE_ENV = "CHAROP_CACHE_DIR"
CACHE_VERSION = 1

_tables: dict[str, "PartitionTable"] = {}
_tables_lock = threading.Lock()


def simplex(n: int, depth: int) -> list[tuple[int, ...]]:
    """Nonnegative integer n-vectors with coordinate sum <= depth, by height."""
    if depth < 0:
        return []
    out: list[tuple[int, ...]] = []

    def rec(prefix, left, k):
        if k == 1:
            for x in range(left + 1):
                out.append(prefix + (x,))
            return
        for x in range(left + 1):
            rec(prefix + (x,), left - x, k - 1)

    rec((), depth, n)
    out.sort(key=sum)
    return out


_simplex_cache: dict[tuple[int, int], list] = {}


def cached_simplex(n: int, depth: int) -> list[tuple[int, ...]]:
    key = (n, depth)
    s = _simplex_cache.get(key)
    if s is None:
        s = simplex(n, depth)
        _simplex_cache[key] = s
    return s


class PartitionTable:
    """Memo ``nu -> P(nu)`` for one root system.

    Filled either one value at a time (DP over the box below ``nu``) or for
    every ``nu`` up to a height bound (DP over the simplex).  All writes go
    through a lock so a single table can back concurrent evaluators.
    """

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.memo: dict[tuple[int, ...], int] = {tuple([0] * rs.rank): 1}
        self.complete_depth = 0
        self._lock = threading.Lock()
        self._weighted: dict[int, list] = {}

    def value(self, nu: Sequence[int]) -> int:
        nu = tuple(nu)
        if any(x < 0 for x in nu):
            return 0
        hit = self.memo.get(nu)
        if hit is not None:
            return hit
        self._fill_box(nu)
        return self.memo[nu]

    def _fill_box(self, top: tuple[int, ...]) -> None:
        # coin-change DP over the box [0, top]
        n = self.rs.rank
        points = [()]
        for t in top:
            points = [p + (x,) for p in points for x in range(t + 1)]
        points.sort(key=sum)
        table = {pt: 0 for pt in points}
        table[tuple([0] * n)] = 1
        for beta in self.rs.positive_roots:
            for pt in points:
                prev = tuple(a - b for a, b in zip(pt, beta))
                v = table.get(prev)
                if v:
                    table[pt] += v
        with self._lock:
            self.memo.update(table)

    def table(self, depth: int) -> list[tuple[tuple[int, ...], int]]:
        """All ``(nu, P(nu))`` with height(nu) <= depth, sorted by height."""
        if depth > self.complete_depth:
            pts = cached_simplex(self.rs.rank, depth)
            table = {pt: 0 for pt in pts}
            table[tuple([0] * self.rs.rank)] = 1
            for beta in self.rs.positive_roots:
                for pt in pts:
                    prev = tuple(a - b for a, b in zip(pt, beta))
                    v = table.get(prev)
                    if v:
                        table[pt] += v
            with self._lock:
                self.memo.update(table)
                self.complete_depth = depth
        return [(pt, self.memo[pt]) for pt in cached_simplex(self.rs.rank, depth)]

    def weighted_table(self, depth: int) -> list[tuple[tuple[int, ...], int, int]]:
        """Like :meth:`table` but as ``(nu in weight coords, height, P(nu))``."""
        hit = self._weighted.get(depth)
        if hit is None:
            rs = self.rs
            hit = [(rs.root_to_weight(nu), sum(nu), v) for nu, v in self.table(depth)]
            with self._lock:
                self._weighted[depth] = hit
        return hit

    # -- persistence -------------------------------------------------------------

    def cache_path(self, directory) -> Path:
        return Path(directory) / f"partition_{self.rs.name}.json"

    def save(self, directory) -> Path:
        path = self.cache_path(directory)
        path.parent.mkdir(parents=True, exist_ok=True)
        with self._lock:
            payload = {
                "version": CACHE_VERSION,
                "type": self.rs.type_label,
                "rank": self.rs.rank,
                "complete_depth": self.complete_depth,
                "table": [[list(k), str(v)] for k, v in self.memo.items()],
            }
        path.write_text(json.dumps(payload))
        return path

    def load(self, directory) -> bool:
        path = self.cache_path(directory)
        if not path.exists():
            return False
        try:
            payload = json.loads(path.read_text())
        except (OSError, ValueError) as exc:
            log.warning("ignoring unreadable partition cache %s: %s", path, exc)
            return False
        if (payload.get("version") != CACHE_VERSION or payload.get("type") != self.rs.type_label
                or payload.get("rank") != self.rs.rank):
            log.warning("ignoring partition cache %s with mismatched header", path)
            return False
        with self._lock:
            for k, v in payload["table"]:
                self.memo[tuple(k)] = int(v)
            self.complete_depth = max(self.complete_depth, int(payload.get("complete_depth", 0)))
        return True


def partition_table(rs: RootSystem) -> PartitionTable:
    """The process-wide table for ``rs`` (loaded from CHAROP_CACHE_DIR if set)."""
    with _tables_lock:
        tab = _tables.get(rs.name)
        if tab is None:
            tab = PartitionTable(rs)
            cache_dir = os.environ.get(CACHE_ENV)
            if cache_dir:
                tab.load(cache_dir)
            _tables[rs.name] = tab
        return tab


def save_partition_tables() -> list[Path]:
    cache_dir = os.environ.get(CACHE_ENV)
    if not cache_dir:
        return []
    with _tables_lock:
        tables = list(_tables.values())
    return [t.save(cache_dir) for t in tables]


def kostant_partition(rs: RootSystem, nu: Sequence[int]) -> int:
    """Number of ways to write ``nu`` (simple-root coords) as a sum of positive roots."""
    return partition_table(rs).value(nu)
