"""Persisted tables of simple (or tilting) characters indexed by highest weight."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Mapping

from .charexpr import Basis, CharExpr, DBChar, Evaluator, Finite, Verma, Window
from .errors import DomainError, MissingEntryError
from .rootdata import RootSystem, build_root_system, weight_from_json, weight_to_json

BUILTINS = ("verma", "basis")


def _builtin(name: str, weight) -> CharExpr:
    if name == "verma":
        return Verma(weight)
    if name == "basis":
        return Basis(weight)
    raise DomainError(f"unknown builtin character tag {name!r}")


class CharDatabase:
    """Immutable map weight -> character expression, with provenance notes.

    ``kind`` is ``"simple"`` for simple characters and ``"tilting"`` for
    tilting characters; the JSON layout is the same for both.
    """

    def __init__(self, rs: RootSystem, p: int, entries: Mapping, provenance: Mapping | None = None,
                 kind: str = "simple"):
        self.rs = rs
        self.p = int(p)
        self.kind = kind
        self._raw: dict = {}
        self._entries: dict = {}
        self.provenance: dict = {}
        provenance = provenance or {}
        for w, value in entries.items():
            w = tuple(w)
            if len(w) != rs.rank:
                raise DomainError(f"database weight {list(w)} does not have rank {rs.rank}")
            self._raw[w] = value
            prov = provenance.get(w, "")
            self.provenance[w] = prov
            if isinstance(value, str):
                expr = _builtin(value, w)
            elif isinstance(value, CharExpr):
                expr = value
            else:
                expr = Finite(value, label=f"ch{list(w)}")
            self._entries[w] = DBChar(w, expr, prov)

    def __contains__(self, weight) -> bool:
        return tuple(weight) in self._entries

    def __len__(self):
        return len(self._entries)

    def weights(self) -> list:
        return sorted(self._entries)

    def get(self, weight) -> CharExpr:
        w = tuple(weight)
        try:
            return self._entries[w]
        except KeyError:
            what = "tilting database" if self.kind == "tilting" else "character database"
            raise MissingEntryError(w, what) from None

    def finite_coeffs(self, weight) -> dict:
        """Explicit coefficients of a finitely supported entry."""
        raw = self._raw.get(tuple(weight))
        if raw is None:
            self.get(weight)
        if isinstance(raw, (str, CharExpr)):
            raise DomainError(f"entry {list(weight)} is not given by explicit coefficients")
        return dict(raw)

    # -- JSON ---------------------------------------------------------------------

    def to_json(self) -> dict:
        out = {"type": self.rs.type_label, "rank": self.rs.rank, "p": self.p}
        if self.kind != "simple":
            out["kind"] = self.kind
        entries = []
        for w in self.weights():
            raw = self._raw[w]
            item = {"weight": weight_to_json(w)}
            if isinstance(raw, str):
                item["builtin"] = raw
            elif isinstance(raw, CharExpr):
                raise DomainError(f"entry {list(w)} is an expression and cannot be serialized")
            else:
                rs = self.rs
                pairs = sorted(raw.items(), key=lambda kv: (-sum(rs.scaled_root(kv[0])), kv[0]))
                item["char"] = [[weight_to_json(k), str(v)] for k, v in pairs if v]
            if self.provenance.get(w):
                item["provenance"] = self.provenance[w]
            entries.append(item)
        out["entries"] = entries
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "CharDatabase":
        try:
            rs = build_root_system(str(obj["type"]), int(obj["rank"]))
            p = int(obj["p"])
            raw_entries = obj["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed database header: {exc}") from None
        entries, prov = {}, {}
        for item in raw_entries:
            w = weight_from_json(item.get("weight"), rs.rank)
            if w in entries:
                raise DomainError(f"duplicate database entry for weight {list(w)}")
            if "builtin" in item:
                entries[w] = str(item["builtin"])
                _builtin(entries[w], w)
            elif "char" in item:
                coeffs = {}
                for pair in item["char"]:
                    k, v = pair
                    coeffs[weight_from_json(k, rs.rank)] = int(v)
                entries[w] = coeffs
            else:
                raise DomainError(f"database entry {list(w)} has neither 'char' nor 'builtin'")
            prov[w] = str(item.get("provenance", ""))
        return cls(rs, p, entries, prov, kind=str(obj.get("kind", "simple")))

    @classmethod
    def load(cls, path) -> "CharDatabase":
        try:
            obj = json.loads(Path(path).read_text())
        except OSError as exc:
            raise DomainError(f"cannot read database {path}: {exc}") from None
        except ValueError as exc:
            raise DomainError(f"database {path} is not valid JSON: {exc}") from None
        return cls.from_json(obj)

    def save(self, path) -> None:
        obj = self.to_json()
        entries = obj.pop("entries")
        head = json.dumps(obj)[:-1]
        body = ",\n  ".join(json.dumps(e) for e in entries)
        Path(path).write_text(f'{head}, "entries": [\n  {body}\n]}}\n')

    # -- validation ---------------------------------------------------------------

    def validate(self, depth: int = 20) -> list[str]:
        """Problems found in the entries; an empty list means the database is sound.

        Every entry must have its weight as unique highest weight with
        coefficient 1.  Finite entries of a tilting database must also be
        W-symmetric.
        """
        from .rootdata import enumerate_weyl

        problems = []
        rs = self.rs
        ev = Evaluator(rs)
        for w in self.weights():
            expr = self._entries[w]
            ceil = ev.ceilings(expr)
            if list(ceil.values()) != [w]:
                problems.append(f"{list(w)}: support is not bounded by the entry weight")
                continue
            vals = ev.evaluate(expr, Window(rs, (w,), depth))
            if vals[w] != 1:
                problems.append(f"{list(w)}: highest weight coefficient is {vals[w]}, not 1")
            raw = self._raw[w]
            if self.kind == "tilting" and isinstance(raw, dict):
                for lam, c in raw.items():
                    for g in enumerate_weyl(rs):
                        if raw.get(g.apply(rs, lam), 0) != c:
                            problems.append(f"{list(w)}: not W-symmetric at {list(lam)}")
                            break
                    else:
                        continue
                    break
        return problems


def sl2_chi(m: int) -> dict:
    """Weyl character of sl2 with highest weight m >= 0."""
    return {(m - 2 * i,): 1 for i in range(m + 1)}


def sl2_database(p: int) -> CharDatabase:
    """Restricted simple characters of sl2: L(m) = chi(m) for 0 <= m < p."""
    rs = build_root_system("A", 1)
    entries = {(m,): sl2_chi(m) for m in range(p)}
    prov = {(m,): "classical sl2: restricted simple = Weyl module" for m in range(p)}
    entries[(-1,)] = "verma"
    prov[(-1,)] = "builtin: L(-rho) = Delta(-rho)"
    return CharDatabase(rs, p, entries, prov)


def fixture_path(type_label: str, rank: int, p: int, kind: str = "simple") -> Path:
    suffix = "" if kind == "simple" else f"_{kind}"
    return Path(str(resources.files("charop") / "data" / f"{type_label.upper()}{rank}_p{p}{suffix}.json"))


def load_fixture(type_label: str, rank: int, p: int) -> CharDatabase:
    """Shipped restricted-character database for a small type and prime."""
    if type_label.upper() == "A" and rank == 1:
        return sl2_database(p)
    path = fixture_path(type_label, rank, p)
    if not path.exists():
        raise DomainError(f"no shipped character database for {type_label.upper()}{rank} with p={p}")
    return CharDatabase.load(path)
