"""Regenerate the shipped restricted-character databases in src/charop/data.

Restricted simple characters for these small cases are Weyl characters,
except where the Weyl module has a single extra composition factor.
"""

from __future__ import annotations

import itertools

from charop.database import CharDatabase, fixture_path
from charop.rootdata import build_root_system
from charop.tilting import weyl_coeffs

# (type, rank, p) -> {weight: [(weyl weight, multiplicity), ...], note}
CORRECTIONS = {
    ("A", 2, 3): {(1, 1): ([((1, 1), 1), ((0, 0), -1)], "adjoint of sl3 in char 3: chi(1,1) - chi(0,0), dim 7")},
    ("B", 2, 2): {(1, 0): ([((1, 0), 1), ((0, 0), -1)], "natural so5 in char 2: chi(1,0) - chi(0,0), dim 4")},
}


def build(type_label: str, rank: int, p: int) -> CharDatabase:
    rs = build_root_system(type_label, rank)
    fixes = CORRECTIONS.get((type_label, rank, p), {})
    entries, prov = {}, {}
    for lam in itertools.product(range(p), repeat=rank):
        combo, note = fixes.get(lam, ([(lam, 1)], "Weyl module is simple"))
        coeffs: dict = {}
        for mu, m in combo:
            for k, v in weyl_coeffs(rs, mu).items():
                coeffs[k] = coeffs.get(k, 0) + m * v
        entries[lam] = {k: v for k, v in coeffs.items() if v}
        prov[lam] = note
    neg_rho = tuple(-x for x in rs.rho)
    entries[neg_rho] = "verma"
    prov[neg_rho] = "builtin: L(-rho) = Delta(-rho)"
    return CharDatabase(rs, p, entries, prov)


if __name__ == "__main__":
    for t, n, p in [("A", 2, 2), ("A", 2, 3), ("B", 2, 2)]:
        db = build(t, n, p)
        assert not db.validate(), db.validate()
        path = fixture_path(t, n, p)
        db.save(path)
        print("wrote", path)
