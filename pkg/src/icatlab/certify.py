"""Tiered, machine-checkable evidence that two finite simplicial sets are equivalent.

ISO and STRONG are proofs.  HOMOLOGICAL(n) only records necessary conditions
(matching pi0 and componentwise integral homology up to degree n).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .homology import homology
from .limits import components, pi0, product, tuple_simplex
from .simplicial import (FinSSet, SMap, Simplex, TruncationError, compose, expr_str, id_str, skey,
                         standard_simplex)

ISO, STRONG, HOMOLOGICAL, FAILED, UNKNOWN = "ISO", "STRONG", "HOMOLOGICAL", "FAILED", "UNKNOWN"


@dataclass
class Certificate:
    tier: str
    degree: int | None = None
    witness: dict = field(default_factory=dict)
    note: str = ""
    maps: Any = None

    @property
    def ok(self) -> bool:
        return self.tier in (ISO, STRONG, HOMOLOGICAL)

    @property
    def proof(self) -> bool:
        return self.tier in (ISO, STRONG)

    @property
    def label(self) -> str:
        return f"{self.tier}({self.degree})" if self.tier == HOMOLOGICAL else self.tier

    def to_json(self) -> dict:
        out = {"tier": self.label, "witness": self.witness}
        if self.tier == HOMOLOGICAL:
            out["necessary_conditions_only"] = True
        if self.note:
            out["note"] = self.note
        return out


class BudgetExceeded(Exception):
    pass


def _map_json(f: SMap) -> dict:
    return {id_str(b): expr_str(y) for b, y in sorted(f.assignment.items(), key=lambda kv: skey(kv[0]))}


def _vertex_signature(X: FinSSet) -> dict:
    sig = {v: [0] * (X.trunc_dim + 1) for v in X.nondeg[0]}
    for d in range(1, X.trunc_dim + 1):
        for b in X.nondeg[d]:
            for v in set(X.vertices(X.point(b))):
                sig[v][d] += 1
    return {v: tuple(s) for v, s in sig.items()}


def find_iso(X: FinSSet, Y: FinSSet, budget: int = 10**6) -> SMap | None:
    """An isomorphism ``X -> Y`` or ``None``; raises BudgetExceeded past ``budget`` candidates."""
    if X.trunc_dim != Y.trunc_dim:
        raise TruncationError("truncation mismatch")
    if any(len(X.nondeg[d]) != len(Y.nondeg[d]) for d in range(X.trunc_dim + 1)):
        return None
    sx, sy = _vertex_signature(X), _vertex_signature(Y)
    if sorted(sx.values()) != sorted(sy.values()):
        return None
    # each vertex is followed by every simplex whose faces are then all placed
    order, placed = [], set()
    pending = [b for d in range(1, X.trunc_dim + 1) for b in X.nondeg[d]]
    for v in X.nondeg[0]:
        order.append(v)
        placed.add(v)
        progress = True
        while progress:
            progress = False
            rest = []
            for b in pending:
                if all(f.base in placed for f in X.faces[b]):
                    order.append(b)
                    placed.add(b)
                    progress = True
                else:
                    rest.append(b)
            pending = rest
    assign: dict = {}
    used: set = set()
    spent = [0]

    def image(f: Simplex) -> Simplex:
        y = assign[f.base]
        return Simplex(y.base, compose(y.sigma, f.sigma))

    def rec(k: int) -> bool:
        if k == len(order):
            return True
        b = order[k]
        d = X.dim_of[b]
        if d == 0:
            cands = [Y.point(w) for w in Y.nondeg[0] if sy[w] == sx[b]]
        else:
            cands = Y.face_index(d).get(tuple(image(f) for f in X.faces[b]), ())
        for y in cands:
            if not y.nondegenerate or y.base in used:
                continue
            spent[0] += 1
            if spent[0] > budget:
                raise BudgetExceeded()
            assign[b] = y
            used.add(y.base)
            if rec(k + 1):
                return True
            del assign[b]
            used.discard(y.base)
        return False

    return SMap(X, Y, dict(assign)) if rec(0) else None


def homotopy_endpoints(h: SMap, X: FinSSet) -> tuple[SMap, SMap]:
    """Restrictions of ``h: X x Delta[1] -> Z`` to the two ends."""
    ends = []
    for e in (0, 1):
        ends.append(SMap(X, h.target, {
            b: h(tuple_simplex([X.point(b), Simplex((e,), (0,) * (X.dim_of[b] + 1))])) for b in X.dim_of}))
    return ends[0], ends[1]


def check_homotopy(h: SMap, X: FinSSet, a: SMap, b: SMap) -> bool:
    """``h`` is a simplicial homotopy between ``a`` and ``b`` (either direction)."""
    if not h.check().ok:
        return False
    e0, e1 = homotopy_endpoints(h, X)
    return (e0 == a and e1 == b) or (e0 == b and e1 == a)


def cylinder(X: FinSSet) -> FinSSet:
    return product(X, standard_simplex(1, X.trunc_dim))[0]


def _component_data(X: FinSSet, n: int):
    if X.is_empty():
        return [], {}, []
    ids, comp = pi0(X)
    subs = components(X)
    return ids, comp, [tuple(homology(c, n)) for c in subs]


def homological(X: FinSSet, Y: FinSSet, n: int, f: SMap | None = None) -> Certificate:
    if n > X.trunc_dim - 1 or n > Y.trunc_dim - 1:
        raise TruncationError(f"homology bound {n} needs trunc_dim >= {n + 1}")
    xi, xc, xh = _component_data(X, n)
    yi, yc, yh = _component_data(Y, n)
    if len(xi) != len(yi):
        return Certificate(FAILED, witness={"obstruction": "pi0", "source": len(xi), "target": len(yi)},
                           note=f"pi0 {len(xi)} vs {len(yi)}")
    if f is not None:
        fmap = {}
        for v in X.nondeg[0]:
            fmap.setdefault(xc[v], set()).add(yc[f(X.point(v)).base])
        images = [fmap[c] for c in xi]
        if any(len(s) != 1 for s in images) or len({next(iter(s)) for s in images}) != len(yi):
            return Certificate(FAILED, witness={"obstruction": "pi0-map", "source": len(xi), "target": len(yi)},
                               note="induced map on pi0 is not a bijection")
        pairs = [(xh[k], yh[yi.index(next(iter(images[k])))]) for k in range(len(xi))]
    else:
        pairs = list(zip(sorted(xh, key=str), sorted(yh, key=str)))
    for k, (hx, hy) in enumerate(pairs):
        for i in range(n + 1):
            if hx[i] != hy[i]:
                return Certificate(FAILED, witness={"obstruction": f"H_{i}", "component": k,
                                                    "source": hx[i].to_json(), "target": hy[i].to_json()},
                                   note=f"H_{i} {hx[i]} vs {hy[i]}")
    return Certificate(HOMOLOGICAL, degree=n, witness={
        "pi0": len(xi),
        "homology": [[g.to_json() for g in hx] for hx, _ in pairs]},
        note="necessary conditions only")


def certify_equivalence(X: FinSSet, Y: FinSSet, mode: str = "auto", homology_bound: int = 1,
                        map: SMap | None = None, strong: dict | None = None,
                        budget: int = 10**6) -> Certificate:
    """Try ISO, then STRONG (if ``strong`` is supplied), then HOMOLOGICAL(n).

    ``map`` restricts the ISO tier to that single map.  ``strong`` holds
    ``f``, ``g``, ``hx`` (``X x Delta[1] -> X``) and ``hy``.
    """
    note = ""
    if map is not None:
        if not map.check().ok:
            raise ValueError("supplied map is not simplicial")
        if map.is_iso():
            return Certificate(ISO, witness={"map": _map_json(map), "inverse": _map_json(map.inverse())},
                               maps=(map, map.inverse()))
        if mode == "iso":
            return Certificate(FAILED, witness={"obstruction": "map-not-iso"}, note="supplied map is not an isomorphism")
    else:
        try:
            iso = find_iso(X, Y, budget)
        except BudgetExceeded:
            iso = None
            note = f"iso search budget {budget} exhausted"
            if mode == "iso":
                return Certificate(UNKNOWN, note=note)
        else:
            if iso is not None:
                return Certificate(ISO, witness={"map": _map_json(iso), "inverse": _map_json(iso.inverse())},
                                   maps=(iso, iso.inverse()))
            if mode == "iso":
                return Certificate(FAILED, witness={"obstruction": "no-isomorphism"}, note="exhaustive search")
    if strong is not None:
        f, g, hx, hy = strong["f"], strong["g"], strong["hx"], strong["hy"]
        if (f.check().ok and g.check().ok
                and check_homotopy(hx, X, f.then(g), SMap.identity(X))
                and check_homotopy(hy, Y, g.then(f), SMap.identity(Y))):
            return Certificate(STRONG, witness={"f": _map_json(f), "g": _map_json(g)}, maps=(f, g))
        note = (note + "; " if note else "") + "supplied homotopy data did not verify"
    cert = homological(X, Y, homology_bound, map)
    if note:
        cert.note = note + "; " + cert.note if cert.note else note
    return cert
