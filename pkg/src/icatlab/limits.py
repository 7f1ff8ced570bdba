"""Finite limits and colimits of simplicial sets.

Limits are built degreewise from compatible tuples; a tuple's id is the tuple of
its (reduced) components, so projections are read off the id.  Colimits are
degreewise quotients (union-find), then re-normalized.
"""
from __future__ import annotations

from typing import Sequence

from .simplicial import (FinSSet, SMap, Simplex, TruncationError, identity, skey)


class UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller key wins so roots are deterministic
            if skey(rb) < skey(ra):
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def tuple_simplex(components: Sequence[Simplex]) -> Simplex:
    """EZ form of a compatible tuple of simplices, as a simplex of the limit."""
    n = len(components[0].sigma) - 1
    common = [j for j in range(n) if all(c.sigma[j] == c.sigma[j + 1] for c in components)]
    if not common:
        return Simplex(tuple(components), identity(n))
    js = set(common)
    tau, level = [0], 0
    for i in range(n):
        if i not in js:
            level += 1
        tau.append(level)
    first = {}
    for p, v in enumerate(tau):
        first.setdefault(v, p)
    section = [first[v] for v in range(level + 1)]
    reduced = tuple(Simplex(c.base, tuple(c.sigma[p] for p in section)) for c in components)
    return Simplex(reduced, tuple(tau))


def _check_dims(spaces) -> int:
    dims = {x.trunc_dim for x in spaces}
    if len(dims) != 1:
        raise TruncationError(f"truncation mismatch: {sorted(dims)}")
    return dims.pop()


def limit(spaces: Sequence[FinSSet], constraints: Sequence[tuple] = ()) -> tuple[FinSSet, list]:
    """Limit of a finite diagram given as equalizing constraints.

    ``constraints`` holds ``(i, f, j, g)`` meaning ``f(x_i) == g(x_j)`` with
    ``i < j``; ``f``/``g`` may be ``None`` for the identity.  Returns the limit and
    the projection maps.
    """
    D = _check_dims(spaces)
    by_pos: dict = {}
    for i, f, j, g in constraints:
        if i >= j:
            i, f, j, g = j, g, i, f
        by_pos.setdefault(j, []).append((i, f, g))
    k = len(spaces)

    def ap(h, x):
        return x if h is None else h(x)

    def cells(n):
        cands = [sp.simplices(n) for sp in spaces]
        index = {}
        for j, cons in by_pos.items():
            _, _, g = cons[0]
            idx: dict = {}
            for y in cands[j]:
                idx.setdefault(ap(g, y), []).append(y)
            index[j] = idx
        out = []
        cur: list = []

        def rec(p):
            if p == k:
                out.append(tuple(cur))
                return
            cons = by_pos.get(p)
            if cons:
                i0, f0, _ = cons[0]
                pool = index[p].get(ap(f0, cur[i0]), ())
            else:
                pool = cands[p]
            for y in pool:
                if cons and any(ap(f, cur[i]) != ap(g, y) for i, f, g in cons[1:]):
                    continue
                cur.append(y)
                rec(p + 1)
                cur.pop()
        rec(0)
        return out

    def face(n, c, i):
        return tuple(sp.face(x, i) for sp, x in zip(spaces, c))

    def degen(n, c, j):
        return tuple(sp.degen(x, j) for sp, x in zip(spaces, c))

    cosk = [sp.coskeletal_above for sp in spaces]
    cosk = max(cosk) if all(c is not None for c in cosk) else None
    L, _ = FinSSet.from_full(D, cells, face, degen, coskeletal_above=cosk)
    projections = [SMap(L, sp, {b: b[i] for b in L.dim_of}) for i, sp in enumerate(spaces)]
    return L, projections


def product(*spaces: FinSSet) -> tuple[FinSSet, list]:
    return limit(spaces, [])


def fiber_product(f: SMap, g: SMap) -> tuple[FinSSet, SMap, SMap]:
    """``A x_Z B`` for ``f: A -> Z`` and ``g: B -> Z``."""
    L, (p, q) = limit([f.source, g.source], [(0, f, 1, g)])
    return L, p, q


def fiber_power(x1: FinSSet, tgt: SMap, src: SMap, n: int) -> tuple[FinSSet, list]:
    """Chains ``(a_1, ..., a_n)`` in ``x1`` with ``tgt(a_i) == src(a_{i+1})``."""
    return limit([x1] * n, [(i, tgt, i + 1, src) for i in range(n - 1)])


def limit_map(target_limit: FinSSet, maps: Sequence[SMap]) -> SMap:
    """Induced map into a tuple-id limit from a cone ``maps``."""
    src = maps[0].source
    return SMap(src, target_limit, {b: tuple_simplex([m(src.point(b)) for m in maps]) for b in src.dim_of})


def product_map(fs: Sequence[SMap], source: FinSSet, target: FinSSet) -> SMap:
    """``f_1 x ... x f_k`` between tuple-id limits."""
    return SMap(source, target, {b: tuple_simplex([f(c) for f, c in zip(fs, b)]) for b in source.dim_of})


# --- colimits ----------------------------------------------------------------------

def colimit(objects: Sequence[FinSSet], relations: Sequence[tuple] = ()) -> "ColimitResult":
    """Colimit of objects glued along ``(f, i, g, j)``: ``f(w) ~ g(w)`` for ``w`` in a common domain."""
    D = _check_dims(objects) if objects else 0
    for f, i, g, j in relations:
        if f.source.trunc_dim != g.source.trunc_dim:
            raise TruncationError("relation legs have different domains")
    keyof: dict = {}
    members: dict = {}

    def level(n):
        uf = UnionFind()
        for i, ob in enumerate(objects):
            for x in ob.simplices(n):
                uf.add((i, x))
        for f, i, g, j in relations:
            for w in f.source.simplices(n):
                uf.union((i, f(w)), (j, g(w)))
        for root, mem in uf.classes().items():
            key = min(mem, key=skey)
            for m in mem:
                keyof[(n, m)] = key
            members[(n, key)] = mem
        return sorted({keyof[(n, m)] for m in uf.parent}, key=skey)

    def face(n, c, i):
        j, x = c
        return keyof[(n - 1, (j, objects[j].face(x, i)))]

    def degen(n, c, jj):
        j, x = c
        return keyof[(n + 1, (j, objects[j].degen(x, jj)))]

    def label(c):
        n = len(c[1].sigma) - 1
        nd = [(i, x.base) for i, x in members[(n, c)] if x.nondegenerate]
        return min(nd, key=skey)

    # degeneracies look one level up, so every level is keyed first
    levels = {n: level(n) for n in range(D + 1)}
    space, ez = FinSSet.from_full(D, levels.__getitem__, face, degen, label=label)
    reps = {}
    for (n, key), mem in members.items():
        e = ez[(n, key)]
        if e.nondegenerate:
            reps[e.base] = min(((i, x) for i, x in mem if x.nondegenerate), key=skey)
    injections = [SMap(ob, space, {b: ez[(ob.dim_of[b], keyof[(ob.dim_of[b], (i, ob.point(b)))])]
                                   for b in ob.dim_of})
                  for i, ob in enumerate(objects)]
    return ColimitResult(space, injections, reps)


class ColimitResult:
    def __init__(self, space: FinSSet, injections: list, reps: dict):
        self.space = space
        self.injections = injections
        self.reps = reps

    def induced(self, cocone: Sequence[SMap], target: FinSSet) -> SMap:
        """Map out of the colimit determined by a cocone ``cocone[i]: objects[i] -> target``."""
        return SMap(self.space, target, {b: cocone[i](x) for b, (i, x) in self.reps.items()})


def pushout(f: SMap, g: SMap) -> ColimitResult:
    """Pushout of ``f: W -> A`` and ``g: W -> B``; objects ordered ``(A, B)``."""
    return colimit([f.target, g.target], [(f, 0, g, 1)])


def coproduct(*spaces: FinSSet) -> ColimitResult:
    return colimit(list(spaces), [])


def coequalizer(f: SMap, g: SMap) -> ColimitResult:
    return colimit([f.target], [(f, 0, g, 0)])


# --- components -----------------------------------------------------------------------

def pi0(x: FinSSet) -> tuple[list, dict]:
    """Connected components: sorted list of component ids and vertex -> component id."""
    if x.trunc_dim < 1:
        raise TruncationError("pi0 needs 1-simplices (trunc_dim >= 1)")
    uf = UnionFind()
    for v in x.nondeg[0]:
        uf.add(v)
    for e in x.nondeg[1]:
        a, b = x.faces[e]
        uf.union(a.base, b.base)
    comp = {v: uf.find(v) for v in x.nondeg[0]}
    return sorted(set(comp.values()), key=skey), comp


def components(x: FinSSet) -> list[FinSSet]:
    """Each connected component as a subobject, ordered by component id."""
    ids, comp = pi0(x)
    groups = {c: [] for c in ids}
    for b in x.dim_of:
        v = x.vertices(x.point(b))[0]
        groups[comp[v]].append(b)
    return [x.sub(groups[c]) for c in ids]


def component_of_vertex(x: FinSSet) -> dict:
    return pi0(x)[1]
