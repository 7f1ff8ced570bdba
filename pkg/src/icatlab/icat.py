"""Internal categories in finite simplicial sets, their maps, nerves and mapping spaces."""
from __future__ import annotations

from typing import Callable, Iterator

from .categories import FinCat
from .kan import kan_fibration_probe, kan_probe
from .limits import fiber_power, fiber_product, tuple_simplex
from .simplicial import (FinSSet, SMap, Simplex, TruncationError, ValidationReport, codegeneracy, coface, compose,
                         enumerate_smaps, id_str, skey, standard_simplex)
from .sspace import SimpSpace, SSMap, homotopy_cartesian_probe, segal_square


class InternalCat:
    """``s, t: ar -> ob``, ``e: ob -> ar``, ``m: ar x_ob ar -> ar`` (pairs ``(a, b)``: a then b)."""

    def __init__(self, ob: FinSSet, ar: FinSSet, s: SMap, t: SMap, e: SMap, m: SMap, ar2: FinSSet):
        self.ob, self.ar, self.s, self.t, self.e, self.m, self.ar2 = ob, ar, s, t, e, m, ar2
        self._levels: dict = {}
        self.meta: dict = {}

    def __repr__(self) -> str:
        return f"InternalCat(ob={self.ob!r}, ar={self.ar!r})"

    @property
    def D(self) -> int:
        return self.ob.trunc_dim

    def comp(self, a: Simplex, b: Simplex) -> Simplex:
        return self.m(tuple_simplex([a, b]))

    def level(self, k: int) -> FinCat:
        """The ordinary category in inner degree ``k``."""
        hit = self._levels.get(k)
        if hit is None:
            obs = self.ob.simplices(k)
            ars = self.ar.simplices(k)
            src = {a: self.s(a) for a in ars}
            tgt = {a: self.t(a) for a in ars}
            by_src: dict = {}
            for a in ars:
                by_src.setdefault(src[a], []).append(a)
            comp = {(a, b): self.comp(a, b) for a in ars for b in by_src.get(tgt[a], ())}
            hit = self._levels[k] = FinCat(obs, ars, src, tgt, {x: self.e(x) for x in obs}, comp)
        return hit

    # constructors
    @classmethod
    def from_levels(cls, D: int, cat_at: Callable[[int], FinCat],
                    ob_face, ob_degen, ar_face, ar_degen,
                    ob_label=None, ar_label=None) -> "InternalCat":
        """Assemble from degreewise categories and face/degeneracy functors on cells."""
        cats = {k: cat_at(k) for k in range(D + 1)}
        ob, ez_ob = FinSSet.from_full(D, lambda k: cats[k].objects, ob_face, ob_degen, label=ob_label)
        ar, ez_ar = FinSSet.from_full(D, lambda k: cats[k].arrows, ar_face, ar_degen, label=ar_label)
        cell_ob = {(k, e): c for (k, c), e in ez_ob.items()}
        cell_ar = {(k, e): c for (k, c), e in ez_ar.items()}
        s, t, e = {}, {}, {}
        for b, k in ar.dim_of.items():
            a = cell_ar[(k, ar.point(b))]
            s[b] = ez_ob[(k, cats[k].src[a])]
            t[b] = ez_ob[(k, cats[k].tgt[a])]
        for b, k in ob.dim_of.items():
            e[b] = ez_ar[(k, cats[k].ident[cell_ob[(k, ob.point(b))]])]
        S, T = SMap(ar, ob, s), SMap(ar, ob, t)
        ar2, _, _ = fiber_product(T, S)
        m = {}
        for p, k in ar2.dim_of.items():
            a, b = p
            m[p] = ez_ar[(k, cats[k].comp[(cell_ar[(k, a)], cell_ar[(k, b)])])]
        C = cls(ob, ar, S, T, SMap(ob, ar, e), SMap(ar2, ar, m), ar2)
        C.meta["cells"] = (ez_ob, ez_ar)
        return C

    @classmethod
    def from_category(cls, cat: FinCat, D: int) -> "InternalCat":
        """An ordinary category as an internal category with discrete spaces."""
        same = lambda k, x, i: x
        return cls.from_levels(D, lambda k: cat, same, same, same, same)

    @classmethod
    def discrete(cls, K: FinSSet) -> "InternalCat":
        """Discrete internal category on ``K`` (s = t = e = id)."""
        def cat(k):
            return FinCat.discrete(K.simplices(k))
        base = lambda c: c.base
        return cls.from_levels(K.trunc_dim, cat, lambda k, x, i: K.face(x, i), lambda k, x, j: K.degen(x, j),
                               lambda k, x, i: K.face(x, i), lambda k, x, j: K.degen(x, j), base, base)


def empty_icat(D: int) -> InternalCat:
    return InternalCat.discrete(FinSSet.empty(D))


def tensor(K: FinSSet, cat: FinCat) -> InternalCat:
    """``K x A`` for an ordinary category ``A``: objects ``K x Ob(A)``, arrows ``K x Ar(A)``."""
    def level(k):
        return FinCat.discrete(K.simplices(k)).product(cat)

    def face(k, c, i):
        return (K.face(c[0], i), c[1])

    def degen(k, c, j):
        return (K.degen(c[0], j), c[1])

    lab = lambda c: (c[0].base, c[1])
    return InternalCat.from_levels(K.trunc_dim, level, face, degen, face, degen, ob_label=lab, ar_label=lab)


def level_cells(C: InternalCat, k: int) -> FinCat:
    return C.level(k)


def icat_product(C: InternalCat, D: InternalCat) -> InternalCat:
    if C.D != D.D:
        raise TruncationError("truncation mismatch")

    def level(k):
        return C.level(k).product(D.level(k))

    def ob_face(k, c, i):
        return (C.ob.face(c[0], i), D.ob.face(c[1], i))

    def ob_degen(k, c, j):
        return (C.ob.degen(c[0], j), D.ob.degen(c[1], j))

    def ar_face(k, c, i):
        return (C.ar.face(c[0], i), D.ar.face(c[1], i))

    def ar_degen(k, c, j):
        return (C.ar.degen(c[0], j), D.ar.degen(c[1], j))
    return InternalCat.from_levels(C.D, level, ob_face, ob_degen, ar_face, ar_degen)


def times_simplex(C: InternalCat, n: int) -> InternalCat:
    """``C x Delta[n]`` (Delta[n] as a discrete internal category)."""
    return icat_product(C, InternalCat.discrete(standard_simplex(n, C.D)))


# --- validation ------------------------------------------------------------------------

def validate_icat(C: InternalCat) -> ValidationReport:
    rep = ValidationReport()
    for name, f in (("s", C.s), ("t", C.t), ("e", C.e), ("m", C.m)):
        r = f.check()
        for v in r.violations:
            rep.add(f"{name}-not-simplicial", detail=v)
    if not rep.ok:
        return rep
    for x in C.ob.dim_of:
        p = C.ob.point(x)
        if C.s(C.e(p)) != p or C.t(C.e(p)) != p:
            rep.add("unit-endpoints", simplex=id_str(x))
    for pr in C.ar2.dim_of:
        a, b = pr
        c = C.m(C.ar2.point(pr))
        if C.s(c) != C.s(a) or C.t(c) != C.t(b):
            rep.add("composite-endpoints", simplex=id_str(pr))
    if not rep.ok:
        return rep
    for a0 in C.ar.dim_of:
        a = C.ar.point(a0)
        if C.comp(C.e(C.s(a)), a) != a:
            rep.add("left-unit", simplex=id_str(a0))
        if C.comp(a, C.e(C.t(a))) != a:
            rep.add("right-unit", simplex=id_str(a0))
    A3, _ = fiber_power(C.ar, C.t, C.s, 3)
    for tr in A3.dim_of:
        a, b, c = tr
        if C.comp(C.comp(a, b), c) != C.comp(a, C.comp(b, c)):
            rep.add("associativity", simplex=id_str(tr))
    return rep


class ICatMap:
    def __init__(self, source: InternalCat, target: InternalCat, fo: SMap, fa: SMap):
        self.source, self.target, self.fo, self.fa = source, target, fo, fa

    def then(self, g: "ICatMap") -> "ICatMap":
        return ICatMap(self.source, g.target, self.fo.then(g.fo), self.fa.then(g.fa))

    @classmethod
    def identity(cls, C: InternalCat) -> "ICatMap":
        return cls(C, C, SMap.identity(C.ob), SMap.identity(C.ar))

    def key(self) -> tuple:
        return (tuple(sorted(self.fo.assignment.items(), key=skey)),
                tuple(sorted(self.fa.assignment.items(), key=skey)))

    def check(self) -> ValidationReport:
        rep = ValidationReport()
        C, D = self.source, self.target
        for name, f in (("ob", self.fo), ("ar", self.fa)):
            for v in f.check().violations:
                rep.add(f"{name}-map", detail=v)
        if not rep.ok:
            return rep
        for a0 in C.ar.dim_of:
            a = C.ar.point(a0)
            if D.s(self.fa(a)) != self.fo(C.s(a)) or D.t(self.fa(a)) != self.fo(C.t(a)):
                rep.add("endpoints", simplex=id_str(a0))
        for x in C.ob.dim_of:
            p = C.ob.point(x)
            if self.fa(C.e(p)) != D.e(self.fo(p)):
                rep.add("units", simplex=id_str(x))
        for pr in C.ar2.dim_of:
            a, b = pr
            if self.fa(C.m(C.ar2.point(pr))) != D.comp(self.fa(a), self.fa(b)):
                rep.add("composition", simplex=id_str(pr))
        return rep

    def is_iso(self) -> bool:
        return self.fo.is_iso() and self.fa.is_iso()


def enumerate_icat_maps(C: InternalCat, D: InternalCat, limit: int | None = None) -> Iterator[ICatMap]:
    count = 0
    for fo_as in enumerate_smaps(C.ob, D.ob):
        fo = SMap(C.ob, D.ob, fo_as)
        forced = {}
        for x in C.ob.dim_of:
            ex = C.e(C.ob.point(x))
            if ex.nondegenerate:
                forced[ex.base] = D.e(fo(C.ob.point(x)))

        def accept(b, y, partial, fo=fo):
            a = C.ar.point(b)
            return D.s(y) == fo(C.s(a)) and D.t(y) == fo(C.t(a))
        for fa_as in enumerate_smaps(C.ar, D.ar, accept=accept, forced=forced):
            F = ICatMap(C, D, fo, SMap(C.ar, D.ar, fa_as))
            if all(F.fa(C.m(C.ar2.point(pr))) == D.comp(F.fa(pr[0]), F.fa(pr[1])) for pr in C.ar2.dim_of) \
                    and all(F.fa(C.e(C.ob.point(x))) == D.e(fo(C.ob.point(x))) for x in C.ob.dim_of):
                yield F
                count += 1
                if limit is not None and count >= limit:
                    return


# --- nerve -------------------------------------------------------------------------------

def _chain(n: int, parts: list) -> Simplex:
    return parts[0] if n == 1 else tuple_simplex(parts)


def nerve(C: InternalCat, M: int = 3) -> SimpSpace:
    """``N(C)_n``: chains of ``n`` composable arrows (``N_0 = Ob``, ``N_1 = Ar``)."""
    levels = [C.ob, C.ar] + [fiber_power(C.ar, C.t, C.s, n)[0] for n in range(2, M + 1)]
    levels = levels[:M + 1]

    def parts(n, x: Simplex) -> list:
        if n == 1:
            return [x]
        return [Simplex(c.base, compose(c.sigma, x.sigma)) for c in x.base]

    faces, degens = {}, {}
    if M >= 1:
        faces[(1, 0)] = C.t
        faces[(1, 1)] = C.s
        degens[(0, 0)] = C.e
    for n in range(2, M + 1):
        L = levels[n]
        for i in range(n + 1):
            asg = {}
            for b in L.dim_of:
                ps = parts(n, L.point(b))
                if i == 0:
                    new = ps[1:]
                elif i == n:
                    new = ps[:-1]
                else:
                    new = ps[:i - 1] + [C.comp(ps[i - 1], ps[i])] + ps[i + 1:]
                asg[b] = _chain(n - 1, new)
            faces[(n, i)] = SMap(L, levels[n - 1], asg)
    for n in range(1, M):
        L = levels[n]
        for j in range(n + 1):
            asg = {}
            for b in L.dim_of:
                ps = parts(n, L.point(b))
                obj = C.s(ps[0]) if j == 0 else C.t(ps[j - 1])
                asg[b] = _chain(n + 1, ps[:j] + [C.e(obj)] + ps[j:])
            degens[(n, j)] = SMap(L, levels[n + 1], asg)
    X = SimpSpace(levels, faces, degens)
    X.meta["nerve_of"] = C
    return X


def chain_parts(n: int, x: Simplex) -> list:
    """Arrows of a simplex of ``N(C)_n`` (n >= 1)."""
    if n == 1:
        return [x]
    return [Simplex(c.base, compose(c.sigma, x.sigma)) for c in x.base]


def nerve_map(F: ICatMap, NC: SimpSpace, ND: SimpSpace) -> SSMap:
    maps = [SMap(NC[0], ND[0], dict(F.fo.assignment))]
    if NC.M >= 1:
        maps.append(SMap(NC[1], ND[1], dict(F.fa.assignment)))
    for n in range(2, NC.M + 1):
        L = NC[n]
        maps.append(SMap(L, ND[n], {b: tuple_simplex([F.fa(p) for p in chain_parts(n, L.point(b))])
                                    for b in L.dim_of}))
    return SSMap(NC, ND, maps)


# --- mapping spaces ----------------------------------------------------------------------

def _delta_map(n_from: int, n_to: int, theta: tuple, D: int) -> SMap:
    """``Delta[n_from] -> Delta[n_to]`` induced by monotone ``theta``."""
    A, B = standard_simplex(n_from, D), standard_simplex(n_to, D)
    from .simplicial import simplex_of_vertices
    return SMap(A, B, {c: simplex_of_vertices(tuple(theta[v] for v in c)) for c in A.dim_of})


def _restrict_along(F: ICatMap, CxA: InternalCat, theta_map: SMap) -> ICatMap:
    """Precompose ``F: C x Delta[n] -> D`` with ``id x theta``; ``CxA`` is the new source."""
    def fo(b):
        c, v = b
        return F.fo(tuple_simplex([c, theta_map(v)]))

    def fa(b):
        c, v = b
        return F.fa(tuple_simplex([c, theta_map(v)]))
    return ICatMap(CxA, F.target, SMap(CxA.ob, F.target.ob, {b: fo(b) for b in CxA.ob.dim_of}),
                   SMap(CxA.ar, F.target.ar, {b: fa(b) for b in CxA.ar.dim_of}))


def icat_mapping_space(C: InternalCat, D: InternalCat, k: int, budget: int | None = None) -> tuple[FinSSet, bool]:
    """``Map(C, D)`` up to dimension ``k``; the flag is False when ``budget`` cut an enumeration."""
    complete = True
    sources = {n: times_simplex(C, n) for n in range(k + 1)}
    maps, index = {}, {}
    for n in range(k + 1):
        found = list(enumerate_icat_maps(sources[n], D, limit=budget))
        if budget is not None and len(found) >= budget:
            complete = False
        maps[n] = found
        for F in found:
            index[(n, F.key())] = F

    def face(n, key, i):
        F = index[(n, key)]
        theta = coface(n, i)
        G = _restrict_along(F, sources[n - 1], _delta_map(n - 1, n, theta, C.D))
        return G.key()

    def degen(n, key, j):
        F = index[(n, key)]
        theta = codegeneracy(n, j)
        G = _restrict_along(F, sources[n + 1], _delta_map(n + 1, n, theta, C.D))
        return G.key()

    X, _ = FinSSet.from_full(k, lambda n: [F.key() for F in maps[n]], face, degen)
    return X, complete


# --- strongly Segal ------------------------------------------------------------------------

def strongly_segal_check(C: InternalCat, probe_dim: int = 2, hom_bound: int = 1) -> dict:
    out = {"probe_dim": probe_dim}
    for name, p in (("source", C.s), ("target", C.t)):
        r = kan_fibration_probe(p, probe_dim)
        out[name] = r.to_json()
        if not r.ok:
            out["verdict"] = "FAIL"
            out["witness"] = {"map": name, **r.witness}
            return out
    r = kan_probe(C.ob, probe_dim)
    out["objects"] = r.to_json()
    if not r.ok:
        out["verdict"] = "FAIL"
        out["witness"] = {"map": "objects", **r.witness}
        return out
    sq = homotopy_cartesian_probe(segal_square(nerve(C, 2)), probe_dim, hom_bound)
    out["segal_square"] = {k: v for k, v in sq.items() if k != "cert"}
    out["verdict"] = "PASS" if sq["verdict"] == "PASS" else "FAIL"
    return out


def functor_map(C: InternalCat, D: InternalCat, on_objects: dict, on_arrows: dict) -> ICatMap:
    """An ICatMap between internal categories with discrete spaces, from an ordinary functor."""
    if C.ob.trunc_dim and (any(C.ob.nondeg.get(d) for d in range(1, C.D + 1))
                           or any(C.ar.nondeg.get(d) for d in range(1, C.D + 1))):
        raise ValueError("functor_map needs discrete object and arrow spaces")
    fo = SMap(C.ob, D.ob, {x: D.ob.point(on_objects[x]) for x in C.ob.nondeg[0]})
    fa = SMap(C.ar, D.ar, {a: D.ar.point(on_arrows[a]) for a in C.ar.nondeg[0]})
    return ICatMap(C, D, fo, fa)
