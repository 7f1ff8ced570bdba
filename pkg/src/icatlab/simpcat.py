"""Simplicial categories, the Int embedding into internal categories, and the Grothendieck construction."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterator

from .categories import FinCat
from .certify import certify_equivalence
from .icat import ICatMap, InternalCat, nerve, nerve_map
from .kan import kan_probe
from .limits import pi0, product, tuple_simplex
from .simplicial import FinSSet, SMap, Simplex, ValidationReport, enumerate_smaps, expr_str, id_str, skey
from .sspace import HoCat, dk_check, hoequiv, pi0_mod_equiv


def _deg(v: Hashable, k: int) -> Simplex:
    return Simplex(v, (0,) * (k + 1))


class SimpCat:
    """Objects, mapping spaces ``maps[(x, y)]``, composition ``comp[(x, y, z)]: map(x,y) x map(y,z) -> map(x,z)``
    (first argument applied first) and identity vertices ``ident[x]``."""

    def __init__(self, objects, maps: dict, comp: dict, ident: dict):
        self.objects = list(objects)
        self.maps = maps
        self.comp_maps = comp
        self.ident = ident
        D = {X.trunc_dim for X in maps.values()}
        if len(D) > 1:
            raise ValueError("mapping spaces have different truncations")
        self.D = D.pop() if D else 0

    def map(self, x, y) -> FinSSet:
        return self.maps[(x, y)]

    def compose(self, x, y, z, f: Simplex, g: Simplex) -> Simplex:
        return self.comp_maps[(x, y, z)](tuple_simplex([f, g]))

    def identity(self, x, k: int) -> Simplex:
        return _deg(self.ident[x], k)

    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        obs = self.objects
        for x, y in itertools.product(obs, obs):
            if (x, y) not in self.maps:
                rep.add("missing-mapping-space", pair=f"{id_str(x)},{id_str(y)}")
        if not rep.ok:
            return rep
        for key, f in self.comp_maps.items():
            for v in f.check().violations:
                rep.add("composition-not-simplicial", triple=",".join(map(id_str, key)), detail=v)
        if not rep.ok:
            return rep
        for k in range(self.D + 1):
            for x, y in itertools.product(obs, obs):
                for f in self.map(x, y).simplices(k):
                    if self.compose(x, x, y, self.identity(x, k), f) != f or \
                            self.compose(x, y, y, f, self.identity(y, k)) != f:
                        rep.add("unit", pair=f"{id_str(x)},{id_str(y)}", simplex=expr_str(f))
            for x, y, z, w in itertools.product(obs, repeat=4):
                for f in self.map(x, y).simplices(k):
                    for g in self.map(y, z).simplices(k):
                        fg = self.compose(x, y, z, f, g)
                        for h in self.map(z, w).simplices(k):
                            if self.compose(x, z, w, fg, h) != self.compose(x, y, w, f, self.compose(y, z, w, g, h)):
                                rep.add("associativity", simplices=f"{expr_str(f)},{expr_str(g)},{expr_str(h)}")
        return rep

    # constructors
    @classmethod
    def from_table(cls, objects, maps: dict, compose, ident: dict) -> "SimpCat":
        """Build the composition SMaps from ``compose(x, y, z, f, g)`` on simplices."""
        comp = {}
        for x, y, z in itertools.product(objects, repeat=3):
            P, _ = product(maps[(x, y)], maps[(y, z)])
            comp[(x, y, z)] = SMap(P, maps[(x, z)], {
                b: compose(x, y, z, *[Simplex(c.base, c.sigma) for c in b]) for b in P.dim_of})
        return cls(objects, maps, comp, ident)

    @classmethod
    def from_category(cls, cat: FinCat, D: int) -> "SimpCat":
        """Discrete mapping spaces."""
        maps = {(x, y): FinSSet.discrete(cat.hom(x, y), D) for x in cat.objects for y in cat.objects}

        def compose(x, y, z, f, g):
            return _deg(cat.comp[(f.base, g.base)], f.dim)
        return cls.from_table(cat.objects, maps, compose, dict(cat.ident))

    def to_json(self) -> dict:
        from .serialize import smap_to_json, sset_to_json
        return {"kind": "scat", "objects": [id_str(x) for x in self.objects],
                "maps": {f"{id_str(x)}|{id_str(y)}": sset_to_json(X) for (x, y), X in sorted(self.maps.items(), key=skey)},
                "identities": {id_str(x): id_str(v) for x, v in self.ident.items()},
                "composition": {"|".join(map(id_str, k)): smap_to_json(f)
                                for k, f in sorted(self.comp_maps.items(), key=skey)}}


def monoid_interval(D: int = 3) -> SimpCat:
    """One object with ``map = Delta[1]``, composition ``max`` and unit the vertex 0."""
    from .simplicial import simplex_of_vertices, standard_simplex
    I = standard_simplex(1, D)

    def compose(x, y, z, f, g):
        vf, vg = I.vertices(f), I.vertices(g)
        return simplex_of_vertices(tuple(max(a[0], b[0]) for a, b in zip(vf, vg)))
    return SimpCat.from_table(["*"], {("*", "*"): I}, compose, {"*": (0,)})


# --- Int --------------------------------------------------------------------------------------

def internalize(c: SimpCat) -> InternalCat:
    """``Ob`` the discrete object set, ``Ar`` the disjoint union of the mapping spaces."""
    obs = c.objects

    def level(k):
        arrows = [(x, y, f) for x in obs for y in obs for f in c.map(x, y).simplices(k)]
        comp = {}
        for (x, y, f) in arrows:
            for z in obs:
                for g in c.map(y, z).simplices(k):
                    comp[((x, y, f), (y, z, g))] = (x, z, c.compose(x, y, z, f, g))
        return FinCat(obs, arrows, {a: a[0] for a in arrows}, {a: a[1] for a in arrows},
                      {x: (x, x, c.identity(x, k)) for x in obs}, comp)

    same = lambda k, x, i: x
    C = InternalCat.from_levels(c.D, level, same, same,
                                lambda k, a, i: (a[0], a[1], c.map(a[0], a[1]).face(a[2], i)),
                                lambda k, a, j: (a[0], a[1], c.map(a[0], a[1]).degen(a[2], j)),
                                ar_label=lambda a: (a[0], a[1], a[2].base))
    C.meta["int_of"] = c
    return C


def ho_of_simpcat(c: SimpCat) -> HoCat:
    """Objects unchanged; ``hom(x, y) = pi0 map(x, y)``."""
    comps, cls = {}, {}
    for (x, y), X in c.maps.items():
        if X.is_empty():
            continue
        _, comp_of = pi0(X)
        for v in X.nondeg[0]:
            cls[(x, y, v)] = (x, y, comp_of[v])
        comps[(x, y)] = X
    arrows = sorted(set(cls.values()), key=skey)
    rep = {}
    for (x, y, v), a in sorted(cls.items(), key=skey):
        rep.setdefault(a, v)
    comp = {}
    for f in arrows:
        for g in arrows:
            if f[1] != g[0]:
                continue
            x, y, z = f[0], f[1], g[1]
            h = c.compose(x, y, z, _deg(rep[f], 0), _deg(rep[g], 0))
            comp[(f, g)] = cls[(x, z, h.base)]
    ident = {x: cls[(x, x, c.ident[x])] for x in c.objects}
    return HoCat(c.objects, arrows, {a: a[0] for a in arrows}, {a: a[1] for a in arrows}, ident, comp, cls)


def probe_mapping_spaces(c: SimpCat, probe_dim: int = 2) -> dict:
    bad = None
    for (x, y), X in sorted(c.maps.items(), key=skey):
        if X.is_empty():
            continue
        r = kan_probe(X, min(probe_dim, X.trunc_dim))
        if not r.ok:
            bad = {"pair": [id_str(x), id_str(y)], "witness": r.witness}
            break
    return {"ok": bad is None, "probe_dim": probe_dim, "witness": bad}


def equivalence_detection_check(c: SimpCat, a, b, f, probe_dim: int = 2) -> dict:
    """Ho-invertibility of the vertex ``f`` of ``map(a, b)`` against membership in ``hoequiv(N Int c)``."""
    H = ho_of_simpcat(c)
    ho_side = H.inverse(H.cls[(a, b, f)]) is not None
    C = internalize(c)
    Heq, _ = hoequiv(nerve(C, 2))
    int_side = (a, b, f) in Heq.dim_of
    probe = probe_mapping_spaces(c, probe_dim)
    agree = ho_side == int_side
    verdict = ("PASS" if probe["ok"] else "ADVISORY") if agree else "FAIL"
    return {"verdict": verdict, "ho_invertible": ho_side, "in_hoequiv": int_side, "probe": probe}


def ho_comparison_check(c: SimpCat) -> dict:
    """``Ho(c)/iso -> pi0(Ob Int c)/~`` is a bijection."""
    H = ho_of_simpcat(c)
    from .limits import UnionFind
    uf = UnionFind()
    for x in c.objects:
        uf.add(x)
    for g in H.arrows:
        if H.inverse(g) is not None:
            uf.union(g[0], g[1])
    classes, cls = pi0_mod_equiv(nerve(internalize(c), 2))
    pairs = {(uf.find(x), cls[x]) for x in c.objects}
    left = {p[0] for p in pairs}
    right = {p[1] for p in pairs}
    ok = len(pairs) == len(left) == len(right) == len(classes)
    return {"ok": ok, "ho_classes": len(left), "int_classes": len(classes)}


# --- maps of simplicial categories -------------------------------------------------------------

@dataclass
class SimpCatMap:
    source: SimpCat
    target: SimpCat
    on_objects: dict
    on_maps: dict  # (x, y) -> SMap

    def check(self) -> ValidationReport:
        rep = ValidationReport()
        A, B, fo = self.source, self.target, self.on_objects
        for (x, y), f in self.on_maps.items():
            for v in f.check().violations:
                rep.add("not-simplicial", pair=f"{id_str(x)},{id_str(y)}", detail=v)
        for x in A.objects:
            if self.on_maps[(x, x)](_deg(A.ident[x], 0)) != _deg(B.ident[fo[x]], 0):
                rep.add("unit", object=id_str(x))
        for k in range(A.D + 1):
            for x, y, z in itertools.product(A.objects, repeat=3):
                for f in A.map(x, y).simplices(k):
                    for g in A.map(y, z).simplices(k):
                        lhs = self.on_maps[(x, z)](A.compose(x, y, z, f, g))
                        rhs = B.compose(fo[x], fo[y], fo[z], self.on_maps[(x, y)](f), self.on_maps[(y, z)](g))
                        if lhs != rhs:
                            rep.add("composition", simplices=f"{expr_str(f)},{expr_str(g)}")
        return rep

    def internalized(self, CA: InternalCat | None = None, CB: InternalCat | None = None) -> ICatMap:
        CA = CA or internalize(self.source)
        CB = CB or internalize(self.target)
        fo = SMap(CA.ob, CB.ob, {x: CB.ob.point(self.on_objects[x]) for x in CA.ob.nondeg[0]})
        fa = {}
        for b in CA.ar.dim_of:
            x, y, f = b
            img = self.on_maps[(x, y)](self.source.map(x, y).point(f))
            fa[b] = Simplex((self.on_objects[x], self.on_objects[y], img.base), img.sigma)
        return ICatMap(CA, CB, fo, SMap(CA.ar, CB.ar, fa))


def enumerate_scat_maps(A: SimpCat, B: SimpCat) -> Iterator[SimpCatMap]:
    pairs = [(x, y) for x in A.objects for y in A.objects]
    for images in itertools.product(B.objects, repeat=len(A.objects)):
        fo = dict(zip(A.objects, images))
        options = [list(enumerate_smaps(A.map(x, y), B.map(fo[x], fo[y]))) for x, y in pairs]
        for choice in itertools.product(*options):
            F = SimpCatMap(A, B, fo, {p: SMap(A.map(*p), B.map(fo[p[0]], fo[p[1]]), asg)
                                      for p, asg in zip(pairs, choice)})
            if F.check().ok:
                yield F


def simpcat_dk(F: SimpCatMap, hom_bound: int = 1) -> dict:
    """Dwyer-Kan on the simplicial side: mapping-space certificates and Ho essential surjectivity."""
    A, B = F.source, F.target
    ff, witness, fibers = True, None, {}
    for (x, y), f in sorted(F.on_maps.items(), key=skey):
        cert = certify_equivalence(f.source, f.target, homology_bound=hom_bound, map=f)
        fibers[f"{id_str(x)}->{id_str(y)}"] = cert.label
        if not cert.ok and witness is None:
            ff, witness = False, {"pair": [id_str(x), id_str(y)], "certificate": cert.to_json()}
        ff &= cert.ok
    H = ho_of_simpcat(B)
    images = {F.on_objects[x] for x in A.objects}
    missed = [z for z in B.objects
              if not any(H.inverse(g) is not None for w in images for g in H.hom(w, z))]
    return {"verdict": "DK" if ff and not missed else "NOT-DK", "fully_faithful": ff,
            "fully_faithful_witness": witness, "essentially_surjective": not missed,
            "missed_object": id_str(missed[0]) if missed else None, "fibers": fibers}


def int_reflects_dk_check(F: SimpCatMap, hom_bound: int = 1, probe_dim: int = 2) -> dict:
    CA, CB = internalize(F.source), internalize(F.target)
    NA, NB = nerve(CA, 2), nerve(CB, 2)
    simp = simpcat_dk(F, hom_bound)
    inner = dk_check(nerve_map(F.internalized(CA, CB), NA, NB), hom_bound)
    probes = {"source": probe_mapping_spaces(F.source, probe_dim)["ok"],
              "target": probe_mapping_spaces(F.target, probe_dim)["ok"]}
    agree = simp["verdict"] == inner["verdict"] and simp["fully_faithful"] == inner["fully_faithful"]
    verdict = ("PASS" if all(probes.values()) else "ADVISORY") if agree else "FAIL"
    return {"verdict": verdict, "simplicial": simp["verdict"], "internal": inner["verdict"],
            "fully_faithful": [simp["fully_faithful"], inner["fully_faithful"]], "probes": probes,
            "simplicial_witness": simp["fully_faithful_witness"] or simp["missed_object"],
            "internal_witness": inner["fully_faithful_witness"] or inner["essential_witness"]}


# --- Grothendieck construction ------------------------------------------------------------------

@dataclass
class GrData:
    """A functor ``c -> S``: spaces ``F[x]`` and actions ``act[(x, y)]: F(x) x map(x, y) -> F(y)``."""
    base: SimpCat
    F: dict
    act: dict

    def apply(self, x, y, u: Simplex, g: Simplex) -> Simplex:
        return self.act[(x, y)](tuple_simplex([u, g]))

    def check(self) -> ValidationReport:
        rep = ValidationReport()
        c = self.base
        for key, f in self.act.items():
            for v in f.check().violations:
                rep.add("action-not-simplicial", pair=",".join(map(id_str, key)), detail=v)
        if not rep.ok:
            return rep
        for k in range(c.D + 1):
            for x in c.objects:
                for u in self.F[x].simplices(k):
                    if self.apply(x, x, u, c.identity(x, k)) != u:
                        rep.add("functor-unit", object=id_str(x), simplex=expr_str(u))
                    for y, z in itertools.product(c.objects, repeat=2):
                        for g in c.map(x, y).simplices(k):
                            ug = self.apply(x, y, u, g)
                            for h in c.map(y, z).simplices(k):
                                if self.apply(y, z, ug, h) != self.apply(x, z, u, c.compose(x, y, z, g, h)):
                                    rep.add("functor-composition", object=id_str(x),
                                            simplices=f"{expr_str(u)},{expr_str(g)},{expr_str(h)}")
        return rep

    @classmethod
    def from_table(cls, base: SimpCat, F: dict, act) -> "GrData":
        table = {}
        for x, y in itertools.product(base.objects, repeat=2):
            P, _ = product(F[x], base.map(x, y))
            table[(x, y)] = SMap(P, F[y], {b: act(x, y, *[Simplex(c.base, c.sigma) for c in b]) for b in P.dim_of})
        return cls(base, F, table)

    @classmethod
    def terminal(cls, base: SimpCat) -> "GrData":
        from .simplicial import point
        pt = {x: point(base.D) for x in base.objects}
        return cls.from_table(base, pt, lambda x, y, u, g: u)


def grothendieck(data: GrData) -> InternalCat:
    """``Ob = sum F(c)``, ``Ar = sum F(c) x map(c, d)``; the target is the action, composition composes in ``c``."""
    rep = data.check()
    if not rep.ok:
        raise ValueError(f"functor laws fail: {rep.violations[0]}")
    c = data.base
    obs_of = c.objects

    def level(k):
        objects = [(x, u) for x in obs_of for u in data.F[x].simplices(k)]
        arrows = [(x, y, u, g) for x in obs_of for u in data.F[x].simplices(k)
                  for y in obs_of for g in c.map(x, y).simplices(k)]
        src = {a: (a[0], a[2]) for a in arrows}
        tgt = {a: (a[1], data.apply(a[0], a[1], a[2], a[3])) for a in arrows}
        by_src: dict = {}
        for a in arrows:
            by_src.setdefault(src[a], []).append(a)
        comp = {}
        for a in arrows:
            for b in by_src.get(tgt[a], ()):
                comp[(a, b)] = (a[0], b[1], a[2], c.compose(a[0], a[1], b[1], a[3], b[3]))
        ident = {(x, u): (x, x, u, c.identity(x, k)) for (x, u) in objects}
        return FinCat(objects, arrows, src, tgt, ident, comp)

    def ob_face(k, o, i):
        return (o[0], data.F[o[0]].face(o[1], i))

    def ob_degen(k, o, j):
        return (o[0], data.F[o[0]].degen(o[1], j))

    def ar_face(k, a, i):
        return (a[0], a[1], data.F[a[0]].face(a[2], i), c.map(a[0], a[1]).face(a[3], i))

    def ar_degen(k, a, j):
        return (a[0], a[1], data.F[a[0]].degen(a[2], j), c.map(a[0], a[1]).degen(a[3], j))

    G = InternalCat.from_levels(c.D, level, ob_face, ob_degen, ar_face, ar_degen,
                                ob_label=lambda o: (o[0], o[1].base),
                                ar_label=lambda a: (a[0], a[1], tuple_simplex([a[2], a[3]]).base))
    G.meta["grothendieck_of"] = data
    return G


def grothendieck_count_check(data: GrData, G: InternalCat | None = None, M: int = 2) -> dict:
    """Level ``n`` of the nerve in each inner degree against ``sum |F(c_0)| |map(c_0,c_1)| ... |map(c_{n-1},c_n)|``."""
    G = G or grothendieck(data)
    N = nerve(G, M)
    c = data.base
    rows = []
    for n in range(M + 1):
        for k in range(c.D + 1):
            expect = 0
            for chain in itertools.product(c.objects, repeat=n + 1):
                term = len(data.F[chain[0]].simplices(k))
                for x, y in zip(chain, chain[1:]):
                    term *= len(c.map(x, y).simplices(k))
                expect += term
            got = len(N[n].simplices(k))
            rows.append({"level": n, "degree": k, "expected": expect, "nerve": got})
    return {"ok": all(r["expected"] == r["nerve"] for r in rows), "rows": rows}
