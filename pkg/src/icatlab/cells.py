"""Cell attachments ``K x [n] -> L x [n]`` of internal categories.

In inner degree ``k`` the pushout is ``C_k`` plus ``Z_k x [n]`` with
``Z_k = L_k - K_k``; faces of new cells that land in ``K`` are sent through the
attaching functor.
"""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass

from .categories import FinCat, enumerate_functors, functor_key
from .icat import ICatMap, InternalCat, chain_parts, empty_icat, nerve, nerve_map, tensor
from .limits import UnionFind
from .presented import SUnknown, s_adjoint, unit_map
from .simplicial import FinSSet, SMap, Simplex, enumerate_smaps, expr_str, id_str, skey
from .sspace import SimpSpace, SSMap, colimit_induced, sspace_pushout


@dataclass
class AttachmentSpec:
    """Attach ``L x [n]`` along ``K x [n]``; ``sigma: K -> N(C)_n`` is the attaching map.

    A map ``K x [n] -> C`` of internal categories is the same as a map of
    simplicial sets ``K -> N(C)_n``; ``sigma`` is stored in that form.
    """
    n: int
    K: FinSSet
    L: FinSSet
    inc: SMap
    sigma: SMap
    tag: str = "c"

    def check(self) -> list[str]:
        errs = []
        if not self.inc.is_injective():
            errs.append("K -> L is not a monomorphism")
        errs += [f"K -> L: {v}" for v in self.inc.check().violations]
        errs += [f"attaching map: {v}" for v in self.sigma.check().violations]
        return errs


@dataclass
class Attached:
    result: InternalCat
    base: InternalCat
    spec: AttachmentSpec
    KA: InternalCat
    LA: InternalCat
    j: ICatMap  # K x [n] -> L x [n]
    phi: ICatMap  # K x [n] -> C
    incl_C: ICatMap
    incl_L: ICatMap


def functor_from_sigma(C: InternalCat, NC: SimpSpace, KA: InternalCat, sigma: SMap, n: int) -> ICatMap:
    """The internal functor ``K x [n] -> C`` corresponding to ``sigma: K -> N(C)_n``."""
    fo, fa = {}, {}
    for b, k in KA.ob.dim_of.items():
        x, i = b
        fo[b] = NC.outer((i,), n)(sigma(sigma.source.point(x)))
    for b, k in KA.ar.dim_of.items():
        x, (i, j) = b
        fa[b] = NC.outer((i, j), n)(sigma(sigma.source.point(x)))
    return ICatMap(KA, C, SMap(KA.ob, C.ob, fo), SMap(KA.ar, C.ar, fa))


def _tensor_map(KA: InternalCat, LA: InternalCat, inc: SMap) -> ICatMap:
    ez_ob, ez_ar = LA.meta["cells"]
    fo = {b: ez_ob[(k, (inc(inc.source.point(b[0])), b[1]))] for b, k in KA.ob.dim_of.items()}
    fa = {b: ez_ar[(k, (inc(inc.source.point(b[0])), b[1]))] for b, k in KA.ar.dim_of.items()}
    return ICatMap(KA, LA, SMap(KA.ob, LA.ob, fo), SMap(KA.ar, LA.ar, fa))


def attach(C: InternalCat, spec: AttachmentSpec, NC: SimpSpace | None = None) -> Attached:
    errs = spec.check()
    if errs:
        raise ValueError("; ".join(errs))
    n, K, L, inc, tag = spec.n, spec.K, spec.L, spec.inc, spec.tag
    A = FinCat.chain(n)
    KA, LA = tensor(K, A), tensor(L, A)
    if NC is None or NC.M < max(n, 1):
        NC = nerve(C, max(n, 1))
    phi = functor_from_sigma(C, NC, KA, spec.sigma, n)
    ka_ob, ka_ar = KA.meta["cells"]
    D = C.D
    image = {k: {inc(x): x for x in K.simplices(k)} for k in range(D + 1)}

    def new_cell(z, a):
        return (tag, z, a)

    def level(k):
        Ck = C.level(k)
        Z = [z for z in L.simplices(k) if z not in image[k]]
        obs = list(Ck.objects) + [new_cell(z, i) for z in Z for i in A.objects]
        ars = list(Ck.arrows) + [new_cell(z, a) for z in Z for a in A.arrows]
        src, tgt, ident, comp = dict(Ck.src), dict(Ck.tgt), dict(Ck.ident), dict(Ck.comp)
        for z in Z:
            for a in A.arrows:
                src[new_cell(z, a)] = new_cell(z, A.src[a])
                tgt[new_cell(z, a)] = new_cell(z, A.tgt[a])
            for i in A.objects:
                ident[new_cell(z, i)] = new_cell(z, A.ident[i])
            for (f, g), h in A.comp.items():
                comp[(new_cell(z, f), new_cell(z, g))] = new_cell(z, h)
        return FinCat(obs, ars, src, tgt, ident, comp)

    def op(c, k, fz, old, through, ez):
        if isinstance(c, Simplex):
            return old(c)
        _, z, a = c
        w = fz(z)
        x = image[k].get(w)
        if x is None:
            return new_cell(w, a)
        return through(ez[(k, (x, a))])

    def ob_face(k, c, i):
        return op(c, k - 1, lambda z: L.face(z, i), lambda x: C.ob.face(x, i), phi.fo, ka_ob)

    def ar_face(k, c, i):
        return op(c, k - 1, lambda z: L.face(z, i), lambda x: C.ar.face(x, i), phi.fa, ka_ar)

    def ob_degen(k, c, j):
        return op(c, k + 1, lambda z: L.degen(z, j), lambda x: C.ob.degen(x, j), phi.fo, ka_ob)

    def ar_degen(k, c, j):
        return op(c, k + 1, lambda z: L.degen(z, j), lambda x: C.ar.degen(x, j), phi.fa, ka_ar)

    def label(c):
        return c.base if isinstance(c, Simplex) else (c[0], c[1].base, c[2])

    R = InternalCat.from_levels(D, level, ob_face, ob_degen, ar_face, ar_degen, ob_label=label, ar_label=label)
    r_ob, r_ar = R.meta["cells"]
    incl_C = ICatMap(C, R, SMap(C.ob, R.ob, {b: r_ob[(k, C.ob.point(b))] for b, k in C.ob.dim_of.items()}),
                     SMap(C.ar, R.ar, {b: r_ar[(k, C.ar.point(b))] for b, k in C.ar.dim_of.items()}))
    la_ob, la_ar = LA.meta["cells"]

    def from_L(b, k, ez_src, ez_tgt, through):
        z, a = b
        p = L.point(z)
        x = image[k].get(p)
        if x is None:
            return ez_tgt[(k, new_cell(p, a))]
        return through(ez_src[(k, (x, a))])

    incl_L = ICatMap(LA, R,
                     SMap(LA.ob, R.ob, {b: from_L(b, k, ka_ob, r_ob, lambda s: incl_C.fo(phi.fo(s)))
                                        for b, k in LA.ob.dim_of.items()}),
                     SMap(LA.ar, R.ar, {b: from_L(b, k, ka_ar, r_ar, lambda s: incl_C.fa(phi.fa(s)))
                                        for b, k in LA.ar.dim_of.items()}))
    R.meta["attached"] = True
    return Attached(R, C, spec, KA, LA, _tensor_map(KA, LA, inc), phi, incl_C, incl_L)


# --- verifiers ---------------------------------------------------------------------------

def _functor_image(F: ICatMap, k: int, fun: tuple) -> tuple:
    om, am = fun
    return ({x: F.fo(y) for x, y in om.items()}, {a: F.fa(y) for a, y in am.items()})


def verify_key_lemma(att: Attached, Bs: list[FinCat], kmax: int | None = None) -> dict:
    """For connected ``B``, ``Fun(B, -)`` of the degree-``k`` categories turns the attachment into a pushout of sets."""
    kmax = att.result.D if kmax is None else kmax
    out = {"degrees": kmax, "shapes": []}
    ok_all = True
    for B in Bs:
        comps = B.components()
        if len(comps) != 1:
            out["shapes"].append({"objects": len(B.objects), "rejected": True, "pi0": len(comps)})
            ok_all = False
            continue
        per = []
        for k in range(kmax + 1):
            cats = [att.base.level(k), att.LA.level(k), att.KA.level(k), att.result.level(k)]
            funs = [list(enumerate_functors(B, c)) for c in cats]
            uf = UnionFind()
            for i in (0, 1):
                for f in funs[i]:
                    uf.add((i, functor_key(f)))
            for f in funs[2]:
                a = (0, functor_key(_functor_image(att.phi, k, f)))
                b = (1, functor_key(_functor_image(att.j, k, f)))
                uf.union(a, b)
            cls = uf.classes()
            image = {}
            for i, F in ((0, att.incl_C), (1, att.incl_L)):
                for f in funs[i]:
                    image.setdefault(uf.find((i, functor_key(f))), set()).add(functor_key(_functor_image(F, k, f)))
            targets = {functor_key(f) for f in funs[3]}
            well_defined = all(len(v) == 1 for v in image.values())
            hit = [next(iter(v)) for v in image.values()]
            bij = well_defined and len(set(hit)) == len(hit) == len(targets) and set(hit) == targets
            per.append({"degree": k, "pushout": len(cls), "target": len(targets), "bijection": bij})
            ok_all &= bij
        out["shapes"].append({"objects": len(B.objects), "degrees": per})
    out["ok"] = ok_all
    return out


def verify_nerve_pushout(att: Attached, M: int = 3) -> dict:
    """``N`` of the attachment against the pushout of nerves, levelwise."""
    NC, NKA, NLA, ND = nerve(att.base, M), nerve(att.KA, M), nerve(att.LA, M), nerve(att.result, M)
    P, _ = sspace_pushout(nerve_map(att.phi, NKA, NC), nerve_map(att.j, NKA, NLA))
    comp = colimit_induced(P, [nerve_map(att.incl_C, NC, ND), nerve_map(att.incl_L, NLA, ND)], ND)
    levels = []
    for m in range(M + 1):
        f = comp[m]
        levels.append({"level": m, "pushout": P[m].size(), "nerve": ND[m].size(), "iso": f.is_iso()})
    return {"ok": all(x["iso"] for x in levels) and comp.check().ok, "levels": levels}


# --- cell complexes and the nerve criterion -------------------------------------------------

class CellComplex:
    """Iterated attachments from a base, tracked both as an internal category and as a simplicial space."""

    def __init__(self, base: InternalCat | None = None, D: int = 3, M: int = 3):
        self.base = base or empty_icat(D)
        self.M = M
        self.steps: list[Attached] = []
        self.icat = self.base
        self.space = nerve(self.base, M)
        self.comparison = SSMap.identity(self.space)

    def attach(self, spec: AttachmentSpec) -> Attached:
        NC = nerve(self.icat, self.M)
        att = attach(self.icat, spec, NC)
        ND = nerve(att.result, self.M)
        NKA, NLA = nerve(att.KA, self.M), nerve(att.LA, self.M)
        back = SSMap(NC, self.space, [f.inverse() for f in self.comparison.maps])
        leg = nerve_map(att.phi, NKA, NC).then(back)
        X, _ = sspace_pushout(leg, nerve_map(att.j, NKA, NLA))
        self.comparison = colimit_induced(X, [self.comparison.then(nerve_map(att.incl_C, NC, ND)),
                                              nerve_map(att.incl_L, NLA, ND)], ND)
        X.meta["cell_complex"] = self
        self.space = X
        self.icat = att.result
        self.steps.append(att)
        return att


def is_nerve(X: SimpSpace, max_len: int = 8, structural: bool = True) -> dict:
    """Whether the unit ``X -> N S X`` is an isomorphism: YES, NO (with witness) or UNKNOWN."""
    cc = X.meta.get("cell_complex")
    if structural and cc is not None and cc.space is X:
        iso = cc.comparison.is_iso()
        return {"verdict": "YES" if iso else "NO", "method": "structural", "icat": cc.icat}
    try:
        S = s_adjoint(X, max_len)
    except SUnknown as exc:
        return {"verdict": "UNKNOWN", "method": "presentation", "reason": str(exc)}
    NS = nerve(S, X.M)
    u = unit_map(X, S, NS)
    levels = []
    spine = None
    for m in range(X.M + 1):
        f = u[m]
        if f.is_iso():
            continue
        img = f.image_ids()
        missing = [b for d in sorted(NS[m].nondeg) for b in NS[m].nondeg[d] if b not in img]
        row = {"level": m, "sizes": [X[m].size(), NS[m].size()]}
        if missing:
            row["missing"] = id_str(missing[0])
        else:
            row["not_injective"] = True
        levels.append(row)
        if m >= 2 and spine is None:
            edges = u[1].image_ids()
            for b in missing:
                parts = chain_parts(m, NS[m].point(b))
                if all(p.base in edges for p in parts):
                    spine = {"level": m, "chain": id_str(b), "edges": [expr_str(p) for p in parts]}
                    break
    if levels:
        wit = {"first": levels[0], "levels": levels}
        if spine is not None:
            wit["spine_composite"] = spine
        return {"verdict": "NO", "method": "presentation", "witness": wit, "icat": S}
    return {"verdict": "YES", "method": "presentation", "icat": S}


# --- random instances -----------------------------------------------------------------------

def random_sset(rng: random.Random, D: int, max_simplices: int = 6, max_dim: int = 2) -> FinSSet:
    """A random finite simplicial set of dimension <= ``max_dim``; valid by construction."""
    total = rng.randint(1, max_simplices)
    nv = rng.randint(1, max(1, min(3, total)))
    verts = [f"v{i}" for i in range(nv)]
    nondeg = {0: list(verts)}
    faces = {}
    left = total - nv
    edges = []
    if max_dim >= 1:
        for i in range(rng.randint(0, left)):
            a, b = rng.choice(verts), rng.choice(verts)
            e = f"e{i}"
            edges.append(e)
            faces[e] = (Simplex(b, (0,)), Simplex(a, (0,)))
    nondeg[1] = edges
    left -= len(edges)
    X = FinSSet(D, nondeg, faces)
    tris = []
    if max_dim >= 2 and left > 0:
        tri_count = rng.randint(0, left)
        cands = X.simplices(1)
        for i in range(tri_count):
            opts = []
            for e2 in cands:
                for e0 in cands:
                    if X.face(e2, 0) != X.face(e0, 1):
                        continue
                    for e1 in cands:
                        if X.face(e1, 1) == X.face(e2, 1) and X.face(e1, 0) == X.face(e0, 0):
                            if not (e0 == e1 == e2 and not e0.nondegenerate):
                                opts.append((e0, e1, e2))
            opts = [o for o in opts if not all(not e.nondegenerate for e in o)]
            if not opts:
                break
            t = f"t{i}"
            tris.append(t)
            faces[t] = rng.choice(opts)
    nondeg[2] = tris
    return FinSSet(D, nondeg, faces)


def random_subobject(rng: random.Random, L: FinSSet) -> FinSSet:
    keep = [b for b in L.dim_of if rng.random() < 0.5]
    return L.sub(L.closure(keep))


def random_smap(rng: random.Random, K: FinSSet, Y: FinSSet) -> SMap | None:
    for asg in enumerate_smaps(K, Y, rng=rng, limit=1):
        return SMap(K, Y, asg)
    return None


def random_attachment(rng: random.Random, C: InternalCat, NC: SimpSpace, tag: str,
                      max_simplices: int = 6, max_n: int = 2) -> AttachmentSpec:
    D = C.D
    n = rng.randint(0, max_n)
    L = random_sset(rng, D, max_simplices)
    if C.ob.is_empty():
        K = FinSSet.empty(D)
    else:
        K = random_subobject(rng, L)
    inc = SMap(K, L, {b: L.point(b) for b in K.dim_of})
    sigma = random_smap(rng, K, NC[n])
    if sigma is None:
        K = FinSSet.empty(D)
        inc = SMap(K, L, {})
        sigma = SMap(K, NC[n], {})
    return AttachmentSpec(n, K, L, inc, sigma, tag)


def random_instance(rng: random.Random, D: int = 4, pre: int | None = None) -> tuple[InternalCat, AttachmentSpec]:
    """A random base (0-2 earlier cells on the empty category) and one more attachment."""
    C = empty_icat(D)
    pre = rng.randint(0, 2) if pre is None else pre
    for i in range(pre):
        NC = nerve(C, 2)
        spec = random_attachment(rng, C, NC, f"p{i}", max_simplices=3, max_n=1)
        C = attach(C, spec, NC).result
    spec = random_attachment(rng, C, nerve(C, 2), "c")
    return C, spec


def spec_hash(C: InternalCat, spec: AttachmentSpec) -> str:
    from .serialize import attachment_to_json
    doc = attachment_to_json(spec)
    doc["base"] = {"ob": C.ob.size(), "ar": C.ar.size(),
                   "ob_ids": [id_str(b) for b in sorted(C.ob.dim_of, key=skey)],
                   "ar_ids": [id_str(b) for b in sorted(C.ar.dim_of, key=skey)]}
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()


def key_lemma_campaign(trials: int, seed: int, D: int = 4, M: int = 3) -> dict:
    rng = random.Random(seed)
    shapes = [FinCat.chain(0), FinCat.chain(1), FinCat.chain(2)]
    instances = []
    failures = 0
    for t in range(trials):
        C, spec = random_instance(rng, D)
        att = attach(C, spec)
        kl = verify_key_lemma(att, shapes, D)
        npo = verify_nerve_pushout(att, M)
        ok = kl["ok"] and npo["ok"]
        failures += not ok
        instances.append({"trial": t, "hash": spec_hash(C, spec), "n": spec.n,
                          "K": spec.K.size(), "L": spec.L.size(), "key_lemma": kl["ok"],
                          "nerve_pushout": npo["ok"]})
    return {"trials": trials, "seed": seed, "trunc_dim": D, "outer_dim": M,
            "failures": failures, "instances": instances}


def generic_pushout_check(att: Attached) -> dict:
    """The closed form against the colimit of object and arrow spaces computed by the generic machinery."""
    from .limits import pushout
    out = {}
    for name, part in (("ob", lambda F: F.fo), ("ar", lambda F: F.fa)):
        P = pushout(part(att.phi), part(att.j))
        f = P.induced([part(att.incl_C), part(att.incl_L)], getattr(att.result, name))
        out[name] = f.check().ok and f.is_iso()
    out["ok"] = out["ob"] and out["ar"]
    return out
