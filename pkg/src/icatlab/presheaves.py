"""Internal presheaves: modules over the arrow space of an internal category.

A right presheaf (an object of ``S^C``) is ``F -> Ob`` with ``F x_Ob Ar -> F``,
``(x, a) -> x.a`` defined when ``p(x) = s(a)`` and landing over ``t(a)``.  A left
presheaf (``S^{C^op}``) has ``Ar x_Ob F -> F``, ``(a, x) -> a.x`` defined when
``t(a) = p(x)`` and landing over ``s(a)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .certify import certify_equivalence
from .homology import homology
from .icat import ICatMap, InternalCat, _delta_map, nerve, strongly_segal_check
from .kan import kan_fibration_probe
from .limits import coequalizer, fiber_product, limit, product, product_map, tuple_simplex
from .simplicial import FinSSet, SMap, Simplex, ValidationReport, compose, expr_str, id_str, skey, standard_simplex
from .sspace import SimpSpace, diagonal, hoequiv, pi0_mod_equiv, validate_sspace

RIGHT, LEFT = "right", "left"


def parts(x: Simplex) -> list:
    """Components of a simplex of a tuple-id limit."""
    return [Simplex(c.base, compose(c.sigma, x.sigma)) for c in x.base]


def degenerate_to(x: Simplex, n: int) -> Simplex:
    """A vertex pushed up to dimension ``n``."""
    return Simplex(x.base, (0,) * (n + 1))


@dataclass
class Presheaf:
    base: InternalCat
    carrier: FinSSet
    projection: SMap
    action: SMap
    variance: str = RIGHT
    name: str = ""

    @property
    def pairs(self) -> FinSSet:
        return self.action.source

    def act(self, x: Simplex, a: Simplex) -> Simplex:
        """``x.a`` (right) or ``a.x`` (left); argument order is always (element, arrow)."""
        pair = [x, a] if self.variance == RIGHT else [a, x]
        return self.action(tuple_simplex(pair))

    def fiber(self, c) -> FinSSet:
        """Strict fiber over the vertex ``c`` of ``Ob``."""
        X = self.carrier
        return X.sub([b for b in X.dim_of if self.projection(X.point(b)).base == c])


def pair_space(C: InternalCat, projection: SMap, variance: str) -> FinSSet:
    if variance == RIGHT:
        return fiber_product(projection, C.s)[0]
    return fiber_product(C.t, projection)[0]


def make_presheaf(C: InternalCat, carrier: FinSSet, projection: SMap, act, variance: str, name: str = "") -> Presheaf:
    """Assemble from ``act(x, a)`` on simplices; the action table is filled on nondegenerate pairs."""
    P = pair_space(C, projection, variance)
    asg = {}
    for b in P.dim_of:
        p = parts(P.point(b))
        x, a = (p[0], p[1]) if variance == RIGHT else (p[1], p[0])
        asg[b] = act(x, a)
    return Presheaf(C, carrier, projection, SMap(P, carrier, asg), variance, name)


def validate_presheaf(F: Presheaf) -> ValidationReport:
    rep = ValidationReport()
    C = F.base
    for name, f in (("projection", F.projection), ("action", F.action)):
        for v in f.check().violations:
            rep.add(f"{name}-not-simplicial", detail=v)
    if not rep.ok:
        return rep
    X, p = F.carrier, F.projection
    right = F.variance == RIGHT
    for k in range(X.trunc_dim + 1):
        arrows_from, arrows_to = {}, {}
        for a in C.ar.simplices(k):
            arrows_from.setdefault(C.s(a), []).append(a)
            arrows_to.setdefault(C.t(a), []).append(a)
        for x in X.simplices(k):
            px = p(x)
            if F.act(x, C.e(px)) != x:
                rep.add("unit", simplex=expr_str(x))
            for a in (arrows_from if right else arrows_to).get(px, ()):
                y = F.act(x, a)
                if p(y) != (C.t(a) if right else C.s(a)):
                    rep.add("projection", simplex=expr_str(x), arrow=expr_str(a))
                    continue
                follow = arrows_from.get(C.t(a), ()) if right else arrows_to.get(C.s(a), ())
                for b in follow:
                    lhs = F.act(y, b)
                    rhs = F.act(x, C.comp(a, b) if right else C.comp(b, a))
                    if lhs != rhs:
                        rep.add("associativity", simplex=expr_str(x), arrows=f"{expr_str(a)},{expr_str(b)}")
    return rep


# --- basic presheaves -----------------------------------------------------------------------

def terminal_presheaf(C: InternalCat, variance: str = RIGHT) -> Presheaf:
    """Carrier ``Ob``, projection the identity; an arrow moves a point to its other end."""
    if variance == RIGHT:
        act = lambda x, a: C.t(a)
    else:
        act = lambda x, a: C.s(a)
    return make_presheaf(C, C.ob, SMap.identity(C.ob), act, variance, "terminal")


def _check_vertex(C: InternalCat, v) -> None:
    if C.ob.dim_of.get(v) != 0:
        raise ValueError(f"{id_str(v)} is not a vertex of Ob")


def representable(C: InternalCat, v) -> Presheaf:
    """``h_v``: arrows with target ``v``, over their source; left action by precomposition."""
    _check_vertex(C, v)
    Ar = C.ar
    X = Ar.sub([b for b in Ar.dim_of if C.t(Ar.point(b)).base == v])
    proj = SMap(X, C.ob, {b: C.s(Ar.point(b)) for b in X.dim_of})
    return make_presheaf(C, X, proj, lambda x, a: C.comp(a, x), LEFT, f"h_{id_str(v)}")


def corepresentable(C: InternalCat, v) -> Presheaf:
    """``h^v``: arrows with source ``v``, over their target; right action by postcomposition."""
    _check_vertex(C, v)
    Ar = C.ar
    X = Ar.sub([b for b in Ar.dim_of if C.s(Ar.point(b)).base == v])
    proj = SMap(X, C.ob, {b: C.t(Ar.point(b)) for b in X.dim_of})
    return make_presheaf(C, X, proj, lambda x, a: C.comp(x, a), RIGHT, f"h^{id_str(v)}")


def arrows_as_left_module(C: InternalCat) -> Presheaf:
    """``Ar`` over ``Ob`` by the source, acted on by precomposition."""
    return make_presheaf(C, C.ar, C.s, lambda x, a: C.comp(a, x), LEFT, "Ar")


@dataclass
class PresheafMap:
    source: Presheaf
    target: Presheaf
    map: SMap

    def check(self) -> ValidationReport:
        rep = ValidationReport()
        F, G, f = self.source, self.target, self.map
        for v in f.check().violations:
            rep.add("not-simplicial", detail=v)
        if not rep.ok:
            return rep
        C = F.base
        X = F.carrier
        for k in range(X.trunc_dim + 1):
            for x in X.simplices(k):
                px = F.projection(x)
                if G.projection(f(x)) != px:
                    rep.add("projection", simplex=expr_str(x))
                    continue
                for a in C.ar.simplices(k):
                    if (C.s(a) if F.variance == RIGHT else C.t(a)) != px:
                        continue
                    if f(F.act(x, a)) != G.act(f(x), a):
                        rep.add("equivariance", simplex=expr_str(x), arrow=expr_str(a))
        return rep

    def on_fiber(self, c) -> SMap:
        A, B = self.source.fiber(c), self.target.fiber(c)
        return SMap(A, B, {b: self.map(A.point(b)) for b in A.dim_of})


# --- Yoneda ----------------------------------------------------------------------------------

def _module_maps(Hx: Presheaf, n: int, F: Presheaf, limit_count: int | None = None) -> tuple[FinSSet, SMap, list]:
    """Presheaf maps ``Hx x Delta[n] -> F`` (acting on the first factor), by raw enumeration."""
    from .simplicial import enumerate_smaps
    C = Hx.base
    D = C.D
    Dn = standard_simplex(n, D)
    Prod, (p1, p2) = product(Hx.carrier, Dn)
    proj = p1.then(Hx.projection)

    def accept(b, y, partial):
        return F.projection(y) == proj(Prod.point(b))
    found = []
    right = Hx.variance == RIGHT
    for asg in enumerate_smaps(Prod, F.carrier, accept=accept, limit=limit_count):
        phi = SMap(Prod, F.carrier, asg)
        ok = True
        for k in range(D + 1):
            if not ok:
                break
            for y in Prod.simplices(k):
                x, tau = p1(y), p2(y)
                px = Hx.projection(x)
                for a in C.ar.simplices(k):
                    if (C.s(a) if right else C.t(a)) != px:
                        continue
                    moved = tuple_simplex([Hx.act(x, a), tau])
                    if phi(moved) != F.act(phi(y), a):
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            found.append(phi)
    return Prod, proj, found


def _key(f: SMap) -> tuple:
    return tuple(sorted(f.assignment.items(), key=skey))


def yoneda_check(C: InternalCat, v, F: Presheaf, top: int = 1, probe_dim: int = 2) -> dict:
    """Presheaf maps ``h_v x Delta[n] -> F`` against the strict fiber of ``F`` over ``v``, for ``n <= top``.

    Evaluation at ``id_v`` must be a bijection in each dimension and commute with
    faces and degeneracies, which makes it an isomorphism of the truncated objects.
    """
    if F.variance != LEFT:
        raise ValueError("Yoneda for h_v needs a left presheaf")
    H = representable(C, v)
    idv = C.e(C.ob.point(v))
    probe = kan_fibration_probe(F.projection, min(probe_dim, C.D))
    maps, prods = {}, {}
    fib = F.fiber(v)
    per = []
    iso = True
    for n in range(top + 1):
        Prod, _, found = _module_maps(H, n, F)
        prods[n] = Prod
        maps[n] = found
        top_simplex = standard_simplex(n, C.D).point(tuple(range(n + 1)))
        ev = [phi(tuple_simplex([degenerate_to(idv, n), top_simplex])) for phi in found]
        target = [x for x in F.carrier.simplices(n) if F.projection(x).base == v]
        bij = sorted(ev, key=skey) == sorted(target, key=skey)
        per.append({"dim": n, "maps": len(found), "fiber": len(target), "bijection": bij})
        iso &= bij
    # naturality of evaluation along cofaces
    natural = True
    for n in range(1, top + 1):
        index = {_key(phi): phi for phi in maps[n - 1]}
        for i in range(n + 1):
            theta = tuple(j for j in range(n + 1) if j != i)
            shift = product_map([SMap.identity(H.carrier), _delta_map(n - 1, n, theta, C.D)], prods[n - 1], prods[n])
            for phi in maps[n]:
                psi = shift.then(phi)
                if _key(psi) not in index:
                    natural = False
                    continue
                top_prev = standard_simplex(n - 1, C.D).point(tuple(range(n)))
                top_n = standard_simplex(n, C.D).point(tuple(range(n + 1)))
                a = psi(tuple_simplex([degenerate_to(idv, n - 1), top_prev]))
                b = F.carrier.face(phi(tuple_simplex([degenerate_to(idv, n), top_n])), i)
                natural &= a == b
    ok = iso and natural
    verdict = "PASS" if ok and probe.ok else ("ADVISORY" if ok else "FAIL")
    return {"verdict": verdict, "vertex": id_str(v), "presheaf": F.name, "dims": per, "natural": natural,
            "fiber_size": fib.size(), "fibration_probe": probe.to_json()}


# --- f_* and the equivalence criterion -------------------------------------------------------

def equivalence_arrow_map(C: InternalCat, f) -> PresheafMap:
    """``f_*: h_{s(f)} -> h_{t(f)}``, ``a -> a;f`` (postcomposition by ``f``)."""
    fa = C.ar.point(f)
    if fa.dim != 0:
        raise ValueError(f"{id_str(f)} is not a vertex of Ar")
    Hs, Ht = representable(C, C.s(fa).base), representable(C, C.t(fa).base)
    X = Hs.carrier
    asg = {b: C.comp(X.point(b), degenerate_to(fa, X.dim_of[b])) for b in X.dim_of}
    return PresheafMap(Hs, Ht, SMap(X, Ht.carrier, asg))


def arrow_equivalence_report(C: InternalCat, f, hom_bound: int = 1) -> dict:
    """Both sides of the hoequiv criterion for the arrow vertex ``f``."""
    fstar = equivalence_arrow_map(C, f)
    fibers = {}
    strong = True
    for c in C.ob.nondeg[0]:
        g = fstar.on_fiber(c)
        cert = certify_equivalence(g.source, g.target, homology_bound=hom_bound, map=g)
        fibers[id_str(c)] = cert.to_json()
        strong &= cert.proof
    NC = nerve(C, 2)
    Heq, _ = hoequiv(NC)
    in_hoequiv = f in Heq.dim_of
    return {"arrow": id_str(f), "in_hoequiv": in_hoequiv, "fibers_certified": strong, "fibers": fibers,
            "agree": in_hoequiv == strong, "map_valid": fstar.check().ok}


def equivalence_over_components(u: PresheafMap, sample: list, hom_bound: int = 1, probe_dim: int = 2) -> dict:
    """Certify ``u`` on strict fibers over ``sample`` vertices, which must meet every class of pi0(Ob)/~."""
    C = u.source.base
    classes, cls = pi0_mod_equiv(nerve(C, 2))
    hit = {cls[v] for v in sample}
    missed = [c for c in classes if c not in hit]
    if missed:
        return {"verdict": "REJECTED", "missed_class": id_str(missed[0]),
                "reason": "sample does not surject onto pi0(Ob)/~"}
    probes = {name: kan_fibration_probe(F.projection, min(probe_dim, C.D)).ok
              for name, F in (("source", u.source), ("target", u.target))}
    certs = {}
    tiers = []
    for v in sample:
        g = u.on_fiber(v)
        cert = certify_equivalence(g.source, g.target, homology_bound=hom_bound, map=g)
        certs[id_str(v)] = cert.to_json()
        tiers.append(cert)
    if not all(c.ok for c in tiers):
        verdict = "NOT-EQUIVALENCE"
    elif all(c.proof for c in tiers):
        verdict = "EQUIVALENCE"
    else:
        verdict = "HOMOLOGICAL"
    if verdict != "NOT-EQUIVALENCE" and not all(probes.values()):
        verdict = "ADVISORY"
    return {"verdict": verdict, "classes": len(classes), "fibers": certs, "fibration_probes": probes,
            "covers": {id_str(c): sorted(id_str(v) for v in sample if cls[v] == c) for c in classes}}


# --- bar constructions -----------------------------------------------------------------------

@dataclass
class BarObject:
    space: SimpSpace
    F: Presheaf
    G: Presheaf
    augmentation: SMap | None = None
    extra: dict = field(default_factory=dict)

    def realization(self) -> FinSSet:
        return diagonal(self.space)


def bar_resolution(F: Presheaf, G: Presheaf | None = None, M: int = 4) -> BarObject:
    """Two-sided ``B_q(F, C, G) = F x Ar^q x G``; ``G`` defaults to ``Ar`` (the one-sided resolution).

    ``d_0`` acts on ``F``, inner faces compose, ``d_q`` acts on ``G``; ``s_j`` inserts a unit.
    """
    C = F.base
    if F.variance != RIGHT:
        raise ValueError("bar needs a right presheaf F")
    one_sided = G is None
    G = G or arrows_as_left_module(C)
    if G.variance != LEFT:
        raise ValueError("bar coefficient G must be a left presheaf")
    levels = []
    for q in range(M + 1):
        spaces = [F.carrier] + [C.ar] * q + [G.carrier]
        cons = [(0, F.projection, 1, C.s if q else G.projection)]
        for i in range(1, q + 1):
            cons.append((i, C.t, i + 1, C.s if i < q else G.projection))
        levels.append(limit(spaces, cons)[0])

    def face_fn(q, i):
        def fn(p):
            if i == 0:
                new = [F.act(p[0], p[1])] + p[2:]
            elif i == q:
                new = p[:-2] + [G.act(p[-1], p[-2])]
            else:
                new = p[:i] + [C.comp(p[i], p[i + 1])] + p[i + 2:]
            return new
        return fn

    def degen_fn(q, j):
        def fn(p):
            obj = F.projection(p[0]) if j == 0 else C.t(p[j])
            return p[:j + 1] + [C.e(obj)] + p[j + 1:]
        return fn

    def table(src, dst, fn):
        return SMap(src, dst, {b: tuple_simplex(fn(parts(src.point(b)))) for b in src.dim_of})

    faces = {(q, i): table(levels[q], levels[q - 1], face_fn(q, i)) for q in range(1, M + 1) for i in range(q + 1)}
    degens = {(q, j): table(levels[q], levels[q + 1], degen_fn(q, j)) for q in range(M) for j in range(q + 1)}
    X = SimpSpace(levels, faces, degens)
    B = BarObject(X, F, G)
    if one_sided:
        B0 = levels[0]
        B.augmentation = SMap(B0, F.carrier, {b: F.act(*parts(B0.point(b))) for b in B0.dim_of})

        def extra_fn(p):
            return p + [C.e(C.t(p[-1]))]
        B.extra = {q: table(levels[q], levels[q + 1], extra_fn) for q in range(M)}
        B.extra[-1] = SMap(F.carrier, B0, {b: tuple_simplex([F.carrier.point(b), C.e(F.projection(F.carrier.point(b)))])
                                           for b in F.carrier.dim_of})
    return B


def check_extra_degeneracy(B: BarObject) -> dict:
    """Exact identities for the contraction ``s`` of the augmented one-sided bar.

    ``eps s = id``, ``d_{q+1} s = id``, ``d_i s = s d_i`` (``i <= q``, with ``d_0 s = s eps`` at ``q = 0``)
    and ``s_j s = s s_j``.
    """
    X, s = B.space, B.extra
    if not s:
        raise ValueError("extra degeneracy exists only for the one-sided bar")
    failures = []
    if B.augmentation is not None and not (s[-1].then(B.augmentation) == SMap.identity(B.F.carrier)):
        failures.append("eps s = id")
    for q in range(X.M):
        L = X[q]
        if not s[q].then(X.d(q + 1, q + 1)) == SMap.identity(L):
            failures.append(f"d_{q + 1} s = id at level {q}")
        for i in range(q + 1):
            lhs = s[q].then(X.d(q + 1, i))
            rhs = B.augmentation.then(s[-1]) if q == 0 else X.d(q, i).then(s[q - 1])
            if not lhs == rhs:
                failures.append(f"d_{i} s = s d_{i} at level {q}")
        if q + 1 < X.M:
            for j in range(q + 1):
                if not X.s(q, j).then(s[q + 1]) == s[q].then(X.s(q + 1, j)):
                    failures.append(f"s_{j} s = s s_{j} at level {q}")
    return {"ok": not failures, "levels": X.M, "failures": failures}


def bar_homology_check(F: Presheaf, M: int = 4, top: int = 2) -> dict:
    """Homology of the diagonal of the one-sided bar against that of ``F``."""
    B = bar_resolution(F, M=M)
    R = B.realization()
    top = min(top, R.trunc_dim - 1, F.carrier.trunc_dim - 1)
    hb, hf = homology(R, top), homology(F.carrier, top)
    return {"ok": hb == hf, "degree": top, "bar": [g.to_json() for g in hb], "presheaf": [g.to_json() for g in hf]}


# --- base change -----------------------------------------------------------------------------

@dataclass
class BaseChange:
    alpha: ICatMap

    @property
    def C(self) -> InternalCat:
        return self.alpha.source

    @property
    def D(self) -> InternalCat:
        return self.alpha.target

    def pullback(self, F: Presheaf) -> Presheaf:
        """``alpha^* F = F x_Q P`` with the action pulled back along ``alpha``."""
        C, al = self.C, self.alpha
        X, pX, qP = fiber_product(F.projection, al.fo)

        def act(x, a):
            y, p = parts(x)
            moved = F.act(y, al.fa(a))
            return tuple_simplex([moved, C.t(a) if F.variance == RIGHT else C.s(a)])
        return make_presheaf(C, X, qP, act, F.variance, f"alpha^*{F.name}")

    def coefficient(self) -> Presheaf:
        """``P x_Q Ar(D)`` as a left ``C``-presheaf (and a right ``D``-presheaf through ``Ar(D)``)."""
        C, D, al = self.C, self.D, self.alpha
        X, pP, _ = fiber_product(al.fo, D.s)

        def act(x, a):
            p, b = parts(x)
            return tuple_simplex([C.s(a), D.comp(al.fa(a), b)])
        return make_presheaf(C, X, pP, act, LEFT, "P x_Q Ar(D)")

    def pushforward(self, F: Presheaf) -> tuple:
        """Exact ``alpha_! F``: the coequalizer of ``F x Ar(C) x G => F x G`` with ``G = P x_Q Ar(D)``.

        Returns the colimit and the two-level bar it was computed from.
        """
        B = bar_resolution(F, self.coefficient(), M=1)
        X = B.space
        return coequalizer(X.d(1, 0), X.d(1, 1)), B

    def pushforward_representable(self, p) -> dict:
        """``alpha_! h^p`` against ``h^{u(p)}`` (exact comparison)."""
        C, D, al = self.C, self.D, self.alpha
        Hp = corepresentable(C, p)
        col, B = self.pushforward(Hp)
        up = al.fo(C.ob.point(p)).base
        Hu = corepresentable(D, up)
        B0 = B.space[0]

        def value(b):
            x, g = parts(B0.point(b))
            return D.comp(al.fa(x), parts(g)[1])
        cocone = SMap(B0, Hu.carrier, {b: value(b) for b in B0.dim_of})
        cmp = col.induced([cocone], Hu.carrier)
        return {"vertex": id_str(p), "image": id_str(up), "iso": cmp.check().ok and cmp.is_iso(),
                "sizes": [col.space.size(), Hu.carrier.size()]}

    def derived(self, F: Presheaf, M: int = 4, probe_dim: int = 2) -> dict:
        """``L alpha_! F`` as the diagonal of ``B(F, C, P x_Q Ar(D))``."""
        B = bar_resolution(F, self.coefficient(), M=M)
        R = B.realization()
        probes = {"C": strongly_segal_check(self.C, probe_dim)["verdict"],
                  "D": strongly_segal_check(self.D, probe_dim)["verdict"]}
        return {"space": R, "advisory": any(v != "PASS" for v in probes.values()), "probes": probes,
                "valid": validate_sspace(B.space).ok}


def base_change(alpha: ICatMap) -> BaseChange:
    return BaseChange(alpha)
