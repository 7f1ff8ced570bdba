"""Simplicial spaces: levels ``X_0 .. X_M`` (finite simplicial sets) with outer operators."""
from __future__ import annotations

from typing import Callable, Hashable, Iterator, Sequence

from .certify import Certificate, certify_equivalence
from .categories import FinCat
from .kan import kan_fibration_probe
from .limits import (ColimitResult, UnionFind, colimit, fiber_power, fiber_product, limit_map, pi0,
                     product, product_map)
from .simplicial import (FinSSet, SMap, Simplex, TruncationError, ValidationReport, codegeneracy, degeneracy_word,
                         enumerate_smaps, epi_mono, id_str, skey, surjections)


class SimpSpace:
    """``faces[(m, i)]: X_m -> X_{m-1}`` and ``degens[(m, j)]: X_m -> X_{m+1}``."""

    def __init__(self, levels: Sequence[FinSSet], faces: dict, degens: dict):
        self.levels = list(levels)
        self.faces = faces
        self.degens = degens
        self.meta: dict = {}

    def __repr__(self) -> str:
        return f"SimpSpace(M={self.M}, levels={[lv.size() for lv in self.levels]})"

    @property
    def M(self) -> int:
        return len(self.levels) - 1

    @property
    def D(self) -> int:
        return self.levels[0].trunc_dim

    def __getitem__(self, m: int) -> FinSSet:
        return self.levels[m]

    def d(self, m: int, i: int) -> SMap:
        return self.faces[(m, i)]

    def s(self, m: int, j: int) -> SMap:
        return self.degens[(m, j)]

    def outer(self, theta: tuple, m: int) -> Callable[[Simplex], Simplex]:
        """``theta^*: X_m -> X_k`` for monotone ``theta: [k] -> [m]``, as a function on simplices."""
        eps, img = epi_mono(theta)
        steps = []
        cur = m
        for i in sorted(set(range(m + 1)) - set(img), reverse=True):
            steps.append(self.faces[(cur, i)])
            cur -= 1
        for j in sorted(degeneracy_word(eps)):
            steps.append(self.degens[(cur, j)])
            cur += 1

        def run(x):
            for f in steps:
                x = f(x)
            return x
        return run

    def outer_map(self, theta: tuple, m: int) -> SMap:
        fn = self.outer(theta, m)
        k = len(theta) - 1
        return SMap(self.levels[m], self.levels[k], {b: fn(self.levels[m].point(b)) for b in self.levels[m].dim_of})

    def truncate(self, M: int) -> "SimpSpace":
        return SimpSpace(self.levels[:M + 1], {k: v for k, v in self.faces.items() if k[0] <= M},
                         {k: v for k, v in self.degens.items() if k[0] < M})

    # constructors
    @classmethod
    def constant(cls, K: FinSSet, M: int) -> "SimpSpace":
        idm = SMap.identity(K)
        return cls([K] * (M + 1), {(m, i): idm for m in range(1, M + 1) for i in range(m + 1)},
                   {(m, j): idm for m in range(M) for j in range(m + 1)})

    @classmethod
    def discrete(cls, M: int, D: int, elements: Callable[[int], list],
                 face: Callable[[int, Hashable, int], Hashable],
                 degen: Callable[[int, Hashable, int], Hashable]) -> "SimpSpace":
        """Levelwise-discrete simplicial space from an ordinary simplicial set."""
        levels = [FinSSet.discrete(elements(m), D) for m in range(M + 1)]
        faces = {(m, i): SMap(levels[m], levels[m - 1], {x: Simplex(face(m, x, i), (0,)) for x in levels[m].nondeg[0]})
                 for m in range(1, M + 1) for i in range(m + 1)}
        degens = {(m, j): SMap(levels[m], levels[m + 1], {x: Simplex(degen(m, x, j), (0,)) for x in levels[m].nondeg[0]})
                  for m in range(M) for j in range(m + 1)}
        return cls(levels, faces, degens)


def validate_sspace(X: SimpSpace) -> ValidationReport:
    rep = ValidationReport()
    if len({lv.trunc_dim for lv in X.levels}) != 1:
        rep.add("truncation", detail="levels have different trunc_dim")
        return rep
    for key, f in list(X.faces.items()) + list(X.degens.items()):
        r = f.check()
        if not r.ok:
            rep.add("outer-operator", operator=key, detail=r.violations[0])
    if not rep.ok:
        return rep
    M = X.M

    def eq(a: list, b: list, m: int, what: str):
        L = X.levels[m]
        for x in L.dim_of:
            p = q = L.point(x)
            for f in a:
                p = f(p)
            for f in b:
                q = f(q)
            if p != q:
                rep.add("outer-identity", identity=what, level=m, simplex=id_str(x))
                return
    for m in range(2, M + 1):
        for j in range(m + 1):
            for i in range(j):
                eq([X.d(m, j), X.d(m - 1, i)], [X.d(m, i), X.d(m - 1, j - 1)], m, f"d{i}d{j}=d{j-1}d{i}")
    for m in range(M):
        for j in range(m + 1):
            s = X.s(m, j)
            eq([s, X.d(m + 1, j)], [], m, f"d{j}s{j}=id")
            eq([s, X.d(m + 1, j + 1)], [], m, f"d{j+1}s{j}=id")
            for i in range(m + 2):
                if i < j:
                    eq([s, X.d(m + 1, i)], [X.d(m, i), X.s(m - 1, j - 1)], m, f"d{i}s{j}")
                elif i > j + 1:
                    eq([s, X.d(m + 1, i)], [X.d(m, i - 1), X.s(m - 1, j)], m, f"d{i}s{j}")
            if m + 1 < M:
                for i in range(j + 1):
                    eq([s, X.s(m + 1, i)], [X.s(m, i), X.s(m + 1, j + 1)], m, f"s{i}s{j}")
    return rep


class SSMap:
    def __init__(self, source: SimpSpace, target: SimpSpace, maps: Sequence[SMap]):
        self.source = source
        self.target = target
        self.maps = list(maps)

    def __getitem__(self, m: int) -> SMap:
        return self.maps[m]

    def then(self, g: "SSMap") -> "SSMap":
        return SSMap(self.source, g.target, [a.then(b) for a, b in zip(self.maps, g.maps)])

    @classmethod
    def identity(cls, X: SimpSpace) -> "SSMap":
        return cls(X, X, [SMap.identity(lv) for lv in X.levels])

    def check(self) -> ValidationReport:
        rep = ValidationReport()
        X, Y = self.source, self.target
        for m, f in enumerate(self.maps):
            r = f.check()
            if not r.ok:
                rep.add("level-map", level=m, detail=r.violations[0])
        if not rep.ok:
            return rep
        for (m, i), d in X.faces.items():
            for b in X[m].dim_of:
                p = X[m].point(b)
                if self.maps[m - 1](d(p)) != Y.d(m, i)(self.maps[m](p)):
                    rep.add("naturality", operator=f"d{i}", level=m, simplex=id_str(b))
        for (m, j), s in X.degens.items():
            for b in X[m].dim_of:
                p = X[m].point(b)
                if self.maps[m + 1](s(p)) != Y.s(m, j)(self.maps[m](p)):
                    rep.add("naturality", operator=f"s{j}", level=m, simplex=id_str(b))
        return rep

    def is_iso(self) -> bool:
        return all(f.is_iso() for f in self.maps)


def enumerate_ssmaps(X: SimpSpace, Y: SimpSpace, limit: int | None = None) -> Iterator[SSMap]:
    """All maps of (outer-truncated) simplicial spaces ``X -> Y``."""
    M = min(X.M, Y.M)
    found = [0]
    maps: list = []

    def level(m):
        if limit is not None and found[0] >= limit:
            return
        if m > M:
            found[0] += 1
            yield SSMap(X, Y, list(maps))
            return
        forced = {}
        if m:
            prev = maps[m - 1]
            for j in range(m):
                for z in X[m - 1].dim_of:
                    w = X.s(m - 1, j)(X[m - 1].point(z))
                    if w.nondegenerate:
                        forced[w.base] = Y.s(m - 1, j)(prev(X[m - 1].point(z)))

            def accept(b, y, partial):
                p = X[m].point(b)
                return all(Y.d(m, i)(y) == prev(X.d(m, i)(p)) for i in range(m + 1))
        else:
            accept = None
        for assignment in enumerate_smaps(X[m], Y[m], accept=accept, forced=forced):
            f = SMap(X[m], Y[m], assignment)
            if m and not all(f(X.s(m - 1, j)(X[m - 1].point(z))) == Y.s(m - 1, j)(maps[m - 1](X[m - 1].point(z)))
                             for j in range(m) for z in X[m - 1].dim_of):
                continue
            maps.append(f)
            yield from level(m + 1)
            maps.pop()
    yield from level(0)


# --- representing objects -------------------------------------------------------------

def _delete(x: tuple, i: int) -> tuple:
    return x[:i] + x[i + 1:]


def _dup(x: tuple, j: int) -> tuple:
    return x[:j + 1] + x[j:]


def _monotone(m: int, n: int) -> list:
    import itertools
    return list(itertools.combinations_with_replacement(range(n + 1), m + 1))


def make_F(n: int, M: int = 3, D: int = 3) -> SimpSpace:
    """F(n): level m is the discrete set of monotone maps [m] -> [n]."""
    X = SimpSpace.discrete(M, D, lambda m: _monotone(m, n), lambda m, x, i: _delete(x, i), lambda m, x, j: _dup(x, j))
    X.meta["representing"] = ("F", n)
    return X


def make_G(n: int, M: int = 3, D: int = 3) -> tuple[SimpSpace, SSMap]:
    """The spine G(n) with its inclusion into F(n)."""
    def els(m):
        return [x for x in _monotone(m, n) if x[-1] - x[0] <= 1]
    G = SimpSpace.discrete(M, D, els, lambda m, x, i: _delete(x, i), lambda m, x, j: _dup(x, j))
    F = make_F(n, M, D)
    inc = SSMap(G, F, [SMap(G[m], F[m], {x: Simplex(x, (0,)) for x in G[m].nondeg[0]}) for m in range(M + 1)])
    G.meta["spine"] = n
    return G, inc


def make_E(M: int = 3, D: int = 3) -> SimpSpace:
    """Nerve of the walking isomorphism I[1]: level m has 2^(m+1) points."""
    import itertools
    X = SimpSpace.discrete(M, D, lambda m: list(itertools.product((0, 1), repeat=m + 1)),
                           lambda m, x, i: _delete(x, i), lambda m, x, j: _dup(x, j))
    X.meta["outer_coskeletal_above"] = 0
    return X


def sspace_product(X: SimpSpace, Y: SimpSpace) -> SimpSpace:
    levels = [product(a, b)[0] for a, b in zip(X.levels, Y.levels)]
    faces = {k: product_map([X.faces[k], Y.faces[k]], levels[k[0]], levels[k[0] - 1]) for k in X.faces if k in Y.faces}
    degens = {k: product_map([X.degens[k], Y.degens[k]], levels[k[0]], levels[k[0] + 1])
              for k in X.degens if k in Y.degens}
    return SimpSpace(levels, faces, degens)


def times_simplex(X: SimpSpace, K: FinSSet) -> SimpSpace:
    """``X x K`` with ``K`` constant in the outer direction."""
    return sspace_product(X, SimpSpace.constant(K, X.M))


# --- Segal maps and homotopy-cartesian squares --------------------------------------

def spine_edge(n: int, i: int) -> tuple:
    return (i, i + 1)


def segal_map(X: SimpSpace, n: int) -> tuple[SMap, FinSSet]:
    """``X_n -> X_1 x_{X_0} ... x_{X_0} X_1`` (edge ``i`` is ``i -> i+1``)."""
    if n > X.M:
        raise TruncationError(f"level {n} above outer truncation {X.M}")
    if n == 0:
        return SMap.identity(X[0]), X[0]
    if n == 1:
        return SMap.identity(X[1]), X[1]
    P, _ = fiber_power(X[1], X.d(1, 0), X.d(1, 1), n)
    edges = [X.outer(spine_edge(n, i), n) for i in range(n)]
    from .limits import tuple_simplex
    f = SMap(X[n], P, {b: tuple_simplex([e(X[n].point(b)) for e in edges]) for b in X[n].dim_of})
    return f, P


def segal_check(X: SimpSpace, n_max: int | None = None) -> dict:
    n_max = X.M if n_max is None else n_max
    out = {}
    for n in range(2, n_max + 1):
        f, _ = segal_map(X, n)
        out[n] = f.is_iso()
    return out


class Square:
    """Commutative square ``A -top-> B``, ``A -left-> C``, ``B -right-> Z``, ``C -bottom-> Z``."""

    def __init__(self, top: SMap, left: SMap, right: SMap, bottom: SMap):
        self.top, self.left, self.right, self.bottom = top, left, right, bottom

    def commutes(self) -> bool:
        return self.top.then(self.right) == self.left.then(self.bottom)


def homotopy_cartesian_probe(sq: Square, fib_bound: int, hom_bound: int) -> dict:
    if not sq.commutes():
        raise ValueError("square does not commute")
    probe = kan_fibration_probe(sq.right, fib_bound)
    if not probe.ok:
        return {"verdict": "INCONCLUSIVE-LEG", "fibration": probe.to_json(), "certificate": None}
    P, p_c, p_b = fiber_product(sq.bottom, sq.right)
    comparison = limit_map(P, [sq.left, sq.top])
    cert = certify_equivalence(sq.top.source, P, homology_bound=hom_bound, map=comparison)
    return {"verdict": "PASS" if cert.ok else "FAIL", "fibration": probe.to_json(),
            "certificate": cert.to_json(), "cert": cert}


def segal_square(X: SimpSpace) -> Square:
    """``X_2 -> X_1`` (d_0) over ``X_1 -> X_0`` (d_1), with ``d_2`` and ``d_0`` on the other sides."""
    return Square(top=X.d(2, 0), left=X.d(2, 2), right=X.d(1, 1), bottom=X.d(1, 0))


# --- latching objects and realization -------------------------------------------------

def latching(X: SimpSpace, r: int) -> tuple[FinSSet, SMap, ColimitResult | None]:
    """``L_r X``: colimit of ``X_n`` over surjections ``[r] -> [n]``, ``n < r``, and its map to ``X_r``."""
    if r > X.M:
        raise TruncationError(f"latching object L_{r} needs level {r}")
    D = X.D
    if r == 0:
        E = FinSSet.empty(D)
        return E, SMap(E, X[0], {}), None
    sigmas = [s for n in range(r) for s in surjections(r, n)]
    pos = {s: k for k, s in enumerate(sigmas)}
    objects = [X[max(s)] for s in sigmas]
    relations = []
    for s in sigmas:
        n = max(s)
        for j in range(n):
            s2 = tuple(codegeneracy(n - 1, j)[v] for v in s)
            relations.append((SMap.identity(X[n - 1]), pos[s2], X.s(n - 1, j), pos[s]))
    col = colimit(objects, relations)
    cocone = [X.outer_map(s, max(s)) for s in sigmas]
    return col.space, col.induced(cocone, X[r]), col


def diagonal(X: SimpSpace) -> FinSSet:
    """The diagonal simplicial set (realization), truncated at ``min(M, D)``."""
    top = min(X.M, X.D)

    def face(d, x, i):
        return X[d - 1].face(X.d(d, i)(x), i)

    def degen(d, x, j):
        return X[d + 1].degen(X.s(d, j)(x), j)

    Dg, _ = FinSSet.from_full(top, lambda d: X[d].simplices(d), face, degen, label=None)
    return Dg


def sspace_colimit(objects: Sequence[SimpSpace], relations: Sequence[tuple]) -> tuple[SimpSpace, list]:
    """Levelwise colimit; ``relations`` holds ``(f, i, g, j)`` with SSMaps ``f, g`` from a common source."""
    M = min(X.M for X in objects)
    cols = [colimit([X[m] for X in objects], [(f[m], i, g[m], j) for f, i, g, j in relations])
            for m in range(M + 1)]
    levels = [c.space for c in cols]
    faces, degens = {}, {}
    for m in range(1, M + 1):
        for i in range(m + 1):
            faces[(m, i)] = cols[m].induced([X.d(m, i).then(cols[m - 1].injections[k]) for k, X in enumerate(objects)],
                                            levels[m - 1])
    for m in range(M):
        for j in range(m + 1):
            degens[(m, j)] = cols[m].induced([X.s(m, j).then(cols[m + 1].injections[k]) for k, X in enumerate(objects)],
                                             levels[m + 1])
    Y = SimpSpace(levels, faces, degens)
    injections = [SSMap(X, Y, [cols[m].injections[k] for m in range(M + 1)]) for k, X in enumerate(objects)]
    Y.meta["colimit_levels"] = cols
    return Y, injections


def sspace_pushout(f: SSMap, g: SSMap) -> tuple[SimpSpace, list]:
    return sspace_colimit([f.target, g.target], [(f, 0, g, 1)])


def colimit_induced(Y: SimpSpace, cocone: Sequence[SSMap], target: SimpSpace) -> SSMap:
    cols = Y.meta["colimit_levels"]
    return SSMap(Y, target, [cols[m].induced([c[m] for c in cocone], target[m]) for m in range(Y.M + 1)])


# --- homotopy category ------------------------------------------------------------------

def mapping_fiber(X: SimpSpace, x: Hashable, y: Hashable) -> FinSSet:
    """``map_X(x, y)``: simplices of ``X_1`` with source (d_1) ``x`` and target (d_0) ``y``."""
    L1 = X[1]
    src, tgt = X.d(1, 1), X.d(1, 0)
    keep = []
    for b, d in L1.dim_of.items():
        p, zero = L1.point(b), (0,) * (d + 1)
        if src(p) == Simplex(x, zero) and tgt(p) == Simplex(y, zero):
            keep.append(b)
    return L1.sub(keep)


class HoCat(FinCat):
    """Ho(X) as a finite category; arrows are ``(x, y, component)``; ``cls`` maps X_1 vertices to arrows."""

    def __init__(self, objects, arrows, src, tgt, ident, comp, cls):
        super().__init__(objects, arrows, src, tgt, ident, comp)
        self.cls = cls


class HoError(ValueError):
    pass


def ho_category(X: SimpSpace) -> HoCat:
    if X.M < 2 or X.D < 1:
        raise TruncationError("Ho(X) needs outer levels 0..2 and inner 1-simplices")
    objects = list(X[0].nondeg[0])
    cls = {}
    for x in objects:
        for y in objects:
            fib = mapping_fiber(X, x, y)
            if fib.is_empty():
                continue
            _, comp_of = pi0(fib)
            for v in fib.nondeg[0]:
                cls[v] = (x, y, comp_of[v])
    arrows = sorted(set(cls.values()), key=skey)
    src = {a: a[0] for a in arrows}
    tgt = {a: a[1] for a in arrows}
    ident = {x: cls[X.s(0, 0)(X[0].point(x)).base] for x in objects}
    comp = {}
    fillers = {}
    for w in X[2].nondeg[0]:
        p = X[2].point(w)
        f, g, h = cls[X.d(2, 2)(p).base], cls[X.d(2, 0)(p).base], cls[X.d(2, 1)(p).base]
        fillers.setdefault((f, g), h)
    for f in arrows:
        for g in arrows:
            if f[1] != g[0]:
                continue
            if (f, g) not in fillers:
                raise HoError(f"no 2-simplex fills the composable pair {id_str(f)} ; {id_str(g)}")
            comp[(f, g)] = fillers[(f, g)]
    H = HoCat(objects, arrows, src, tgt, ident, comp, cls)
    errs = H.validate()
    if errs:
        raise HoError("homotopy category table is not a category: " + errs[0])
    return H


def hoequiv(X: SimpSpace, H: HoCat | None = None) -> tuple[FinSSet, list]:
    """Union of the components of ``X_1`` whose arrows are invertible in Ho(X)."""
    H = H or ho_category(X)
    L1 = X[1]
    ids, comp_of = pi0(L1)
    inv = {c: True for c in ids}
    for v in L1.nondeg[0]:
        if H.inverse(H.cls[v]) is None:
            inv[comp_of[v]] = False
    chosen = [c for c in ids if inv[c]]
    keep = [b for b in L1.dim_of if inv[comp_of[L1.vertices(L1.point(b))[0]]]]
    return L1.sub(keep), chosen


def pi0_mod_equiv(X: SimpSpace, H: HoCat | None = None) -> tuple[list, dict]:
    """Classes of ``pi0(X_0)`` modulo ``x ~ y`` when some equivalence joins them."""
    Heq, _ = hoequiv(X, H)
    ids, comp0 = pi0(X[0])
    uf = UnionFind()
    for c in ids:
        uf.add(c)
    for v in Heq.nondeg[0]:
        p = X[1].point(v)
        uf.union(comp0[X.d(1, 1)(p).base], comp0[X.d(1, 0)(p).base])
    cls = {v: uf.find(comp0[v]) for v in X[0].nondeg[0]}
    return sorted(set(cls.values()), key=skey), cls


def completeness_check(X: SimpSpace, hom_bound: int = 1) -> Certificate:
    """Certify the degeneracy ``X_0 -> hoequiv`` (the Rezk condition)."""
    Heq, _ = hoequiv(X)
    s0 = X.s(0, 0)
    f = SMap(X[0], Heq, dict(s0.assignment))
    return certify_equivalence(X[0], Heq, homology_bound=hom_bound, map=f)


def fiber_map(f: SSMap, x: Hashable, y: Hashable) -> SMap:
    A = mapping_fiber(f.source, x, y)
    fx = f[0](f.source[0].point(x)).base
    fy = f[0](f.source[0].point(y)).base
    B = mapping_fiber(f.target, fx, fy)
    return SMap(A, B, {b: f[1](A.point(b)) for b in A.dim_of})


def dk_check(f: SSMap, hom_bound: int = 1) -> dict:
    X, Y = f.source, f.target
    fibers = {}
    ff = True
    first_bad = None
    for x in X[0].nondeg[0]:
        for y in X[0].nondeg[0]:
            g = fiber_map(f, x, y)
            cert = certify_equivalence(g.source, g.target, homology_bound=hom_bound, map=g)
            fibers[f"{id_str(x)}->{id_str(y)}"] = cert.to_json()
            if not cert.ok:
                ff = False
                first_bad = first_bad or {"pair": [id_str(x), id_str(y)], "certificate": cert.to_json()}
    cx, clx = pi0_mod_equiv(X)
    cy, cly = pi0_mod_equiv(Y)
    hit = {cly[f[0](X[0].point(v)).base] for v in X[0].nondeg[0]}
    missed = [c for c in cy if c not in hit]
    es = not missed
    return {
        "verdict": "DK" if ff and es else "NOT-DK",
        "fully_faithful": ff,
        "fully_faithful_witness": first_bad,
        "fibers": fibers,
        "essentially_surjective": es,
        "essential_witness": {"missed_class": id_str(missed[0])} if missed else None,
        "pi0_mod_equiv": [len(cx), len(cy)],
    }
