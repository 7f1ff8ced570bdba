"""Finite, dimension-truncated simplicial sets in Eilenberg-Zilber normal form.

A simplex of the completed object is a pair ``Simplex(base, sigma)`` where
``base`` names a nondegenerate simplex of dimension ``m`` and ``sigma`` is a
monotone surjection ``[n] -> [m]`` stored as a tuple of length ``n + 1``.
The degeneracy word ``s_{i_1} ... s_{i_k}`` (strictly decreasing) is read off
``sigma`` as the positions ``j`` with ``sigma[j] == sigma[j + 1]``.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Iterator, NamedTuple


class Simplex(NamedTuple):
    base: Hashable
    sigma: tuple

    @property
    def dim(self) -> int:
        return len(self.sigma) - 1

    @property
    def nondegenerate(self) -> bool:
        return self.sigma == tuple(range(len(self.sigma)))


def skey(x: Any) -> str:
    """Deterministic sort key for arbitrary (nested) ids."""
    return repr(x)


# --- monotone maps ------------------------------------------------------------

def identity(n: int) -> tuple:
    return tuple(range(n + 1))


def compose(a: tuple, b: tuple) -> tuple:
    """``a o b`` as monotone maps (apply ``b`` first)."""
    return tuple(a[i] for i in b)


def coface(n: int, i: int) -> tuple:
    """delta^i : [n-1] -> [n], skipping ``i``."""
    return tuple(j if j < i else j + 1 for j in range(n))


def codegeneracy(n: int, j: int) -> tuple:
    """sigma^j : [n+1] -> [n], hitting ``j`` twice."""
    return tuple(k if k <= j else k - 1 for k in range(n + 2))


def epi_mono(theta: tuple) -> tuple[tuple, tuple]:
    image = sorted(set(theta))
    pos = {v: k for k, v in enumerate(image)}
    return tuple(pos[v] for v in theta), tuple(image)


def surjections(n: int, m: int) -> Iterator[tuple]:
    """All monotone surjections [n] -> [m]."""
    for jumps in itertools.combinations(range(1, n + 1), m):
        out, level, js = [], 0, set(jumps)
        for i in range(n + 1):
            if i in js:
                level += 1
            out.append(level)
        yield tuple(out)


def monotone_maps(k: int, n: int) -> Iterator[tuple]:
    """All monotone maps [k] -> [n]."""
    return itertools.combinations_with_replacement(range(n + 1), k + 1)


def degeneracy_word(sigma: tuple) -> list[int]:
    return [j for j in range(len(sigma) - 2, -1, -1) if sigma[j] == sigma[j + 1]]


def sigma_from_word(word: Iterable[int], base_dim: int) -> tuple:
    """Surjection for ``s_{i_1} ... s_{i_k}`` applied to a ``base_dim`` simplex."""
    word = list(word)
    if any(a <= b for a, b in zip(word, word[1:])):
        raise ValueError(f"degeneracy word {word} is not strictly decreasing")
    sigma = identity(base_dim)
    for j in reversed(word):
        n = len(sigma) - 1
        if j > n:
            raise ValueError(f"degeneracy s{j} out of range in dimension {n}")
        sigma = compose(sigma, codegeneracy(n, j))
    return sigma


def expr_str(x: Simplex, idfmt: Callable[[Any], str] = None) -> str:
    idfmt = idfmt or id_str
    return " ".join([f"s{j}" for j in degeneracy_word(x.sigma)] + [idfmt(x.base)])


def id_str(x: Any) -> str:
    """Compact, whitespace-free string form of an internal id."""
    if isinstance(x, str):
        return x
    if isinstance(x, Simplex):
        return "[" + ",".join([f"s{j}" for j in degeneracy_word(x.sigma)] + [id_str(x.base)]) + "]"
    if isinstance(x, tuple):
        return "(" + ",".join(id_str(y) for y in x) + ")"
    return str(x)


# --- reports ------------------------------------------------------------------

@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, **detail) -> None:
        self.violations.append({"kind": kind, **{k: str(v) for k, v in detail.items()}})

    def to_json(self) -> dict:
        return {"valid": self.ok, "violations": self.violations}


class TruncationError(ValueError):
    pass


# --- FinSSet --------------------------------------------------------------------

class FinSSet:
    """A finite simplicial set known up to dimension ``trunc_dim``.

    ``nondeg[d]`` lists nondegenerate ``d``-simplices; ``faces[x]`` gives the
    ``d + 1`` faces of a nondegenerate ``x`` (``d >= 1``) as ``Simplex`` values.
    Values are treated as immutable once built.
    """

    def __init__(self, trunc_dim: int, nondeg: dict, faces: dict, coskeletal_above: int | None = None):
        self.trunc_dim = trunc_dim
        self.nondeg = {d: tuple(sorted(nondeg.get(d, ()), key=skey)) for d in range(trunc_dim + 1)}
        self.faces = {k: tuple(v) for k, v in faces.items()}
        self.coskeletal_above = coskeletal_above
        self.dim_of = {}
        for d, xs in self.nondeg.items():
            for x in xs:
                if x in self.dim_of:
                    raise ValueError(f"duplicate simplex id {x!r}")
                self.dim_of[x] = d
        self._inj_cache: dict = {}
        self._simplices_cache: dict = {}
        self._face_index: dict = {}

    def __repr__(self) -> str:
        counts = [len(self.nondeg[d]) for d in range(self.trunc_dim + 1)]
        return f"FinSSet(D={self.trunc_dim}, nondeg={counts})"

    @property
    def D(self) -> int:
        return self.trunc_dim

    def is_empty(self) -> bool:
        return not self.nondeg[0]

    def size(self) -> int:
        return sum(len(v) for v in self.nondeg.values())

    # simplicial operators
    def point(self, x: Hashable) -> Simplex:
        return Simplex(x, identity(self.dim_of[x]))

    def act(self, x: Simplex, theta: tuple) -> Simplex:
        """The simplex ``theta^* x`` for a monotone ``theta : [k] -> [dim x]``."""
        t = tuple(x.sigma[i] for i in theta)
        eps, img = epi_mono(t)
        y = self._inj(x.base, img)
        return Simplex(y.base, compose(y.sigma, eps))

    def _inj(self, b: Hashable, img: tuple) -> Simplex:
        key = (b, img)
        hit = self._inj_cache.get(key)
        if hit is not None:
            return hit
        m = self.dim_of[b]
        if len(img) == m + 1:
            res = Simplex(b, img)
        else:
            present = set(img)
            i = next(j for j in range(m + 1) if j not in present)
            rest = tuple(j if j < i else j - 1 for j in img)
            res = self.act(self.faces[b][i], rest)
        self._inj_cache[key] = res
        return res

    def face(self, x: Simplex, i: int) -> Simplex:
        return self.act(x, coface(x.dim, i))

    def degen(self, x: Simplex, j: int) -> Simplex:
        return Simplex(x.base, compose(x.sigma, codegeneracy(x.dim, j)))

    def all_faces(self, x: Simplex) -> tuple:
        return tuple(self.face(x, i) for i in range(x.dim + 1))

    def vertices(self, x: Simplex) -> tuple:
        return tuple(self.act(x, (i,)).base for i in range(x.dim + 1))

    def simplices(self, n: int) -> tuple:
        """Every ``n``-simplex (degenerate ones included), deterministic order."""
        if n > self.trunc_dim:
            raise TruncationError(f"dimension {n} above truncation {self.trunc_dim}")
        hit = self._simplices_cache.get(n)
        if hit is None:
            out = []
            for m in range(min(n, self.trunc_dim) + 1):
                sig = list(surjections(n, m))
                for b in self.nondeg[m]:
                    out.extend(Simplex(b, s) for s in sig)
            hit = self._simplices_cache[n] = tuple(out)
        return hit

    def face_index(self, n: int) -> dict:
        hit = self._face_index.get(n)
        if hit is None:
            hit = defaultdict(list)
            for y in self.simplices(n):
                hit[self.all_faces(y) if n else ()].append(y)
            self._face_index[n] = hit
        return hit

    def vertex_ids(self) -> tuple:
        return self.nondeg[0]

    # derived objects
    def sub(self, ids: Iterable[Hashable]) -> "FinSSet":
        """Subobject spanned by ``ids``; must be closed under faces."""
        ids = set(ids)
        for x in ids:
            for f in self.faces.get(x, ()):
                if f.base not in ids:
                    raise ValueError(f"subobject not closed under faces at {x!r}")
        return FinSSet(
            self.trunc_dim,
            {d: [x for x in xs if x in ids] for d, xs in self.nondeg.items()},
            {x: self.faces[x] for x in ids if x in self.faces},
            self.coskeletal_above,
        )

    def closure(self, ids: Iterable[Hashable]) -> set:
        out, stack = set(), list(ids)
        while stack:
            x = stack.pop()
            if x in out:
                continue
            out.add(x)
            stack.extend(f.base for f in self.faces.get(x, ()))
        return out

    def truncate(self, d: int) -> "FinSSet":
        return FinSSet(d, {k: v for k, v in self.nondeg.items() if k <= d},
                       {x: f for x, f in self.faces.items() if self.dim_of[x] <= d},
                       self.coskeletal_above)

    def extend(self, new_dim: int) -> "FinSSet":
        """Canonical extension above the truncation for coskeletal objects.

        Simplices above ``trunc_dim`` are the compatible boundary tuples; this is
        only sound when ``coskeletal_above`` is set and below ``trunc_dim``.
        """
        if new_dim <= self.trunc_dim:
            return self.truncate(new_dim)
        c = self.coskeletal_above
        if c is None or c >= self.trunc_dim + 1:
            raise TruncationError("object is not flagged coskeletal below its truncation")
        cur = self
        while cur.trunc_dim < new_dim:
            n = cur.trunc_dim + 1
            nondeg = dict(cur.nondeg)
            faces = dict(cur.faces)
            new = []
            for bd in _boundaries(cur, n):
                # degenerate boundaries already come from degenerate simplices
                if _boundary_is_degenerate(cur, bd):
                    continue
                x = ("cosk", n, bd)
                new.append(x)
                faces[x] = bd
            nondeg[n] = new
            cur = FinSSet(n, nondeg, faces, c)
        return cur

    # equality of data (ids and faces)
    def same_as(self, other: "FinSSet") -> bool:
        return (self.trunc_dim == other.trunc_dim and self.nondeg == other.nondeg
                and self.faces == other.faces)

    # constructors
    @classmethod
    def discrete(cls, points: Iterable[Hashable], D: int) -> "FinSSet":
        return cls(D, {0: list(points)}, {}, coskeletal_above=0)

    @classmethod
    def empty(cls, D: int) -> "FinSSet":
        return cls(D, {}, {}, coskeletal_above=0)

    @classmethod
    def from_full(cls, D: int, cells: Callable[[int], Iterable[Hashable]],
                  face: Callable[[int, Hashable, int], Hashable],
                  degen: Callable[[int, Hashable, int], Hashable],
                  coskeletal_above: int | None = None,
                  label: Callable[[Hashable], Hashable] | None = None) -> tuple["FinSSet", dict]:
        """Build from complete simplicial data given as functions on all cells.

        Returns the object and a dict ``(n, cell) -> Simplex`` giving the EZ form
        of every cell up to ``D``. ``label`` renames nondegenerate cells.
        """
        ez: dict = {}
        nondeg: dict = {}
        faces: dict = {}
        prev: list = []
        for n in range(D + 1):
            cur = list(cells(n))
            deg_from = {}
            if n:
                for y in prev:
                    for j in range(n):
                        z = degen(n - 1, y, j)
                        deg_from.setdefault(z, (y, j))
            nd = []
            for x in cur:
                if x in deg_from:
                    y, j = deg_from[x]
                    e = ez[(n - 1, y)]
                    ez[(n, x)] = Simplex(e.base, compose(e.sigma, codegeneracy(n - 1, j)))
                else:
                    lx = x if label is None else label(x)
                    nd.append((x, lx))
                    ez[(n, x)] = Simplex(lx, identity(n))
            missing = set(deg_from) - set(cur)
            if missing:
                raise ValueError(f"degeneracy lands outside the declared {n}-cells: {sorted(missing, key=skey)[:3]}")
            nondeg[n] = [lx for _, lx in nd]
            if n:
                for x, lx in nd:
                    faces[lx] = tuple(ez[(n - 1, face(n, x, i))] for i in range(n + 1))
            prev = cur
        return cls(D, nondeg, faces, coskeletal_above), ez


def _boundaries(X: FinSSet, n: int) -> Iterator[tuple]:
    """Compatible (n+1)-tuples of (n-1)-simplices (maps from the boundary of Delta[n])."""
    cands = X.simplices(n - 1)

    def rec(prefix):
        j = len(prefix)
        if j == n + 1:
            yield tuple(prefix)
            return
        for y in cands:
            if all(X.face(prefix[i], j - 1) == X.face(y, i) for i in range(j)):
                prefix.append(y)
                yield from rec(prefix)
                prefix.pop()
    yield from rec([])


def _boundary_is_degenerate(X: FinSSet, bd: tuple) -> bool:
    n = len(bd) - 1
    for y in X.simplices(n - 1):
        for j in range(n - 1 + 1):
            z = X.degen(y, j)
            if X.all_faces(z) == bd:
                return True
    return False


# --- standard objects -----------------------------------------------------------

def standard_simplex(n: int, D: int, keep: Callable[[tuple], bool] | None = None) -> FinSSet:
    """Delta[n] (or a face-closed subobject selected by ``keep``); ids are vertex tuples."""
    nondeg, faces = {}, {}
    for d in range(min(n, D) + 1):
        xs = [c for c in itertools.combinations(range(n + 1), d + 1) if keep is None or keep(c)]
        nondeg[d] = xs
        if d:
            for c in xs:
                faces[c] = tuple(Simplex(c[:i] + c[i + 1:], identity(d - 1)) for i in range(d + 1))
    return FinSSet(D, nondeg, faces, coskeletal_above=0)


def boundary(n: int, D: int) -> FinSSet:
    return standard_simplex(n, D, keep=lambda c: len(c) <= n)


def horn(n: int, k: int, D: int) -> FinSSet:
    full = tuple(range(n + 1))
    missing = full[:k] + full[k + 1:]
    return standard_simplex(n, D, keep=lambda c: c != full and c != missing)


def point(D: int) -> FinSSet:
    return standard_simplex(0, D)


def simplex_of_vertices(vs: tuple) -> Simplex:
    """The simplex of Delta[N] with vertex sequence ``vs`` (monotone), in EZ form."""
    base, sigma = epi_mono(tuple(vs))
    return Simplex(sigma, base)


def ordinary_nerve(cat, D: int) -> FinSSet:
    """Nerve of a finite ordinary category as a single simplicial set.

    Nondegenerate ``d``-simplices are chains of ``d`` non-identity composable
    arrows (ids: tuples of arrows; vertices: objects).
    """
    nondeg = {0: list(cat.objects)}
    faces = {}
    non_id = [a for a in cat.arrows if not cat.is_identity(a)]
    chains = [()]
    for d in range(1, D + 1):
        nxt = []
        for ch in chains:
            for a in non_id:
                if not ch or cat.tgt[ch[-1]] == cat.src[a]:
                    nxt.append(ch + (a,))
        chains = nxt
        nondeg[d] = [ch for ch in chains]
        for ch in chains:
            faces[ch] = tuple(_nerve_face(cat, ch, i) for i in range(d + 1))
    return FinSSet(D, nondeg, faces, coskeletal_above=1)


def _nerve_face(cat, ch: tuple, i: int) -> Simplex:
    d = len(ch)
    if d == 1:
        return Simplex(cat.tgt[ch[0]] if i == 0 else cat.src[ch[0]], (0,))
    if i == 0:
        new = list(ch[1:])
    elif i == d:
        new = list(ch[:-1])
    else:
        new = list(ch[:i - 1]) + [cat.comp[(ch[i - 1], ch[i])]] + list(ch[i + 1:])
    return _chain_simplex(cat, new)


def _chain_simplex(cat, chain: list) -> Simplex:
    """EZ form of a chain of arrows in the ordinary nerve (identities become degeneracies)."""
    if not chain:
        raise ValueError("empty chain")
    kept, sigma, level = [], [0], 0
    for a in chain:
        if cat.is_identity(a):
            sigma.append(level)
        else:
            kept.append(a)
            level += 1
            sigma.append(level)
    if not kept:
        return Simplex(cat.src[chain[0]], tuple(sigma))
    return Simplex(tuple(kept), tuple(sigma))


# --- validation -------------------------------------------------------------------

def validate(x: FinSSet) -> ValidationReport:
    rep = ValidationReport()
    for d in range(1, x.trunc_dim + 1):
        for s in x.nondeg[d]:
            fs = x.faces.get(s)
            if fs is None or len(fs) != d + 1:
                rep.add("face-count", simplex=s, dim=d)
                continue
            for i, f in enumerate(fs):
                if f.base not in x.dim_of:
                    rep.add("missing-face", simplex=s, face=i, target=f.base)
                elif x.dim_of[f.base] != len(f.sigma) - 1 - _word_len(f.sigma) or len(f.sigma) != d:
                    rep.add("face-dimension", simplex=s, face=i)
                elif sorted(set(f.sigma)) != list(range(x.dim_of[f.base] + 1)) or list(f.sigma) != sorted(f.sigma):
                    rep.add("face-not-normal", simplex=s, face=i)
    if not rep.ok:
        return rep
    for d in range(2, x.trunc_dim + 1):
        for s in x.simplices(d):
            for j in range(d + 1):
                for i in range(j):
                    a = x.face(x.face(s, j), i)
                    b = x.face(x.face(s, i), j - 1)
                    if a != b:
                        rep.add("simplicial-identity", simplex=expr_str(s), i=i, j=j, lhs=expr_str(a), rhs=expr_str(b))
    return rep


def _word_len(sigma: tuple) -> int:
    return len(degeneracy_word(sigma))


# --- maps ---------------------------------------------------------------------------

class SMap:
    """Simplicial map given on nondegenerate simplices of the source."""

    def __init__(self, source: FinSSet, target: FinSSet, assignment: dict):
        self.source = source
        self.target = target
        self.assignment = assignment

    def __repr__(self) -> str:
        return f"SMap({self.source!r} -> {self.target!r})"

    def __call__(self, x: Simplex) -> Simplex:
        y = self.assignment[x.base]
        return Simplex(y.base, compose(y.sigma, x.sigma))

    def __eq__(self, other) -> bool:
        return isinstance(other, SMap) and self.assignment == other.assignment

    __hash__ = None

    def then(self, g: "SMap") -> "SMap":
        """``g o self``."""
        return SMap(self.source, g.target, {b: g(y) for b, y in self.assignment.items()})

    @classmethod
    def from_function(cls, source: FinSSet, target: FinSSet, fn: Callable[[Simplex], Simplex]) -> "SMap":
        return cls(source, target, {b: fn(source.point(b)) for b in source.dim_of})

    @classmethod
    def identity(cls, X: FinSSet) -> "SMap":
        return cls(X, X, {b: X.point(b) for b in X.dim_of})

    @classmethod
    def constant(cls, X: FinSSet, Y: FinSSet, v: Hashable) -> "SMap":
        return cls(X, Y, {b: Simplex(v, (0,) * (d + 1)) for b, d in X.dim_of.items()})

    def check(self) -> ValidationReport:
        rep = ValidationReport()
        for b, y in self.assignment.items():
            d = self.source.dim_of[b]
            if y.dim != d:
                rep.add("dimension", simplex=b)
                continue
            if y.base not in self.target.dim_of:
                rep.add("missing-target", simplex=b, target=y.base)
                continue
            for i, f in enumerate(self.source.faces.get(b, ())):
                if self(f) != self.target.face(y, i):
                    rep.add("face-commutation", simplex=b, face=i)
        missing = set(self.source.dim_of) - set(self.assignment)
        for b in sorted(missing, key=skey):
            rep.add("unassigned", simplex=b)
        return rep

    def is_injective(self) -> bool:
        seen = set()
        for y in self.assignment.values():
            if not y.nondegenerate or y.base in seen:
                return False
            seen.add(y.base)
        return True

    def is_iso(self) -> bool:
        return self.is_injective() and len(self.assignment) == len(self.target.dim_of)

    def inverse(self) -> "SMap":
        if not self.is_iso():
            raise ValueError("map is not an isomorphism")
        return SMap(self.target, self.source, {y.base: self.source.point(b) for b, y in self.assignment.items()})

    def image_ids(self) -> set:
        return {y.base for y in self.assignment.values()}


def enumerate_smaps(X: FinSSet, Y: FinSSet, accept: Callable[[Hashable, Simplex, dict], bool] | None = None,
                    forced: dict | None = None, rng=None, limit: int | None = None) -> Iterator[dict]:
    """Yield every simplicial map ``X -> Y`` as an assignment dict.

    ``accept(b, y, partial)`` prunes candidates; ``forced`` pins values.
    ``rng`` shuffles candidate order (seeded random search).
    """
    order = [b for d in range(X.trunc_dim + 1) for b in X.nondeg[d]]
    forced = forced or {}
    assign: dict = {}
    count = [0]

    def image(f: Simplex) -> Simplex:
        y = assign[f.base]
        return Simplex(y.base, compose(y.sigma, f.sigma))

    def rec(k: int):
        if limit is not None and count[0] >= limit:
            return
        if k == len(order):
            count[0] += 1
            yield dict(assign)
            return
        b = order[k]
        d = X.dim_of[b]
        if d == 0:
            cands = Y.simplices(0)
        else:
            cands = Y.face_index(d).get(tuple(image(f) for f in X.faces[b]), ())
        if b in forced:
            cands = [c for c in cands if c == forced[b]]
        elif rng is not None:
            cands = list(cands)
            rng.shuffle(cands)
        for y in cands:
            if accept is not None and not accept(b, y, assign):
                continue
            assign[b] = y
            yield from rec(k + 1)
            del assign[b]

    if X.trunc_dim > Y.trunc_dim:
        raise TruncationError("source truncation exceeds target truncation")
    yield from rec(0)
