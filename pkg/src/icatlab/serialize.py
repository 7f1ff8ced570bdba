"""JSON documents for the toolkit's objects.

Ids are written with :func:`id_str`; a parsed object uses those strings as its
ids, so a round trip preserves structure up to renaming.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

from .simplicial import FinSSet, SMap, Simplex, expr_str, id_str, sigma_from_word, skey, validate


class DocumentError(ValueError):
    """A document that does not parse as the declared kind; the message names the path."""


def canonical(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def content_hash(doc: Any) -> str:
    return hashlib.sha256(canonical(doc).encode()).hexdigest()


def _sorted_ids(X: FinSSet, d: int) -> list:
    return sorted(X.nondeg.get(d, ()), key=id_str)


# --- sset ----------------------------------------------------------------------------------

def sset_to_json(X: FinSSet) -> dict:
    simp = {}
    for d in range(X.trunc_dim + 1):
        rows = []
        for b in _sorted_ids(X, d):
            row = {"id": id_str(b)}
            if d:
                row["faces"] = [expr_str(f) for f in X.faces[b]]
            rows.append(row)
        simp[str(d)] = rows
    return {"kind": "sset", "trunc_dim": X.trunc_dim, "coskeletal_above": X.coskeletal_above, "simplices": simp}


def _need(doc: Any, key: str, where: str, typ=None):
    if not isinstance(doc, dict) or key not in doc:
        raise DocumentError(f"{where}: missing key '{key}'")
    val = doc[key]
    if typ is not None and not isinstance(val, typ):
        raise DocumentError(f"{where}.{key}: expected {typ.__name__ if isinstance(typ, type) else typ}")
    return val


def _kind(doc: Any, kind: str, where: str) -> None:
    got = doc.get("kind") if isinstance(doc, dict) else None
    if got != kind:
        raise DocumentError(f"{where}: expected kind '{kind}', found '{got}'")


def parse_expr(text: str, dims: dict, where: str) -> Simplex:
    parts = str(text).split()
    if not parts:
        raise DocumentError(f"{where}: empty simplex expression")
    base, word = parts[-1], parts[:-1]
    if base not in dims:
        raise DocumentError(f"{where}: unknown simplex '{base}'")
    try:
        idx = [int(w[1:]) for w in word if w.startswith("s")]
        if len(idx) != len(word):
            raise ValueError(f"bad degeneracy token in '{text}'")
        return Simplex(base, sigma_from_word(idx, dims[base]))
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def sset_from_json(doc: dict, where: str = "$", check: bool = True) -> FinSSet:
    _kind(doc, "sset", where)
    D = _need(doc, "trunc_dim", where, int)
    simp = _need(doc, "simplices", where, dict)
    dims, nondeg, faces = {}, {}, {}
    for d in range(D + 1):
        rows = simp.get(str(d), [])
        nondeg[d] = []
        for r, row in enumerate(rows):
            at = f"{where}.simplices.{d}[{r}]"
            b = str(_need(row, "id", at))
            if b in dims:
                raise DocumentError(f"{at}: duplicate id '{b}'")
            dims[b] = d
            nondeg[d].append(b)
    extra = sorted(set(simp) - {str(d) for d in range(D + 1)})
    if extra:
        raise DocumentError(f"{where}.simplices: dimensions {extra} above trunc_dim {D}")
    for d in range(1, D + 1):
        for r, b in enumerate(nondeg[d]):
            at = f"{where}.simplices.{d}[{r}].faces"
            fs = _need(simp[str(d)][r], "faces", f"{where}.simplices.{d}[{r}]", list)
            if len(fs) != d + 1:
                raise DocumentError(f"{at}: expected {d + 1} faces, found {len(fs)}")
            faces[b] = tuple(parse_expr(f, dims, f"{at}[{i}]") for i, f in enumerate(fs))
            for i, f in enumerate(faces[b]):
                if f.dim != d - 1:
                    raise DocumentError(f"{at}[{i}]: face has dimension {f.dim}, expected {d - 1}")
    X = FinSSet(D, nondeg, faces, doc.get("coskeletal_above"))
    if check:
        rep = validate(X)
        if not rep.ok:
            raise DocumentError(f"{where}: simplicial identities fail: {rep.violations[:3]}")
    return X


def smap_to_json(f: SMap) -> dict:
    return {id_str(b): expr_str(y) for b, y in sorted(f.assignment.items(), key=lambda kv: skey(kv[0]))}


def smap_from_json(table: dict, source: FinSSet, target: FinSSet, where: str) -> SMap:
    if not isinstance(table, dict):
        raise DocumentError(f"{where}: expected an assignment table")
    sid = {id_str(b): b for b in source.dim_of}
    tdims = {id_str(b): d for b, d in target.dim_of.items()}
    tid = {id_str(b): b for b in target.dim_of}
    asg = {}
    for key, val in table.items():
        if key not in sid:
            raise DocumentError(f"{where}.{key}: not a nondegenerate simplex of the source")
        y = parse_expr(val, tdims, f"{where}.{key}")
        asg[sid[key]] = Simplex(tid[y.base], y.sigma)
    missing = [k for k in sid if k not in table]
    if missing:
        raise DocumentError(f"{where}: no value for {missing[:3]}")
    return SMap(source, target, asg)


# --- sspace --------------------------------------------------------------------------------

def sspace_to_json(X) -> dict:
    return {"kind": "sspace", "outer_dim": X.M, "levels": [sset_to_json(L) for L in X.levels],
            "faces": {f"{m},{i}": smap_to_json(f) for (m, i), f in sorted(X.faces.items())},
            "degeneracies": {f"{m},{j}": smap_to_json(f) for (m, j), f in sorted(X.degens.items())}}


def sspace_from_json(doc: dict, where: str = "$"):
    from .sspace import SimpSpace, validate_sspace
    _kind(doc, "sspace", where)
    M = _need(doc, "outer_dim", where, int)
    rows = _need(doc, "levels", where, list)
    if len(rows) != M + 1:
        raise DocumentError(f"{where}.levels: expected {M + 1} levels")
    levels = [sset_from_json(r, f"{where}.levels[{m}]") for m, r in enumerate(rows)]
    faces, degens = {}, {}
    for m in range(1, M + 1):
        for i in range(m + 1):
            key = f"{m},{i}"
            faces[(m, i)] = smap_from_json(_need(doc, "faces", where, dict).get(key), levels[m], levels[m - 1],
                                           f"{where}.faces.{key}")
    for m in range(M):
        for j in range(m + 1):
            key = f"{m},{j}"
            degens[(m, j)] = smap_from_json(_need(doc, "degeneracies", where, dict).get(key), levels[m],
                                            levels[m + 1], f"{where}.degeneracies.{key}")
    X = SimpSpace(levels, faces, degens)
    rep = validate_sspace(X)
    if not rep.ok:
        raise DocumentError(f"{where}: outer simplicial identities fail: {rep.violations[:3]}")
    return X


# --- internal categories -------------------------------------------------------------------

def icat_to_json(C) -> dict:
    comp = []
    for p in sorted(C.ar2.dim_of, key=skey):
        a, b = p
        comp.append([expr_str(a), expr_str(b), expr_str(C.m(C.ar2.point(p)))])
    return {"kind": "icat", "ob": sset_to_json(C.ob), "ar": sset_to_json(C.ar),
            "s": smap_to_json(C.s), "t": smap_to_json(C.t), "e": smap_to_json(C.e), "m": sorted(comp)}


def icat_from_json(doc: dict, where: str = "$", check: bool = True):
    from .icat import InternalCat, validate_icat
    from .limits import fiber_product
    _kind(doc, "icat", where)
    ob = sset_from_json(_need(doc, "ob", where), f"{where}.ob")
    ar = sset_from_json(_need(doc, "ar", where), f"{where}.ar")
    if ob.trunc_dim != ar.trunc_dim:
        raise DocumentError(f"{where}: ob and ar truncations differ")
    s = smap_from_json(_need(doc, "s", where), ar, ob, f"{where}.s")
    t = smap_from_json(_need(doc, "t", where), ar, ob, f"{where}.t")
    e = smap_from_json(_need(doc, "e", where), ob, ar, f"{where}.e")
    for name, f in (("s", s), ("t", t), ("e", e)):
        rep = f.check()
        if not rep.ok:
            raise DocumentError(f"{where}.{name}: not simplicial: {rep.violations[:2]}")
    ar2, _, _ = fiber_product(t, s)
    dims = {b: d for b, d in ar.dim_of.items()}
    table = {}
    for r, row in enumerate(_need(doc, "m", where, list)):
        at = f"{where}.m[{r}]"
        if not isinstance(row, list) or len(row) != 3:
            raise DocumentError(f"{at}: expected [a, b, a;b]")
        a, b, c = (parse_expr(x, dims, f"{at}[{i}]") for i, x in enumerate(row))
        table[(a, b)] = c
    asg = {}
    for p in ar2.dim_of:
        if tuple(p) not in table:
            raise DocumentError(f"{where}.m: no composite for ({expr_str(p[0])}, {expr_str(p[1])})")
        asg[p] = table[tuple(p)]
    C = InternalCat(ob, ar, s, t, e, SMap(ar2, ar, asg), ar2)
    if check:
        rep = validate_icat(C)
        if not rep.ok:
            raise DocumentError(f"{where}: internal category axioms fail: {rep.violations[:3]}")
    return C


# --- attachments ---------------------------------------------------------------------------

def attachment_to_json(spec) -> dict:
    return {"kind": "attachment", "n": spec.n, "tag": spec.tag, "K": sset_to_json(spec.K), "L": sset_to_json(spec.L),
            "inclusion": smap_to_json(spec.inc), "attaching": smap_to_json(spec.sigma)}


def attachment_from_json(doc: dict, base, where: str = "$"):
    """Parse against the internal category ``base`` (the attaching map lands in ``N(base)_n``)."""
    from .cells import AttachmentSpec
    from .icat import nerve
    _kind(doc, "attachment", where)
    n = _need(doc, "n", where, int)
    K = sset_from_json(_need(doc, "K", where), f"{where}.K")
    L = sset_from_json(_need(doc, "L", where), f"{where}.L")
    inc = smap_from_json(_need(doc, "inclusion", where), K, L, f"{where}.inclusion")
    NC = nerve(base, max(n, 1))
    sigma = smap_from_json(_need(doc, "attaching", where), K, NC[n], f"{where}.attaching")
    return AttachmentSpec(n, K, L, inc, sigma, str(doc.get("tag", "c")))


# --- documents on disk ---------------------------------------------------------------------

def read_document(path: str | Path) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise DocumentError(f"{p}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{p}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def write_document(doc: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n")


# --- maps of internal categories -----------------------------------------------------------

def icatmap_to_json(F) -> dict:
    return {"kind": "icatmap", "source": icat_to_json(F.source), "target": icat_to_json(F.target),
            "on_objects": smap_to_json(F.fo), "on_arrows": smap_to_json(F.fa)}


def icatmap_from_json(doc: dict, where: str = "$"):
    from .icat import ICatMap
    _kind(doc, "icatmap", where)
    C = icat_from_json(_need(doc, "source", where), f"{where}.source")
    D = icat_from_json(_need(doc, "target", where), f"{where}.target")
    fo = smap_from_json(_need(doc, "on_objects", where), C.ob, D.ob, f"{where}.on_objects")
    fa = smap_from_json(_need(doc, "on_arrows", where), C.ar, D.ar, f"{where}.on_arrows")
    F = ICatMap(C, D, fo, fa)
    rep = F.check()
    if not rep.ok:
        raise DocumentError(f"{where}: not a map of internal categories: {rep.violations[:3]}")
    return F


# --- presheaves ----------------------------------------------------------------------------

def presheaf_to_json(F) -> dict:
    from .presheaves import RIGHT, parts
    rows = []
    P = F.pairs
    for b in sorted(P.dim_of, key=skey):
        p = parts(P.point(b))
        x, a = (p[0], p[1]) if F.variance == RIGHT else (p[1], p[0])
        rows.append([expr_str(x), expr_str(a), expr_str(F.action(P.point(b)))])
    return {"kind": "presheaf", "variance": F.variance, "name": F.name, "base": icat_to_json(F.base),
            "carrier": sset_to_json(F.carrier), "projection": smap_to_json(F.projection), "action": sorted(rows)}


def presheaf_from_json(doc: dict, where: str = "$", base=None):
    from .presheaves import LEFT, RIGHT, Presheaf, pair_space, parts, validate_presheaf
    _kind(doc, "presheaf", where)
    variance = _need(doc, "variance", where, str)
    if variance not in (LEFT, RIGHT):
        raise DocumentError(f"{where}.variance: expected 'left' or 'right'")
    C = base if base is not None else icat_from_json(_need(doc, "base", where), f"{where}.base")
    X = sset_from_json(_need(doc, "carrier", where), f"{where}.carrier")
    proj = smap_from_json(_need(doc, "projection", where), X, C.ob, f"{where}.projection")
    P = pair_space(C, proj, variance)
    xd, ad = dict(X.dim_of), dict(C.ar.dim_of)
    table = {}
    for r, row in enumerate(_need(doc, "action", where, list)):
        at = f"{where}.action[{r}]"
        if not isinstance(row, list) or len(row) != 3:
            raise DocumentError(f"{at}: expected [element, arrow, result]")
        table[(parse_expr(row[0], xd, at), parse_expr(row[1], ad, at))] = parse_expr(row[2], xd, at)
    asg = {}
    for b in P.dim_of:
        p = parts(P.point(b))
        key = (p[0], p[1]) if variance == RIGHT else (p[1], p[0])
        if key not in table:
            raise DocumentError(f"{where}.action: no value for ({expr_str(key[0])}, {expr_str(key[1])})")
        asg[b] = table[key]
    F = Presheaf(C, X, proj, SMap(P, X, asg), variance, str(doc.get("name", "")))
    rep = validate_presheaf(F)
    if not rep.ok:
        raise DocumentError(f"{where}: presheaf axioms fail: {rep.violations[:3]}")
    return F


# --- simplicial categories and Grothendieck data -------------------------------------------

def _pair_key(*xs) -> str:
    return "|".join(id_str(x) for x in xs)


def scat_from_json(doc: dict, where: str = "$"):
    from .limits import product
    from .simpcat import SimpCat
    _kind(doc, "scat", where)
    objects = [str(x) for x in _need(doc, "objects", where, list)]
    maps_doc = _need(doc, "maps", where, dict)
    maps = {}
    for x in objects:
        for y in objects:
            key = _pair_key(x, y)
            if key not in maps_doc:
                raise DocumentError(f"{where}.maps: missing '{key}'")
            maps[(x, y)] = sset_from_json(maps_doc[key], f"{where}.maps.{key}")
    idents = _need(doc, "identities", where, dict)
    ident = {}
    for x in objects:
        v = idents.get(x)
        if v is None or maps[(x, x)].dim_of.get(v) != 0:
            raise DocumentError(f"{where}.identities.{x}: not a vertex of map({x},{x})")
        ident[x] = v
    comp_doc = _need(doc, "composition", where, dict)
    comp = {}
    for x in objects:
        for y in objects:
            for z in objects:
                key = _pair_key(x, y, z)
                P, _ = product(maps[(x, y)], maps[(y, z)])
                comp[(x, y, z)] = smap_from_json(comp_doc.get(key, {}), P, maps[(x, z)], f"{where}.composition.{key}")
    c = SimpCat(objects, maps, comp, ident)
    rep = c.validate()
    if not rep.ok:
        raise DocumentError(f"{where}: simplicial category axioms fail: {rep.violations[:3]}")
    return c


def scat_to_json(c) -> dict:
    return c.to_json()


def grdata_to_json(g) -> dict:
    c = g.base
    return {"kind": "grdata", "base": c.to_json(),
            "functor": {id_str(x): sset_to_json(g.F[x]) for x in c.objects},
            "action": {_pair_key(x, y): smap_to_json(g.act[(x, y)]) for x in c.objects for y in c.objects}}


def grdata_from_json(doc: dict, where: str = "$"):
    from .limits import product
    from .simpcat import GrData
    _kind(doc, "grdata", where)
    c = scat_from_json(_need(doc, "base", where), f"{where}.base")
    fdoc = _need(doc, "functor", where, dict)
    F = {}
    for x in c.objects:
        if x not in fdoc:
            raise DocumentError(f"{where}.functor: missing object '{x}'")
        F[x] = sset_from_json(fdoc[x], f"{where}.functor.{x}")
    adoc = _need(doc, "action", where, dict)
    act = {}
    for x in c.objects:
        for y in c.objects:
            key = _pair_key(x, y)
            P, _ = product(F[x], c.map(x, y))
            act[(x, y)] = smap_from_json(adoc.get(key, {}), P, F[y], f"{where}.action.{key}")
    g = GrData(c, F, act)
    rep = g.check()
    if not rep.ok:
        raise DocumentError(f"{where}: functor laws fail: {rep.violations[:3]}")
    return g


# --- dispatch ------------------------------------------------------------------------------

PARSERS = {
    "sset": sset_from_json, "sspace": sspace_from_json, "icat": icat_from_json, "icatmap": icatmap_from_json,
    "presheaf": presheaf_from_json, "scat": scat_from_json, "grdata": grdata_from_json,
}


def to_json(obj) -> dict:
    from .cells import AttachmentSpec
    from .icat import ICatMap, InternalCat
    from .presheaves import Presheaf
    from .simpcat import GrData, SimpCat
    from .sspace import SimpSpace
    for typ, fn in ((FinSSet, sset_to_json), (SimpSpace, sspace_to_json), (InternalCat, icat_to_json),
                    (ICatMap, icatmap_to_json), (Presheaf, presheaf_to_json), (SimpCat, scat_to_json),
                    (GrData, grdata_to_json), (AttachmentSpec, attachment_to_json)):
        if isinstance(obj, typ):
            return fn(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"no document kind for {type(obj).__name__}")


def load(path: str | Path, kinds: tuple[str, ...] | None = None):
    """Read a document and parse it; returns ``(kind, object, document)``."""
    doc = read_document(path)
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kinds is not None and kind not in kinds:
        raise DocumentError(f"{path}: expected kind {' or '.join(kinds)}, found '{kind}'")
    if kind not in PARSERS:
        raise DocumentError(f"{path}: unknown or standalone kind '{kind}'")
    return kind, PARSERS[kind](doc, str(path)), doc
