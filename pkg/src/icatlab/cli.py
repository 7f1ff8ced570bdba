"""Command line front end.

Every command prints one JSON report (sorted keys) and exits with 0 for PASS,
1 for FAIL, 2 for UNKNOWN or ADVISORY.  Documents produced by a command go to
``--out`` when given.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import serialize as ser
from .simplicial import expr_str, id_str, skey

EXIT = {"PASS": 0, "FAIL": 1, "UNKNOWN": 2, "ADVISORY": 2}


def _worst(*verdicts: str) -> str:
    order = ["PASS", "ADVISORY", "UNKNOWN", "FAIL"]
    return max(verdicts, key=order.index) if verdicts else "PASS"


class Run:
    """Collects inputs and bounds for one report."""

    def __init__(self, command: str, seed: int | None = None):
        self.command = command
        self.inputs: dict = {}
        self.bounds: dict = {}
        self.seed = seed

    def load(self, path: str, kinds: tuple[str, ...]):
        kind, obj, doc = ser.load(path, kinds)
        self.inputs[Path(path).name] = ser.content_hash(doc)
        return kind, obj

    def finish(self, verdict: str, evidence: dict, out: str | None = None, document=None) -> None:
        if document is not None:
            doc = document if isinstance(document, dict) else ser.to_json(document)
            if out:
                ser.write_document(doc, out)
                evidence["output"] = {"path": out, "hash": ser.content_hash(doc)}
            else:
                evidence["document"] = doc
        report = {"command": self.command, "inputs": self.inputs, "verdict": verdict,
                  "evidence": evidence, "bounds": self.bounds, "seed": self.seed}
        click.echo(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False))
        sys.exit(EXIT[verdict])


def _guard(run: Run, fn):
    try:
        fn()
    except (ser.DocumentError, ValueError) as exc:
        run.finish("FAIL", {"error": str(exc)})


def _space_of(kind: str, obj, M: int):
    from .icat import nerve
    return nerve(obj, M) if kind == "icat" else obj


def _iso_witness(f) -> dict | None:
    """A target simplex missed by ``f`` or two source simplices with one image."""
    seen = {}
    for b in sorted(f.source.dim_of, key=skey):
        y = f(f.source.point(b))
        if y in seen:
            return {"collision": [id_str(seen[y]), id_str(b)], "image": expr_str(y)}
        seen[y] = b
    img = f.image_ids()
    for d in sorted(f.target.nondeg):
        for b in f.target.nondeg[d]:
            if b not in img:
                return {"missed": id_str(b), "dim": d}
    return None


# --- the group -------------------------------------------------------------------------------

@click.group()
def main():
    """Finite computations with internal categories in simplicial sets."""


@main.command()
@click.argument("file")
@click.option("--base", default=None, help="Internal category document for an attachment.")
def validate(file, base):
    """Parse a document and check the axioms of its kind."""
    run = Run("validate")

    def go():
        doc = ser.read_document(file)
        kind = doc.get("kind") if isinstance(doc, dict) else None
        run.inputs[Path(file).name] = ser.content_hash(doc)
        if kind == "attachment":
            if base is None:
                raise ser.DocumentError(f"{file}: an attachment is validated against --base")
            _, C = run.load(base, ("icat",))
            spec = ser.attachment_from_json(doc, C)
            problems = spec.check()
            run.finish("FAIL" if problems else "PASS", {"kind": kind, "violations": problems})
        if kind not in ser.PARSERS:
            raise ser.DocumentError(f"{file}: unknown kind '{kind}'")
        ser.PARSERS[kind](doc, file)
        run.finish("PASS", {"kind": kind})
    _guard(run, go)


@main.command()
@click.argument("file")
@click.option("--outer", default=3, show_default=True, help="Outer truncation of the nerve.")
@click.option("--out", default=None)
def nerve(file, outer, out):
    """The nerve of an internal category as a simplicial space."""
    from .icat import nerve as build
    from .sspace import validate_sspace
    run = Run("nerve")

    def go():
        _, C = run.load(file, ("icat",))
        run.bounds.update(trunc_dim=C.D, outer_dim=outer)
        N = build(C, outer)
        ok = validate_sspace(N).ok
        run.finish("PASS" if ok else "FAIL", {"level_sizes": [L.size() for L in N.levels]}, out, N)
    _guard(run, go)


@main.command("s-adjoint")
@click.argument("file")
@click.option("--budget", default=8, show_default=True, help="Maximum word length for the word problem.")
@click.option("--out", default=None)
def s_adjoint_cmd(file, budget, out):
    """The free internal category S X on a simplicial space."""
    from .icat import validate_icat
    from .presented import SUnknown, s_adjoint
    run = Run("s-adjoint")

    def go():
        kind, X = run.load(file, ("sspace", "icat"))
        X = _space_of(kind, X, 2)
        run.bounds.update(trunc_dim=X.D, budget=budget)
        try:
            S = s_adjoint(X, budget)
        except SUnknown as exc:
            run.finish("UNKNOWN", {"reason": str(exc)})
        pres = {str(k): P.to_json() for k, P in sorted(S.meta["presentations"].items())}
        ok = validate_icat(S).ok
        run.finish("PASS" if ok else "FAIL", {"presentations": pres, "ob": S.ob.size(), "ar": S.ar.size()}, out, S)
    _guard(run, go)


@main.command()
@click.argument("file")
@click.option("--hom-bound", default=2, show_default=True)
def homology(file, hom_bound):
    """Integral homology of a simplicial set."""
    from .homology import homology as H
    run = Run("homology")

    def go():
        _, X = run.load(file, ("sset",))
        run.bounds.update(trunc_dim=X.trunc_dim, hom_bound=hom_bound)
        groups = H(X, hom_bound)
        run.finish("PASS", {"groups": [g.to_json() for g in groups]})
    _guard(run, go)


@main.command()
@click.argument("file")
def pi0(file):
    """Path components of a simplicial set."""
    from .limits import pi0 as components
    run = Run("pi0")

    def go():
        _, X = run.load(file, ("sset",))
        run.bounds.update(trunc_dim=X.trunc_dim)
        ids, cls = components(X)
        members = {id_str(c): sorted(id_str(v) for v in X.nondeg[0] if cls[v] == c) for c in ids}
        run.finish("PASS", {"count": len(ids), "components": members})
    _guard(run, go)


def _ho_json(H) -> dict:
    return {"objects": [id_str(x) for x in H.objects],
            "arrows": sorted([id_str(a[0]), id_str(a[1]), id_str(a)] for a in H.arrows),
            "composition": sorted([id_str(f), id_str(g), id_str(h)] for (f, g), h in H.comp.items())}


@main.command()
@click.argument("file")
@click.option("--outer", default=2, show_default=True)
def ho(file, outer):
    """The homotopy category Ho(X)."""
    from .sspace import HoError, ho_category
    run = Run("ho")

    def go():
        kind, X = run.load(file, ("sspace", "icat"))
        X = _space_of(kind, X, outer)
        run.bounds.update(trunc_dim=X.D, outer_dim=X.M)
        try:
            H = ho_category(X)
        except HoError as exc:
            run.finish("FAIL", {"error": str(exc)})
        run.finish("PASS", _ho_json(H))
    _guard(run, go)


@main.command("hoequiv")
@click.argument("file")
@click.option("--outer", default=2, show_default=True)
def hoequiv_cmd(file, outer):
    """Components of X_1 made of homotopy equivalences, and pi0 modulo equivalence."""
    from .limits import pi0 as components
    from .sspace import HoError, hoequiv, pi0_mod_equiv
    run = Run("hoequiv")

    def go():
        kind, X = run.load(file, ("sspace", "icat"))
        X = _space_of(kind, X, outer)
        run.bounds.update(trunc_dim=X.D, outer_dim=X.M)
        try:
            Heq, chosen = hoequiv(X)
        except HoError as exc:
            run.finish("FAIL", {"error": str(exc)})
        classes, cls = pi0_mod_equiv(X)
        run.finish("PASS", {"components_of_X1": len(components(X[1])[0]), "chosen": len(chosen),
                            "hoequiv_vertices": sorted(id_str(v) for v in Heq.nondeg[0]),
                            "pi0_mod_equiv": len(classes)})
    _guard(run, go)


@main.command("segal-check")
@click.argument("file")
@click.option("--outer", default=3, show_default=True)
def segal_check_cmd(file, outer):
    """Whether each Segal map X_n -> X_1 x_{X_0} ... x_{X_0} X_1 is an isomorphism."""
    from .sspace import segal_map
    run = Run("segal-check")

    def go():
        kind, X = run.load(file, ("sspace", "icat"))
        X = _space_of(kind, X, outer)
        run.bounds.update(trunc_dim=X.D, outer_dim=X.M)
        levels = {}
        for n in range(2, X.M + 1):
            f, P = segal_map(X, n)
            wit = None if f.is_iso() else _iso_witness(f)
            levels[str(n)] = {"iso": wit is None, "sizes": [X[n].size(), P.size()]}
            if wit is not None:
                run.finish("FAIL", {"levels": levels, "witness": {"level": n, **wit}})
        run.finish("PASS", {"levels": levels})
    _guard(run, go)


def _cert_verdict(cert) -> str:
    if cert.proof:
        return "PASS"
    if cert.ok:
        return "ADVISORY"
    return "UNKNOWN" if cert.tier == "UNKNOWN" else "FAIL"


@main.command("complete-check")
@click.argument("file")
@click.option("--outer", default=2, show_default=True)
@click.option("--hom-bound", default=1, show_default=True)
def complete_check_cmd(file, outer, hom_bound):
    """Whether X_0 -> hoequiv is a weak equivalence (certificate tiers)."""
    from .limits import pi0 as components
    from .sspace import completeness_check, hoequiv
    run = Run("complete-check")

    def go():
        kind, X = run.load(file, ("sspace", "icat"))
        X = _space_of(kind, X, outer)
        run.bounds.update(trunc_dim=X.D, outer_dim=X.M, hom_bound=hom_bound)
        cert = completeness_check(X, hom_bound)
        Heq, _ = hoequiv(X)
        a, b = len(components(X[0])[0]), len(components(Heq)[0])
        ev = {"certificate": cert.to_json(), "pi0": [a, b]}
        if not cert.ok:
            ev["obstruction"] = f"pi0 {a} vs {b} on hoequiv comparison" if a != b else cert.note
        run.finish(_cert_verdict(cert), ev)
    _guard(run, go)


@main.command("dk-check")
@click.argument("file")
@click.option("--hom-bound", default=1, show_default=True)
def dk_check_cmd(file, hom_bound):
    """Dwyer-Kan check for a map of internal categories."""
    from .icat import nerve as build, nerve_map
    from .sspace import dk_check
    run = Run("dk-check")

    def go():
        _, F = run.load(file, ("icatmap",))
        run.bounds.update(trunc_dim=F.source.D, outer_dim=2, hom_bound=hom_bound)
        r = dk_check(nerve_map(F, build(F.source, 2), build(F.target, 2)), hom_bound)
        if r["verdict"] == "DK":
            homological = any(c["tier"].startswith("HOMOLOGICAL") for c in r["fibers"].values())
            run.finish("ADVISORY" if homological else "PASS", r)
        run.finish("FAIL", r)
    _guard(run, go)


@main.command()
@click.argument("base")
@click.argument("spec")
@click.option("--outer", default=3, show_default=True)
@click.option("--out", default=None)
def attach(base, spec, outer, out):
    """Attach a cell and check the pushout against functor sets and nerves."""
    from .categories import FinCat
    from .cells import attach as do_attach, verify_key_lemma, verify_nerve_pushout
    run = Run("attach")

    def go():
        _, C = run.load(base, ("icat",))
        doc = ser.read_document(spec)
        run.inputs[Path(spec).name] = ser.content_hash(doc)
        sp = ser.attachment_from_json(doc, C)
        problems = sp.check()
        if problems:
            run.finish("FAIL", {"violations": problems})
        run.bounds.update(trunc_dim=C.D, outer_dim=outer)
        att = do_attach(C, sp)
        kl = verify_key_lemma(att, [FinCat.chain(k) for k in range(3)], C.D)
        npo = verify_nerve_pushout(att, outer)
        ok = kl["ok"] and npo["ok"]
        run.finish("PASS" if ok else "FAIL", {"key_lemma": kl, "nerve_pushout": npo}, out, att.result)
    _guard(run, go)


@main.command("is-nerve")
@click.argument("file")
@click.option("--budget", default=8, show_default=True, help="Maximum word length for the word problem.")
def is_nerve_cmd(file, budget):
    """Whether a simplicial space is the nerve of an internal category."""
    from .cells import is_nerve
    run = Run("is-nerve")

    def go():
        _, X = run.load(file, ("sspace",))
        run.bounds.update(trunc_dim=X.D, outer_dim=X.M, budget=budget)
        r = is_nerve(X, budget)
        r.pop("icat", None)
        run.finish({"YES": "PASS", "NO": "FAIL"}.get(r["verdict"], "UNKNOWN"), r)
    _guard(run, go)


@main.command("yoneda-check")
@click.argument("file")
@click.option("--vertex", default=None, help="Object vertex; all vertices when omitted.")
@click.option("--top", default=1, show_default=True, help="Largest n for maps h_v x Delta[n] -> F.")
@click.option("--probe-dim", default=2, show_default=True)
def yoneda_check_cmd(file, vertex, top, probe_dim):
    """Maps out of a representable against the fiber of a left presheaf."""
    from .presheaves import yoneda_check
    run = Run("yoneda-check")

    def go():
        _, F = run.load(file, ("presheaf",))
        if F.variance != "left":
            raise ser.DocumentError(f"{file}: yoneda-check takes a left presheaf")
        C = F.base
        run.bounds.update(trunc_dim=C.D, probe_dim=probe_dim, top=top)
        verts = [v for v in C.ob.nondeg[0] if vertex is None or id_str(v) == vertex]
        if not verts:
            raise ser.DocumentError(f"{file}: no object vertex '{vertex}'")
        rows = [yoneda_check(C, v, F, top, probe_dim) for v in sorted(verts, key=skey)]
        run.finish(_worst(*[r["verdict"] for r in rows]), {"checks": rows})
    _guard(run, go)


@main.command()
@click.argument("file")
@click.option("--dim", "levels", default=4, show_default=True, help="Number of bar levels.")
@click.option("--hom-bound", default=2, show_default=True)
def bar(file, levels, hom_bound):
    """Bar resolution of a right presheaf: extra degeneracy and homology of the realization."""
    from .presheaves import bar_homology_check, bar_resolution, check_extra_degeneracy
    run = Run("bar")

    def go():
        _, F = run.load(file, ("presheaf",))
        if F.variance != "right":
            raise ser.DocumentError(f"{file}: bar takes a right presheaf")
        run.bounds.update(trunc_dim=F.base.D, outer_dim=levels, hom_bound=hom_bound)
        extra = check_extra_degeneracy(bar_resolution(F, M=levels))
        hom = bar_homology_check(F, levels, hom_bound)
        ok = extra["ok"] and hom["ok"]
        run.finish("PASS" if ok else "FAIL", {"extra_degeneracy": extra, "homology": hom})
    _guard(run, go)


@main.command("kan-extend")
@click.argument("alpha")
@click.argument("presheaf", required=False)
@click.option("--dim", "levels", default=3, show_default=True, help="Bar levels for the derived functor.")
@click.option("--hom-bound", default=2, show_default=True)
@click.option("--probe-dim", default=2, show_default=True)
def kan_extend(alpha, presheaf, levels, hom_bound, probe_dim):
    """Left Kan extension along a map: exact on representables, derived on a given presheaf."""
    from .homology import homology as H
    from .presheaves import base_change
    run = Run("kan-extend")

    def go():
        _, al = run.load(alpha, ("icatmap",))
        run.bounds.update(trunc_dim=al.source.D, outer_dim=levels, hom_bound=hom_bound, probe_dim=probe_dim)
        bc = base_change(al)
        reps = [bc.pushforward_representable(p) for p in sorted(al.source.ob.nondeg[0], key=skey)]
        ev = {"representables": reps}
        verdict = "PASS" if all(r["iso"] for r in reps) else "FAIL"
        if presheaf is not None:
            _, F = run.load(presheaf, ("presheaf",))
            if F.variance != "right":
                raise ser.DocumentError(f"{presheaf}: kan-extend takes a right presheaf")
            col, _ = bc.pushforward(F)
            d = bc.derived(F, levels, probe_dim)
            ev["exact_size"] = col.space.size()
            top = min(hom_bound, d["space"].trunc_dim - 1)
            run.bounds["hom_bound"] = top
            ev["derived"] = {"homology": [g.to_json() for g in H(d["space"], top)],
                             "probes": d["probes"], "valid": d["valid"]}
            if not d["valid"]:
                verdict = "FAIL"
            elif d["advisory"]:
                verdict = _worst(verdict, "ADVISORY")
        run.finish(verdict, ev)
    _guard(run, go)


@main.command("grothendieck")
@click.argument("file")
@click.option("--outer", default=2, show_default=True)
@click.option("--out", default=None)
def grothendieck_cmd(file, outer, out):
    """The Grothendieck construction of a functor to simplicial sets."""
    from .icat import validate_icat
    from .simpcat import grothendieck, grothendieck_count_check
    run = Run("grothendieck")

    def go():
        _, g = run.load(file, ("grdata",))
        run.bounds.update(trunc_dim=g.base.D, outer_dim=outer)
        G = grothendieck(g)
        valid = validate_icat(G).ok
        counts = grothendieck_count_check(g, G, outer)
        ok = valid and counts["ok"]
        run.finish("PASS" if ok else "FAIL", {"valid": valid, "counts": counts,
                                               "ob": G.ob.size(), "ar": G.ar.size()}, out, G)
    _guard(run, go)


@main.command("int-check")
@click.argument("file")
@click.option("--probe-dim", default=2, show_default=True)
def int_check(file, probe_dim):
    """Int of a simplicial category: validity, the Ho comparison, and equivalence detection."""
    from .icat import validate_icat
    from .simpcat import equivalence_detection_check, ho_comparison_check, internalize
    run = Run("int-check")

    def go():
        _, c = run.load(file, ("scat",))
        run.bounds.update(trunc_dim=c.D, probe_dim=probe_dim)
        valid = validate_icat(internalize(c)).ok
        ho = ho_comparison_check(c)
        rows = []
        for x in c.objects:
            for y in c.objects:
                for f in sorted(c.map(x, y).nondeg[0], key=skey):
                    r = equivalence_detection_check(c, x, y, f, probe_dim)
                    rows.append({"arrow": [id_str(x), id_str(y), id_str(f)], **{k: r[k] for k in
                                 ("verdict", "ho_invertible", "in_hoequiv")}})
        verdict = "PASS" if valid and ho["ok"] else "FAIL"
        verdict = _worst(verdict, *[r["verdict"] for r in rows])
        run.finish(verdict, {"valid": valid, "ho_comparison": ho, "detection": rows})
    _guard(run, go)


@main.command()
@click.option("--seed", default=0, show_default=True)
@click.option("--count", default=10, show_default=True)
@click.option("--dim", default=2, show_default=True, help="Truncation dimension.")
@click.option("--out", default=None, help="Directory for the generated documents.")
def gen(seed, count, dim, out):
    """Seeded corpus of valid internal categories."""
    from .corpus import generate
    from .icat import validate_icat
    run = Run("gen", seed)
    run.bounds.update(trunc_dim=dim, count=count)
    items, ok = [], True
    for name, C in generate(seed, count, dim):
        doc = ser.to_json(C)
        valid = validate_icat(C).ok
        ok &= valid
        items.append({"name": name, "hash": ser.content_hash(doc), "valid": valid})
        if out:
            Path(out).mkdir(parents=True, exist_ok=True)
            ser.write_document(doc, Path(out) / f"{name}.json")
    run.finish("PASS" if ok else "FAIL", {"objects": items})


@main.group()
def verify():
    """Seeded verification campaigns."""


@verify.command("key-lemma")
@click.option("--trials", default=100, show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--dim", default=4, show_default=True, help="Truncation dimension.")
@click.option("--outer", default=3, show_default=True)
def key_lemma(trials, seed, dim, outer):
    """Random cell attachments: functor sets and nerves of the pushout."""
    from .cells import key_lemma_campaign
    run = Run("verify key-lemma", seed)
    run.bounds.update(trunc_dim=dim, outer_dim=outer, trials=trials, shapes=["[0]", "[1]", "[2]"])
    r = key_lemma_campaign(trials, seed, dim, outer)
    verdict = "PASS" if r["failures"] == 0 else "FAIL"
    ev = {"failures": r["failures"], "instances": r["instances"]}
    if r["failures"]:
        ev["witness"] = next(i for i in r["instances"] if not (i["key_lemma"] and i["nerve_pushout"]))
    run.finish(verdict, ev)


if __name__ == "__main__":
    main()
