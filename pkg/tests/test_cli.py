import json

import pytest
from click.testing import CliRunner

from icatlab import serialize as ser
from icatlab.categories import FinCat
from icatlab.cells import AttachmentSpec
from icatlab.cli import main
from icatlab.corpus import groupoid_grothendieck
from icatlab.icat import InternalCat, functor_map
from icatlab.presheaves import terminal_presheaf
from icatlab.simpcat import SimpCat, monoid_interval
from icatlab.simplicial import FinSSet, SMap, boundary, standard_simplex
from icatlab.sspace import make_F, make_G

D = 2


@pytest.fixture(scope="module")
def docs(tmp_path_factory):
    d = tmp_path_factory.mktemp("docs")
    C0 = InternalCat.from_category(FinCat.chain(0), D)
    C1 = InternalCat.from_category(FinCat.chain(1), D)
    I1 = InternalCat.from_category(FinCat.chaotic([0, 1]), D)
    E = FinSSet.empty(D)
    L = standard_simplex(1, D)
    objs = {
        "poset": InternalCat.from_category(FinCat.poset(range(3), lambda a, b: a <= b), D),
        "chaotic2": I1, "chain1": C1,
        "F0": make_F(0, 2, D), "G2": make_G(2, 3, D)[0], "bd2": boundary(2, 3),
        "incl": functor_map(C0, I1, {0: 0}, {(0, 0): (0, 0)}),
        "collapse": functor_map(C1, C0, {0: 0, 1: 0}, {a: (0, 0) for a in C1.ar.nondeg[0]}),
        "term_right": terminal_presheaf(C1, "right"), "term_left": terminal_presheaf(C1, "left"),
        "scat": SimpCat.from_category(FinCat.chaotic([0, 1]), D), "monoid": monoid_interval(D),
        "gr": groupoid_grothendieck(D),
        "cell": AttachmentSpec(1, E, L, SMap(E, L, {}), SMap(E, FinSSet.empty(D), {}), "a"),
        "empty": InternalCat.discrete(E),
    }
    for name, obj in objs.items():
        ser.write_document(ser.to_json(obj), d / f"{name}.json")
    (d / "broken.json").write_text('{"kind": "icat",\n "ob": [}\n')
    return d


def run(*args):
    res = CliRunner().invoke(main, [str(a) for a in args])
    assert not isinstance(res.exception, Exception) or isinstance(res.exception, SystemExit), res.output
    return res.exit_code, json.loads(res.output)


@pytest.mark.parametrize("args,code", [
    (("validate", "{poset}"), 0),
    (("segal-check", "{poset}"), 0),
    (("complete-check", "{poset}"), 0),
    (("complete-check", "{F0}"), 0),
    (("is-nerve", "{G2}"), 1),
    (("is-nerve", "{F0}"), 0),
    (("pi0", "{bd2}"), 0),
    (("ho", "{chaotic2}"), 0),
    (("hoequiv", "{chaotic2}"), 0),
    (("dk-check", "{incl}"), 0),
    (("dk-check", "{collapse}"), 1),
    (("yoneda-check", "{term_left}"), 0),
    (("bar", "{term_right}"), 0),
    (("kan-extend", "{collapse}", "{term_right}"), 0),
    (("grothendieck", "{gr}"), 0),
    (("int-check", "{scat}"), 0),
    (("int-check", "{monoid}"), 2),
    (("s-adjoint", "{G2}"), 0),
    (("nerve", "{chain1}"), 0),
    (("attach", "{empty}", "{cell}"), 0),
    (("gen", "--seed", "1", "--count", "3"), 0),
])
def test_exit_codes(docs, args, code):
    args = [a.format(**{p.stem: p for p in docs.glob("*.json")}) for a in args]
    got, report = run(*args)
    assert got == code, report
    assert set(report) == {"command", "inputs", "verdict", "evidence", "bounds", "seed"}
    assert {"PASS": 0, "FAIL": 1, "UNKNOWN": 2, "ADVISORY": 2}[report["verdict"]] == code


def test_complete_check_obstruction(docs):
    code, r = run("complete-check", docs / "chaotic2.json")
    assert code == 1 and "pi0 2 vs 4 on hoequiv comparison" in json.dumps(r["evidence"])


def test_homology_report(docs):
    code, r = run("homology", docs / "bd2.json", "--hom-bound", 2)
    assert code == 0 and [g["rank"] for g in r["evidence"]["groups"]] == [1, 1, 0]


def test_spine_witness(docs):
    _, r = run("is-nerve", docs / "G2.json")
    assert r["evidence"]["witness"]["spine_composite"]["level"] == 2


def test_errors_are_fail_reports(docs):
    code, r = run("validate", docs / "missing.json")
    assert code == 1 and "error" in r["evidence"]
    code, r = run("validate", docs / "broken.json")
    assert code == 1 and "line 2" in r["evidence"]["error"]
    code, r = run("dk-check", docs / "poset.json")
    assert code == 1 and "expected kind icatmap" in r["evidence"]["error"]


def test_inputs_are_content_hashes(docs):
    _, r = run("validate", docs / "poset.json")
    assert r["inputs"] == {"poset.json": ser.content_hash(ser.read_document(docs / "poset.json"))}


def test_out_writes_document(docs, tmp_path):
    out = tmp_path / "N.json"
    code, r = run("nerve", docs / "chain1.json", "--outer", 2, "--out", out)
    assert code == 0 and r["evidence"]["output"]["hash"] == ser.content_hash(ser.read_document(out))
    assert ser.load(out)[0] == "sspace"


def test_reports_are_byte_identical(docs):
    for args in (("complete-check", docs / "chaotic2.json"), ("gen", "--seed", 5, "--count", 4),
                 ("verify", "key-lemma", "--trials", 3, "--seed", 9, "--dim", 2, "--outer", 2)):
        a = CliRunner().invoke(main, [str(x) for x in args]).output
        b = CliRunner().invoke(main, [str(x) for x in args]).output
        assert a == b


def test_unknown_is_never_zero(docs):
    code, r = run("is-nerve", docs / "G2.json", "--budget", 0)
    assert r["verdict"] == "UNKNOWN" and code == 2
