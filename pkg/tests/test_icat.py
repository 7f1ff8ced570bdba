import pytest

from conftest import as_icat
from icatlab.categories import FinCat, coproduct
from icatlab.cells import CellComplex, AttachmentSpec
from icatlab.corpus import groupoid_grothendieck
from icatlab.icat import (InternalCat, enumerate_icat_maps, icat_mapping_space, icat_product, nerve, nerve_map,
                          strongly_segal_check, tensor, times_simplex, validate_icat)
from icatlab.limits import product
from icatlab.presented import adjunct, s_adjoint, unit_map
from icatlab.simpcat import grothendieck, internalize, monoid_interval
from icatlab.simplicial import FinSSet, SMap, Simplex, boundary, point, standard_simplex
from icatlab.sspace import (SSMap, colimit_induced, enumerate_ssmaps, make_F, make_G, segal_map, sspace_colimit,
                            times_simplex as sspace_times, validate_sspace)

SMALL = {
    "[0]": FinCat.chain(0),
    "[1]": FinCat.chain(1),
    "I[1]": FinCat.chaotic([0, 1]),
    "Z2": FinCat.cyclic_group(2),
    "vee": FinCat.poset(range(3), lambda a, b: a == b or a == 0),
    "[0]+[0]": coproduct(FinCat.chain(0), FinCat.chain(0)),
}


def test_validity_examples():
    assert validate_icat(InternalCat.discrete(boundary(2, 2))).ok
    assert validate_icat(as_icat(FinCat.chain(1))).ok
    assert validate_icat(tensor(standard_simplex(1, 2), FinCat.chain(1))).ok


def test_corrupted_composition_is_caught():
    C = as_icat(FinCat.chain(2), 1)
    m = dict(C.m.assignment)
    # send (0<1);(1<2) to 0<1, which ends at the wrong object
    key = next(p for p in C.ar2.dim_of if p[0].base == (0, 1) and p[1].base == (1, 2))
    m[key] = Simplex((0, 1), (0,))
    bad = InternalCat(C.ob, C.ar, C.s, C.t, C.e, SMap(C.ar2, C.ar, m), C.ar2)
    rep = validate_icat(bad)
    assert not rep.ok
    kinds = {v["kind"] for v in rep.violations}
    assert kinds == {"composite-endpoints"}


def test_associativity_failure_is_caught():
    # in Z/3, redefining g*g = g keeps units and endpoints but breaks associativity
    C = as_icat(FinCat.cyclic_group(3), 1)
    m = dict(C.m.assignment)
    gens = sorted(C.ar.dim_of)
    e = next(a for a in gens if C.e(C.ob.point(C.s(C.ar.point(a)).base)) == C.ar.point(a))
    g, h = [a for a in gens if a != e]
    m[(Simplex(g, (0,)), Simplex(g, (0,)))] = Simplex(g, (0,))
    bad = InternalCat(C.ob, C.ar, C.s, C.t, C.e, SMap(C.ar2, C.ar, m), C.ar2)
    kinds = {v["kind"] for v in validate_icat(bad).violations}
    assert kinds == {"associativity"}


def test_nerve_examples():
    K = boundary(2, 2)
    N = nerve(InternalCat.discrete(K), 3)
    assert all(N[m].same_as(K) or N[m].size() == K.size() for m in range(4))
    assert all(N.d(m, i).is_iso() for (m, i) in N.faces)
    N1 = nerve(as_icat(FinCat.chain(1), 1), 2)
    assert len(N1[2].nondeg[0]) == 4
    assert validate_sspace(N1).ok


def test_nerve_segal_maps_are_isos():
    for name, cat in SMALL.items():
        N = nerve(as_icat(cat, 1), 3)
        assert all(segal_map(N, n)[0].is_iso() for n in range(4)), name
    N = nerve(tensor(standard_simplex(1, 2), FinCat.chain(1)), 3)
    assert all(segal_map(N, n)[0].is_iso() for n in range(4))


def test_counit_is_iso():
    for name, cat in SMALL.items():
        C = as_icat(cat, 2)
        S = s_adjoint(nerve(C, 2))
        F = adjunct(nerve(C, 2), S, C, SSMap.identity(nerve(C, 2)))
        assert F.check().ok and F.is_iso(), name


@pytest.mark.parametrize("p,q", [(0, 1), (1, 1), (2, 0), (1, 2)])
def test_S_of_cells(p, q):
    X = sspace_times(make_F(p, 2, 2), standard_simplex(q, 2))
    S = s_adjoint(X)
    target = times_simplex(as_icat(FinCat.chain(p), 2), q)
    assert (S.ob.size(), S.ar.size()) == (target.ob.size(), target.ar.size())
    maps = [F for F in enumerate_icat_maps(S, target) if F.is_iso()]
    assert maps


def test_S_of_spine_degree_zero():
    S = s_adjoint(make_G(2, 2, 2)[0])
    P = S.meta["presentations"][0]
    assert len(P.objects) == 3 and len(P.generators) == 2 and not P.relations
    assert len(S.level(0).arrows) == 6


def test_unit_and_adjunct_are_inverse():
    X = make_G(2, 2, 1)[0]
    S = s_adjoint(X)
    for name in ("I[1]", "vee", "Z2"):
        C = as_icat(SMALL[name], 1)
        NC = nerve(C, 2)
        phis = list(enumerate_ssmaps(X, NC))
        Fs = list(enumerate_icat_maps(S, C))
        assert len(phis) == len(Fs)
        NS = nerve(S, 2)
        eta = unit_map(X, S, NS)
        for phi in phis:
            F = adjunct(X, S, C, phi)
            assert F.check().ok
            back = eta.then(nerve_map(F, NS, NC))
            assert all(a == b for a, b in zip(back.maps, phi.maps))


def test_nerve_is_fully_faithful():
    for a in ("[1]", "I[1]", "vee"):
        for b in ("[1]", "I[1]", "Z2"):
            C, D = as_icat(SMALL[a], 1), as_icat(SMALL[b], 1)
            n1 = sum(1 for _ in enumerate_icat_maps(C, D))
            n2 = sum(1 for _ in enumerate_ssmaps(nerve(C, 2), nerve(D, 2)))
            assert n1 == n2, (a, b)


def test_mapping_space_examples():
    D = as_icat(FinCat.chaotic([0, 1]), 1)
    pt = InternalCat.discrete(point(1))
    M, complete = icat_mapping_space(pt, D, 0)
    assert complete and len(M.nondeg[0]) == len(D.ob.nondeg[0])
    C1 = as_icat(FinCat.chain(1), 1)
    M, _ = icat_mapping_space(C1, C1, 1)
    assert len(M.nondeg[0]) == 3


def test_mapping_space_product_law():
    C = as_icat(FinCat.chain(1), 1)
    D1, D2 = as_icat(FinCat.chain(1), 1), as_icat(FinCat.chaotic([0, 1]), 1)
    M, _ = icat_mapping_space(C, icat_product(D1, D2), 1)
    A, _ = icat_mapping_space(C, D1, 1)
    B, _ = icat_mapping_space(C, D2, 1)
    P, _ = product(A, B)
    assert [len(M.nondeg[d]) for d in range(2)] == [len(P.nondeg[d]) for d in range(2)]


def test_budget_flags_partial_mapping_space():
    C = as_icat(FinCat.chain(1), 1)
    D = as_icat(FinCat.chaotic([0, 1, 2]), 1)
    _, complete = icat_mapping_space(C, D, 0, budget=2)
    assert not complete


def test_strongly_segal_examples():
    for name, cat in SMALL.items():
        assert strongly_segal_check(as_icat(cat, 2), 2)["verdict"] == "PASS", name
    assert strongly_segal_check(grothendieck(groupoid_grothendieck(2)), 2)["verdict"] == "PASS"
    r = strongly_segal_check(internalize(monoid_interval(2)), 2)
    assert r["verdict"] == "FAIL"
    assert r["witness"]["map"] in ("source", "target", "objects") and "k" in r["witness"]


def test_nerve_preserves_chain_colimits():
    cc = CellComplex(D=2, M=2)
    pt = point(2)
    E = FinSSet.empty(2)
    chain = [cc.icat]
    for n, tag in ((1, "a"), (0, "b"), (1, "c")):
        cc.attach(AttachmentSpec(n, E, pt, SMap(E, pt, {}), SMap(E, nerve(cc.icat, 2)[n], {}), tag))
        chain.append(cc.icat)
    nerves = [nerve(C, 2) for C in chain]
    incs = [nerve_map(step.incl_C, nerves[i], nerves[i + 1]) for i, step in enumerate(cc.steps)]
    # colimit of the chain: identify each stage with its image in the next
    rel = [(SSMap.identity(nerves[i]), i, incs[i], i + 1) for i in range(len(incs))]
    Y, inj = sspace_colimit(nerves, rel)
    legs = []
    for i in range(len(nerves)):
        f = SSMap.identity(nerves[i])
        for g in incs[i:]:
            f = f.then(g)
        legs.append(f)
    cmp = colimit_induced(Y, legs, nerves[-1])
    assert cmp.check().ok and cmp.is_iso()
