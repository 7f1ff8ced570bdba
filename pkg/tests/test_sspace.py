import pytest

from conftest import as_icat
from icatlab.categories import FinCat, coproduct
from icatlab.certify import FAILED, ISO
from icatlab.homology import Group, homology
from icatlab.icat import InternalCat, functor_map, nerve, nerve_map
from icatlab.limits import fiber_power
from icatlab.simplicial import FinSSet, SMap, boundary, point, standard_simplex
from icatlab.sspace import (HoError, SimpSpace, Square, completeness_check, diagonal, dk_check, enumerate_ssmaps,
                            ho_category, homotopy_cartesian_probe, hoequiv, latching, make_E, make_F, make_G,
                            pi0_mod_equiv, segal_map, segal_square, validate_sspace)

CATS = {
    "[0]": FinCat.chain(0),
    "[1]": FinCat.chain(1),
    "[2]": FinCat.chain(2),
    "I[1]": FinCat.chaotic([0, 1]),
    "Z2": FinCat.cyclic_group(2),
    "vee": FinCat.poset(range(3), lambda a, b: a == b or a == 0),
}


def nerves(M=3, D=1):
    return {k: nerve(as_icat(c, D), M) for k, c in CATS.items()}


def test_representing_objects_are_valid():
    for X in (make_F(0), make_F(2), make_G(2)[0], make_E()):
        assert validate_sspace(X).ok


def test_F_counts():
    assert all(len(make_F(0)[m].nondeg[0]) == 1 for m in range(4))
    assert len(make_F(1)[2].nondeg[0]) == 4  # monotone maps [2] -> [1]


def test_E_counts():
    E = make_E(3)
    assert [len(E[m].nondeg[0]) for m in range(4)] == [2, 4, 8, 16]


def test_G_inclusion():
    G1, inc1 = make_G(1)
    assert inc1.is_iso()
    G2, inc2 = make_G(2)
    assert inc2.check().ok
    top = (0, 1, 2)
    assert top not in inc2[2].image_ids()


@pytest.mark.parametrize("n", [0, 1, 2])
def test_F_represents_levels(n):
    for name, X in nerves(M=2).items():
        count = sum(1 for _ in enumerate_ssmaps(make_F(n, 2, 1), X))
        assert count == len(X[n].nondeg[0]), name


@pytest.mark.parametrize("n", [1, 2])
def test_G_represents_fiber_powers(n):
    for name, X in nerves(M=2).items():
        count = sum(1 for _ in enumerate_ssmaps(make_G(n, 2, 1)[0], X))
        P, _ = fiber_power(X[1], X.d(1, 0), X.d(1, 1), n)
        assert count == len(P.nondeg[0]), name


def test_G2_into_chain2_counts_composable_pairs():
    X = nerve(as_icat(FinCat.chain(2), 1), 2)
    chains = FinCat.chain(2).composable_chains(2)
    assert sum(1 for _ in enumerate_ssmaps(make_G(2, 2, 1)[0], X)) == len(chains)


def test_segal_maps_of_nerves_are_isos():
    for name, X in nerves().items():
        for n in range(X.M + 1):
            assert segal_map(X, n)[0].is_iso(), (name, n)


def test_segal_map_of_spine_is_not_iso():
    assert segal_map(make_F(2), 2)[0].is_iso()
    G, _ = make_G(2)
    f, P = segal_map(G, 2)
    assert f.is_injective() and not f.is_iso()


def test_constant_space_segal_map():
    X = SimpSpace.constant(point(2), 3)
    assert segal_map(X, 1)[0].is_iso()


def test_homotopy_cartesian_examples():
    K = standard_simplex(1, 2)
    idk = SMap.identity(K)
    r = homotopy_cartesian_probe(Square(idk, idk, idk, idk), 2, 1)
    assert r["verdict"] == "PASS" and r["cert"].tier == ISO
    pt, E = point(2), FinSSet.empty(2)
    B = boundary(1, 2)
    a = SMap(pt, B, {(0,): B.point((0,))})
    b = SMap(pt, B, {(0,): B.point((1,))})
    # empty corner over an empty pullback is fine
    assert homotopy_cartesian_probe(Square(SMap(E, pt, {}), SMap(E, pt, {}), a, b), 2, 1)["verdict"] == "PASS"
    # empty corner over the pullback pt x_pt pt = pt is not
    idp = SMap.identity(pt)
    r = homotopy_cartesian_probe(Square(SMap(E, pt, {}), SMap(E, pt, {}), idp, idp), 2, 1)
    assert r["verdict"] == "FAIL" and r["cert"].tier == FAILED
    leg = SMap.constant(K, pt, (0,))
    r = homotopy_cartesian_probe(Square(leg, leg, SMap.identity(pt), SMap.identity(pt)), 2, 1)
    assert r["verdict"] == "PASS"
    bad = Square(SMap.identity(K), SMap.identity(K), leg, leg)
    assert homotopy_cartesian_probe(bad, 2, 1)["verdict"] == "INCONCLUSIVE-LEG"


def test_segal_square_of_groupoid_nerve():
    X = nerve(as_icat(FinCat.chaotic([0, 1]), 2), 2)
    assert homotopy_cartesian_probe(segal_square(X), 2, 1)["verdict"] == "PASS"


def test_latching():
    X = nerve(as_icat(FinCat.chain(1), 1), 3)
    L0, _, _ = latching(X, 0)
    assert L0.is_empty()
    L1, f1, _ = latching(X, 1)
    assert len(L1.nondeg[0]) == 2 and f1.is_injective()
    for r in range(X.M + 1):
        assert latching(X, r)[1].is_injective()
    for Y in (make_F(2), make_E(), make_G(2)[0]):
        assert all(latching(Y, r)[1].is_injective() for r in range(Y.M + 1))


def test_diagonal_examples():
    K = boundary(2, 3)
    assert diagonal(SimpSpace.constant(K, 3)).same_as(K) or homology(diagonal(SimpSpace.constant(K, 3)), 1) == homology(K, 1)
    d1 = diagonal(nerve(as_icat(FinCat.chain(1), 3), 3))
    assert homology(d1, 2) == [Group(1), Group(0), Group(0)]
    dI = diagonal(nerve(as_icat(FinCat.chaotic([0, 1]), 3), 3))
    H = homology(dI, 2)
    assert H[0] == Group(1) and H[1] == Group(0)


def test_ho_category_examples():
    for name in ("[0]", "[1]", "[2]", "vee", "Z2"):
        H = ho_category(nerves(M=2)[name])
        assert (len(H.objects), len(H.arrows)) == (len(CATS[name].objects), len(CATS[name].arrows))
    H = ho_category(nerves(M=2)["I[1]"])
    assert H.is_groupoid() and len(H.arrows) == 4
    H1 = ho_category(nerves(M=2)["[1]"])
    assert len(H1.hom(0, 1)) == 1


def test_ho_needs_fillers():
    G, _ = make_G(2)
    with pytest.raises(HoError):
        ho_category(G)


def test_hoequiv_examples():
    X = nerves(M=2)
    Heq, chosen = hoequiv(X["I[1]"])
    assert len(chosen) == 4
    Heq, chosen = hoequiv(X["[1]"])
    assert sorted(Heq.nondeg[0]) == [(0, 0), (1, 1)]
    for name, Y in X.items():
        Heq, _ = hoequiv(Y)
        s0 = Y.s(0, 0)
        assert all(s0(Y[0].point(v)).base in Heq.dim_of for v in Y[0].nondeg[0]), name


def test_pi0_mod_equiv_examples():
    X = nerves(M=2)
    assert len(pi0_mod_equiv(X["I[1]"])[0]) == 1
    assert len(pi0_mod_equiv(X["[1]"])[0]) == 2
    two = nerve(InternalCat.discrete(FinSSet.discrete([0, 1], 1)), 2)
    assert len(pi0_mod_equiv(two)[0]) == 2


def test_completeness_examples():
    assert completeness_check(make_F(0, 2, 2)).tier == ISO
    c = completeness_check(nerve(as_icat(FinCat.chaotic([0, 1]), 2), 2))
    assert c.tier == FAILED and (c.witness["source"], c.witness["target"]) == (2, 4)
    for name in ("[1]", "[2]", "vee"):
        assert completeness_check(nerves(M=2, D=2)[name]).tier == ISO


def _dk(F, M=2):
    return dk_check(nerve_map(F, nerve(F.source, M), nerve(F.target, M)))


def test_dk_examples():
    one = as_icat(FinCat.chain(0), 2)
    I = as_icat(FinCat.chaotic([0, 1]), 2)
    two = as_icat(coproduct(FinCat.chain(0), FinCat.chain(0)), 2)
    ident = functor_map(I, I, {0: 0, 1: 1}, {a: a for a in I.ar.nondeg[0]})
    assert _dk(ident)["verdict"] == "DK"
    inc = functor_map(one, I, {0: 0}, {(0, 0): (0, 0)})
    assert _dk(inc)["verdict"] == "DK"
    both = functor_map(two, I, {(0, 0): 0, (1, 0): 1},
                       {((0, (0, 0))): (0, 0), ((1, (0, 0))): (1, 1)})
    r = _dk(both)
    assert r["verdict"] == "NOT-DK" and not r["fully_faithful"]


def test_dk_composition_on_corpus():
    one = as_icat(FinCat.chain(0), 2)
    I = as_icat(FinCat.chaotic([0, 1]), 2)
    f = functor_map(one, I, {0: 0}, {(0, 0): (0, 0)})
    swap = functor_map(I, I, {0: 1, 1: 0}, {(a, b): (1 - a, 1 - b) for a, b in I.ar.nondeg[0]})
    assert _dk(f)["verdict"] == _dk(swap)["verdict"] == "DK"
    from icatlab.icat import ICatMap
    g = ICatMap(one, I, f.fo.then(swap.fo), f.fa.then(swap.fa))
    assert _dk(g)["verdict"] == "DK"


def test_enumerated_maps_are_natural():
    X = make_G(2, 2, 1)[0]
    Y = nerves(M=2)["I[1]"]
    for f in enumerate_ssmaps(X, Y, limit=5):
        assert f.check().ok
