import itertools

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form
from hypothesis import given, strategies as st

from conftest import rand_sset
from icatlab.categories import FinCat
from icatlab.certify import ISO, STRONG, FAILED, UNKNOWN, certify_equivalence, cylinder, find_iso
from icatlab.homology import Group, boundary_matrix, homology, smith_diagonal
from icatlab.kan import kan_fibration_probe, kan_probe, terminal_map
from icatlab.limits import coproduct, fiber_product, pi0, product, pushout, tuple_simplex
from icatlab.presheaves import parts
from icatlab.simplicial import (FinSSet, SMap, Simplex, TruncationError, boundary, degeneracy_word,
                                enumerate_smaps, horn, ordinary_nerve, point, sigma_from_word,
                                simplex_of_vertices, standard_simplex, surjections, validate)

seeds = st.integers(0, 10_000)


# --- validation and normal forms -----------------------------------------------------------

def test_standard_and_boundary_are_valid():
    assert validate(standard_simplex(2, 3)).ok
    bd = boundary(2, 3)
    assert validate(bd).ok
    assert [len(bd.nondeg[d]) for d in range(4)] == [3, 3, 0, 0]


def test_missing_vertex_is_named():
    X = FinSSet(1, {0: ["a"], 1: ["e"]}, {"e": (Simplex("a", (0,)), Simplex("ghost", (0,)))})
    rep = validate(X)
    assert not rep.ok
    assert any("ghost" in str(v) for v in rep.violations)


def test_face_of_wrong_dimension_is_rejected():
    X = FinSSet(2, {0: ["a"], 1: ["e"], 2: ["t"]},
                {"e": (Simplex("a", (0,)), Simplex("a", (0,))),
                 "t": (Simplex("a", (0,)), Simplex("e", (0, 1)), Simplex("e", (0, 1)))})
    assert not validate(X).ok


@given(seeds)
def test_simplicial_identities_on_random_objects(seed):
    X = rand_sset(seed)
    assert validate(X).ok
    for d in range(2, X.trunc_dim + 1):
        for x in X.simplices(d):
            for i, j in itertools.combinations(range(d + 1), 2):
                assert X.face(X.face(x, j), i) == X.face(X.face(x, i), j - 1)


@given(seeds)
def test_degeneracy_interchange(seed):
    X = rand_sset(seed)
    for d in range(X.trunc_dim):
        for x in X.simplices(d):
            for j in range(d + 1):
                y = X.degen(x, j)
                assert X.face(y, j) == x and X.face(y, j + 1) == x


@given(st.integers(0, 3), st.integers(0, 3))
def test_ez_round_trip(base_dim, extra):
    n = base_dim + extra
    for sigma in surjections(n, base_dim):
        assert sigma_from_word(degeneracy_word(sigma), base_dim) == sigma


# --- products, fiber products, pushouts ----------------------------------------------------

def test_square_has_two_triangles():
    P, _ = product(standard_simplex(1, 3), standard_simplex(1, 3))
    assert len(P.nondeg[2]) == 2 and len(P.nondeg[3]) == 0


def test_product_with_point_is_identity():
    X = boundary(2, 3)
    P, (p1, _) = product(X, point(3))
    assert p1.is_iso()


def test_discrete_product():
    bd = boundary(1, 2)
    P, _ = product(bd, bd)
    assert len(P.nondeg[0]) == 4 and not P.nondeg[1]


def test_composable_pairs_of_chain1(chain1):
    P, _, _ = fiber_product(chain1.t, chain1.s)
    assert len(P.nondeg[0]) == 4


def test_fiber_product_over_point_is_product():
    X, Y = standard_simplex(1, 2), boundary(2, 2)
    P, _, _ = fiber_product(terminal_map(X), terminal_map(Y))
    Q, _ = product(X, Y)
    assert find_iso(P, Q) is not None


def test_disjoint_vertex_pullback_is_empty():
    B = boundary(1, 2)
    pt = point(2)
    f = SMap(pt, B, {(0,): B.point((0,))})
    g = SMap(pt, B, {(0,): B.point((1,))})
    assert fiber_product(f, g)[0].is_empty()


def test_product_universal_property():
    X, Y = standard_simplex(1, 2), boundary(2, 2)
    P, (p, q) = product(X, Y)
    for T in (point(2), standard_simplex(1, 2), boundary(2, 2)):
        for a in enumerate_smaps(T, X):
            for b in enumerate_smaps(T, Y):
                fa, fb = SMap(T, X, a), SMap(T, Y, b)
                lifts = [h for h in enumerate_smaps(T, P)
                         if SMap(T, P, h).then(p) == fa and SMap(T, P, h).then(q) == fb]
                assert len(lifts) == 1


def test_pushouts():
    E = FinSSet.empty(2)
    pt = point(2)
    two = pushout(SMap(E, pt, {}), SMap(E, pt, {})).space
    assert len(two.nondeg[0]) == 2
    bd = boundary(1, 2)
    I = standard_simplex(1, 2)
    inc = SMap(bd, I, {b: I.point(b) for b in bd.dim_of})
    circle = pushout(inc, inc).space
    assert (len(circle.nondeg[0]), len(circle.nondeg[1])) == (2, 2)
    assert homology(circle, 1)[1].rank == 1
    same = pushout(SMap.identity(bd), inc).space
    assert find_iso(same, I) is not None


def test_pushout_universal_property():
    bd = boundary(1, 2)
    I = standard_simplex(1, 2)
    inc = SMap(bd, I, {b: I.point(b) for b in bd.dim_of})
    po = pushout(inc, inc)
    for T in (point(2), standard_simplex(1, 2), boundary(2, 2)):
        for a in enumerate_smaps(I, T):
            for b in enumerate_smaps(I, T):
                fa, fb = SMap(I, T, a), SMap(I, T, b)
                if inc.then(fa) == inc.then(fb):
                    h = po.induced([fa, fb], T)
                    assert h.check().ok
                    assert po.injections[0].then(h) == fa and po.injections[1].then(h) == fb


# --- components and homology ---------------------------------------------------------------

def test_pi0_examples():
    assert len(pi0(standard_simplex(1, 1))[0]) == 1
    assert len(pi0(boundary(1, 1))[0]) == 2
    with pytest.raises(TruncationError):
        pi0(point(0))


@given(seeds, seeds)
def test_pi0_of_coproduct_adds(a, b):
    X, Y = rand_sset(a), rand_sset(b)
    S = coproduct(X, Y).space
    assert len(pi0(S)[0]) == len(pi0(X)[0]) + len(pi0(Y)[0])


def test_homology_examples():
    assert homology(boundary(2, 3), 1) == [Group(1), Group(1)]
    assert homology(standard_simplex(2, 3), 1) == [Group(1), Group(0)]
    assert homology(FinSSet.empty(3), 2) == [Group(0), Group(0), Group(0)]
    with pytest.raises(TruncationError):
        homology(standard_simplex(1, 2), 2)


def test_torsion_from_projective_plane_like_matrix():
    assert smith_diagonal([[2, 0], [0, 3]]) == [1, 6]


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=4))
def test_smith_normal_form_matches_sympy(rows):
    ours = [d for d in smith_diagonal(rows) if d]
    M = sympy.Matrix(rows)
    snf = smith_normal_form(M, domain=sympy.ZZ)
    theirs = [abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0]
    assert ours == theirs


@given(seeds)
def test_h0_rank_is_pi0(seed):
    X = rand_sset(seed)
    assert homology(X, 0)[0].rank == len(pi0(X)[0])


@given(seeds)
def test_euler_characteristic(seed):
    X = rand_sset(seed, D=3, max_dim=2)
    H = homology(X, 2)
    chi = sum((-1) ** d * len(X.nondeg[d]) for d in range(3))
    assert chi == sum((-1) ** i * g.rank for i, g in enumerate(H))


def test_boundary_matrix_squares_to_zero():
    X = standard_simplex(3, 3)
    for n in (2, 3):
        A, B = sympy.Matrix(boundary_matrix(X, n - 1)), sympy.Matrix(boundary_matrix(X, n))
        if A.shape[0] and B.shape[1]:
            assert (A * B).is_zero_matrix


# --- Kan probes --------------------------------------------------------------------------

def test_groupoid_nerve_is_kan():
    N = ordinary_nerve(FinCat.chaotic([0, 1]), 3)
    assert kan_fibration_probe(terminal_map(N), 3).ok


def test_interval_is_not_kan():
    r = kan_fibration_probe(terminal_map(standard_simplex(1, 2)), 2)
    assert not r.ok
    assert r.witness["dim"] == 2 and r.witness["k"] in (0, 2)


def test_identity_is_fibration():
    X = standard_simplex(2, 3)
    assert kan_fibration_probe(SMap.identity(X), 3).ok


def test_horn_is_not_kan():
    assert not kan_probe(horn(2, 1, 2), 2).ok


# --- certificates ------------------------------------------------------------------------

def test_iso_certificate():
    I = standard_simplex(1, 2)
    c = certify_equivalence(I, I)
    assert c.tier == ISO
    f, g = c.maps
    assert f.then(g) == SMap.identity(I)


def contraction_data(D=2):
    """Delta[1] -> Delta[0] with the homotopy ``(x, t) -> min(x, t)``."""
    I, pt = standard_simplex(1, D), point(D)
    f = SMap.constant(I, pt, (0,))
    g = SMap(pt, I, {(0,): I.point((0,))})

    def shrink(p):
        x, t = parts(p)
        ends = [min(a[0], b[0]) for a, b in zip(I.vertices(x), I.vertices(t))]
        return simplex_of_vertices(tuple(ends))
    hx = SMap.from_function(cylinder(I), I, shrink)
    hy = SMap.constant(cylinder(pt), pt, (0,))
    return I, pt, f, g, hx, hy


def test_strong_certificate_from_contraction():
    I, pt, f, g, hx, hy = contraction_data()
    assert hx.check().ok and hy.check().ok
    c = certify_equivalence(I, pt, strong={"f": f, "g": g, "hx": hx, "hy": hy}, mode="auto", budget=0)
    assert c.tier in (ISO, STRONG)
    c = certify_equivalence(I, pt, map=f, strong={"f": f, "g": g, "hx": hx, "hy": hy})
    assert c.tier == STRONG
    assert homology(I, 1) == homology(pt, 1)


def test_failed_certificate_names_h1():
    c = certify_equivalence(boundary(2, 3), point(3))
    assert c.tier == FAILED and c.witness["obstruction"] == "H_1"


def test_budget_exhaustion_is_unknown():
    X = ordinary_nerve(FinCat.discrete(range(6)), 2)
    Y = ordinary_nerve(FinCat.discrete(range(6)), 2)
    c = certify_equivalence(X, Y, mode="iso", budget=3)
    assert c.tier == UNKNOWN and not c.ok


@given(seeds)
def test_self_certificate_is_iso(seed):
    X = rand_sset(seed)
    assert certify_equivalence(X, X).tier == ISO


def test_tuple_simplex_normalizes():
    a = Simplex("x", (0, 0))
    b = Simplex("y", (0, 0))
    t = tuple_simplex([a, b])
    assert t.sigma == (0, 0) and t.base[0].sigma == (0,)
