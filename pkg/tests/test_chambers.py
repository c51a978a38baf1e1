import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rabuild.chambers import BuildingSpec, ExponentOutOfRange, SpecMismatch, inverse, j_prefix, mult, normalize, random_chamber, weyl_distance
from rabuild.coxeter import CoxeterDiagram, UnknownType

from conftest import pentagon_m
from oracles import bfs_distances

# hypothesis tests cannot take function-scoped fixtures
_PENTAGON = BuildingSpec(CoxeterDiagram([1, 2, 3, 4, 5], pentagon_m()), {i: 3 for i in range(1, 6)})


def test_normalize_examples(square):
    assert normalize(square, [(2, 1), (1, 2)]).syllables == ((1, 2), (2, 1))
    assert normalize(square, [(1, 1), (1, 2)]).syllables == ()
    assert normalize(square, [(1, 1), (2, 1), (1, 1)]).syllables == ((1, 2), (2, 1))


def test_normalize_errors(square):
    with pytest.raises(UnknownType):
        normalize(square, [(9, 1)])
    with pytest.raises(ExponentOutOfRange):
        normalize(square, [(1, 3)])
    with pytest.raises(ExponentOutOfRange):
        normalize(square, [(1, 0)])


def test_mult_and_inverse(dihedral):
    a1, b1 = dihedral.syllable("a"), dihedral.syllable("b")
    assert mult(a1, b1).syllables == (("a", 1), ("b", 1))
    assert inverse(normalize(dihedral, [("a", 1), ("b", 2)])).syllables == (("b", 1), ("a", 2))


def test_spec_mismatch(dihedral, square):
    with pytest.raises(SpecMismatch):
        mult(dihedral.identity, square.identity)


@pytest.mark.parametrize("name", ["dihedral", "pentagon"])
def test_group_axioms(name, request):
    spec = request.getfixturevalue(name)
    cs = [random_chamber(spec, 6, s) for s in range(60)]
    for c in cs:
        assert mult(c, inverse(c)) == spec.identity
        assert mult(inverse(c), c) == spec.identity
    for x, y, z in zip(cs, cs[1:], cs[2:]):
        assert mult(mult(x, y), z) == mult(x, mult(y, z))


def test_weyl_distance_examples(dihedral):
    c = normalize(dihedral, [("a", 1), ("b", 2), ("a", 1)])
    assert weyl_distance(c, c) == ()
    assert weyl_distance(dihedral.identity, c) == ("a", "b", "a")


def test_weyl_distance_reverses(pentagon):
    D = pentagon.diagram
    for s in range(500):
        c = random_chamber(pentagon, 6, 2 * s)
        d = random_chamber(pentagon, 6, 2 * s + 1)
        assert D.weyl_normalize(reversed(weyl_distance(c, d))) == weyl_distance(d, c)


def test_gallery_distance_matches_bfs(pentagon):
    dist = bfs_distances(pentagon, pentagon.identity, 3)
    assert sorted(dist.values()).count(1) == 10
    for x, r in dist.items():
        assert pentagon.dist(pentagon.identity, x) == r


def test_weyl_image_multiplies_without_merges(dihedral):
    # the image in W is not a homomorphism: a^1 a^1 = a^2 maps to s_a, not to e;
    # it is multiplicative exactly when no syllables merge
    D = dihedral.diagram
    members = list(bfs_distances(dihedral, dihedral.identity, 3))
    merged = 0
    for a in members[::2]:
        for b in members[::3]:
            ab = mult(a, b)
            assert len(ab) <= len(a) + len(b)
            if len(ab) == len(a) + len(b):
                expected = D.weyl_normalize(dihedral.weyl_image(a) + dihedral.weyl_image(b))
                assert weyl_distance(dihedral.identity, ab) == expected
            else:
                merged += 1
    assert merged


def test_j_prefix_examples(dihedral, pentagon):
    c = normalize(dihedral, [("a", 1), ("b", 1)])
    p, r = j_prefix(dihedral, c, ["a"])
    assert (p.syllables, r.syllables) == ((("a", 1),), (("b", 1),))
    a_only = dihedral.syllable("a", 2)
    assert j_prefix(dihedral, a_only, ["a"]) == (a_only, dihedral.identity)
    c = normalize(pentagon, [(1, 1), (2, 1)])
    p, r = j_prefix(pentagon, c, [2])
    assert (p.syllables, r.syllables) == (((2, 1),), ((1, 1),))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6), st.sets(st.sampled_from([1, 2, 3, 4, 5])))
def test_j_prefix_is_a_gate_factorisation(seed, J):
    spec = _PENTAGON
    c = random_chamber(spec, 8, seed)
    p, r = j_prefix(spec, c, J)
    assert mult(p, r) == c
    assert len(c) == len(p) + len(r)
    assert set(spec.weyl_image(p)) <= J
    # no J-letter of the remainder can be moved to the front
    word = r.syllables
    for k, (t, _) in enumerate(word):
        if t in J:
            assert not all(spec.diagram.m(t, s) == 2 for s, _ in word[:k])


def test_random_chamber_contract(dihedral):
    assert random_chamber(dihedral, 0, 5) == dihedral.identity
    assert random_chamber(dihedral, 6, 5) == random_chamber(dihedral, 6, 5)
    for s in range(50):
        assert len(random_chamber(dihedral, 6, s)) <= 6


def test_thick_flag(dihedral):
    assert dihedral.thick


