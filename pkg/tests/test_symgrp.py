import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symcat import symgrp
from symcat.errors import DimensionMismatch, GroupMismatch, MalformedDocument, NonIntegralCount

import oracles
import strategies as S


def c4grid():
    return symgrp.SetAction.from_table(symgrp.cyclic(4), [[(i + g) % 4 for i in range(4)] for g in range(4)])


def c4perm():
    return symgrp.permutation_representation(c4grid())


# -- groups ------------------------------------------------------------------------

@pytest.mark.parametrize("G", [symgrp.z2(), symgrp.cyclic(3), symgrp.cyclic(4), symgrp.symmetric(3), symgrp.trivial_group()])
def test_standard_groups_are_valid(G):
    assert symgrp.validate_group(G).passed
    assert oracles.group_lawful(G.table, G.identity, G.inverse)


def test_s3_checks_216_triples():
    rep = symgrp.validate_group(symgrp.symmetric(3))
    assert rep.passed and rep.cases == 6 * 4 + 216


def test_z2_bad_inverse():
    G = symgrp.z2()
    bad = symgrp.FinGroup.from_table(G.names, G.table, 0, (0, 0))
    rep = symgrp.validate_group(bad)
    assert rep.laws_violated() == {"inverse"}
    assert rep.violations[0].witness == ("s", "e")


def test_group_table_shape_errors():
    with pytest.raises(MalformedDocument):
        symgrp.FinGroup.from_table(("e", "s"), [[0, 1]])
    with pytest.raises(MalformedDocument):
        symgrp.FinGroup.from_table(("e", "s"), [[0, 2], [1, 0]])
    with pytest.raises(MalformedDocument):
        symgrp.FinGroup.from_table(("a", "b"), [[1, 1], [1, 1]])


@given(st.data())
def test_group_entry_mutants_match_oracle(data):
    G = data.draw(st.sampled_from([symgrp.z2(), symgrp.cyclic(3), symgrp.symmetric(3)]))
    a = data.draw(st.integers(0, G.order - 1))
    b = data.draw(st.integers(0, G.order - 1))
    v = data.draw(st.integers(0, G.order - 1).filter(lambda v: v != G.table[a][b]))
    table = [list(r) for r in G.table]
    table[a][b] = v
    M = symgrp.FinGroup(G.names, tuple(map(tuple, table)), G.identity, G.inverse)
    assert not symgrp.validate_group(M).passed
    assert not oracles.group_lawful(M.table, M.identity, M.inverse)


# -- actions and orbits ---------------------------------------------------------------

def test_action_examples():
    rep = symgrp.validate_action(c4grid())
    assert rep.passed
    for G in (symgrp.z2(), symgrp.symmetric(3)):
        assert symgrp.validate_action(symgrp.trivial_action(G, 5)).passed
    bad = symgrp.SetAction.from_table(symgrp.z2(), [[0, 1], [0, 0]])
    rep = symgrp.validate_action(bad)
    assert "bijective" in rep.laws_violated()
    assert ("bijective", ("s",)) in [(v.law, v.witness) for v in rep.violations]


def test_orbit_examples():
    assert symgrp.orbits(c4grid()).count == 1
    assert symgrp.orbits(symgrp.trivial_action(symgrp.trivial_group(), 7)).count == 7
    pairs = symgrp.product_action(c4grid(), c4grid())
    assert pairs.size == 16 and symgrp.orbits(pairs).count == 4


def test_burnside_examples():
    assert symgrp.burnside(c4grid()) == 1
    assert symgrp.burnside(symgrp.trivial_action(symgrp.trivial_group(), 5)) == 5
    swap = symgrp.SetAction.from_table(symgrp.z2(), [[0, 1], [1, 0]])
    pairs = symgrp.product_action(swap, swap)
    assert [sum(pairs.act(g, i) == i for i in range(4)) for g in range(2)] == [4, 0]
    assert symgrp.burnside(pairs) == 2 == symgrp.orbits(pairs).count


def test_burnside_rejects_nonintegral():
    broken = symgrp.SetAction.from_table(symgrp.z2(), [[0, 1, 2], [1, 1, 2]])
    with pytest.raises(NonIntegralCount):
        symgrp.burnside(broken)


def test_product_action_group_mismatch():
    with pytest.raises(GroupMismatch):
        symgrp.product_action(c4grid(), symgrp.trivial_action(symgrp.z2(), 2))


def test_orbit_members_are_reachable():
    part = symgrp.orbits(symgrp.product_action(c4grid(), c4grid()))
    a = symgrp.product_action(c4grid(), c4grid())
    for orbit in part.members:
        reach = {a.act(g, orbit[0]) for g in a.group}
        assert reach == set(orbit)


@given(st.sampled_from(sorted(S.SMALL_GROUPS)), st.integers(0, 2**32 - 1))
def test_burnside_equals_orbits_equals_oracle(gname, seed):
    G = S.SMALL_GROUPS[gname]()
    a = S.random_action(G, np.random.default_rng(seed))
    assert symgrp.validate_action(a).passed
    n = symgrp.burnside(a)
    assert n == symgrp.orbits(a).count == oracles.orbit_count(a.table, a.size)


def test_coset_generator_reaches_every_transitive_action_size():
    G = symgrp.symmetric(3)
    sizes = {G.order // len(H) for H in S.subgroups(G)}
    assert sizes == {1, 2, 3, 6}


# -- representations --------------------------------------------------------------------

def test_representation_examples():
    assert symgrp.validate_representation(c4perm()).passed
    assert symgrp.validate_representation(symgrp.swap_rep()).passed
    bad = symgrp.Representation(symgrp.z2(), np.array([np.eye(2), 2 * np.eye(2)]))
    rep = symgrp.validate_representation(bad)
    assert rep.laws_violated() == {"homomorphism"}
    assert ("homomorphism", ("s", "s")) in [(v.law, v.witness) for v in rep.violations]


def test_representation_shape_error():
    with pytest.raises(MalformedDocument):
        symgrp.Representation(symgrp.z2(), np.zeros((2, 2, 3)))


@pytest.mark.parametrize("name,r", S.small_reps(), ids=[n for n, _ in S.small_reps()])
def test_one_entry_scaled_by_two_is_rejected(name, r):
    assert symgrp.validate_representation(r).passed
    for g in r.group:
        for i, j in itertools.product(range(r.dim), repeat=2):
            m = np.array(r.matrices)
            if m[g, i, j] == 0:
                continue
            m[g, i, j] *= 2
            assert not symgrp.validate_representation(symgrp.Representation(r.group, m)).passed, (g, i, j)


@given(st.sampled_from(sorted(S.SMALL_GROUPS)), st.integers(0, 2**32 - 1))
def test_permutation_representations_are_exact(gname, seed):
    a = S.random_action(S.SMALL_GROUPS[gname](), np.random.default_rng(seed))
    r = symgrp.permutation_representation(a)
    rep = symgrp.validate_representation(r)
    assert rep.passed and rep.details["max_residual"] == 0.0
    assert symgrp.as_permutation(r) == a


# -- Reynolds ---------------------------------------------------------------------------

def test_reynolds_vector_examples():
    np.testing.assert_array_equal(symgrp.reynolds_vector(symgrp.swap_rep(), [3.0, 5.0]), [4.0, 4.0])
    np.testing.assert_array_equal(symgrp.reynolds_vector(symgrp.swap_rep(), [1.0, 1.0]), [1.0, 1.0])
    reg = symgrp.permutation_representation(symgrp.regular_action(symgrp.z2()))
    np.testing.assert_array_equal(symgrp.reynolds_vector(reg, [3.0, 1.0]), [2.0, 2.0])
    with pytest.raises(DimensionMismatch):
        symgrp.reynolds_vector(symgrp.swap_rep(), [1.0, 2.0, 3.0])


def test_reynolds_map_examples():
    rng = np.random.default_rng(0)
    r = c4perm()
    W = rng.normal(size=(4, 4))
    Wbar = symgrp.reynolds_map(r, r, W)
    first = Wbar[0]
    for k in range(4):
        np.testing.assert_allclose(Wbar[k], np.roll(first, k), atol=1e-12)
    np.testing.assert_allclose(symgrp.reynolds_map(r, r, Wbar), Wbar, atol=1e-12)

    row = rng.normal(size=(1, 4))
    out = symgrp.reynolds_map(r, symgrp.trivial_representation(r.group), row)
    np.testing.assert_allclose(out, np.full((1, 4), row.mean()), atol=1e-12)
    with pytest.raises(DimensionMismatch):
        symgrp.reynolds_map(r, r, np.zeros((3, 4)))
    with pytest.raises(GroupMismatch):
        symgrp.reynolds_map(r, symgrp.swap_rep(), np.zeros((2, 4)))


@pytest.mark.parametrize("name,r", S.small_reps(), ids=[n for n, _ in S.small_reps()])
def test_reynolds_idempotent_and_invariant(name, r):
    rng = np.random.default_rng(1)
    for _ in range(100):
        v = rng.normal(size=r.dim)
        once = symgrp.reynolds_vector(r, v)
        np.testing.assert_allclose(symgrp.reynolds_vector(r, once), once, atol=1e-12)
        for g in r.group:
            np.testing.assert_allclose(r(g) @ once, once, atol=symgrp.ALG_TOL)
    W = rng.normal(size=(r.dim, r.dim))
    once = symgrp.reynolds_map(r, r, W)
    np.testing.assert_allclose(symgrp.reynolds_map(r, r, once), once, atol=1e-12)
    assert symgrp.equivariance_residual(r, r, once) <= symgrp.ALG_TOL


# -- intertwiners -----------------------------------------------------------------------

def test_intertwiner_examples():
    sw = symgrp.swap_rep()
    basis = symgrp.intertwiner_basis(sw, sw)
    assert len(basis) == 2
    span = np.array([b.ravel() for b in basis])
    for target in (np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]])):
        coef, *_ = np.linalg.lstsq(span.T, target.ravel(), rcond=None)
        np.testing.assert_allclose(span.T @ coef, target.ravel(), atol=1e-12)
    assert len(symgrp.intertwiner_basis(c4perm(), c4perm())) == 4
    (col,) = symgrp.intertwiner_basis(symgrp.trivial_representation(symgrp.z2()), sw)
    np.testing.assert_allclose(col[:, 0] / col[0, 0], [1.0, 1.0], atol=1e-12)


def _pairs():
    reps = S.small_reps()
    return [(a, ra, b, rb) for (a, ra), (b, rb) in itertools.product(reps, repeat=2) if ra.group == rb.group]


@pytest.mark.parametrize("a,ra,b,rb", _pairs(), ids=[f"{a}->{b}" for a, _, b, _ in _pairs()])
def test_intertwiner_dimension_matches_exact_rank(a, ra, b, rb):
    basis = symgrp.intertwiner_basis(ra, rb)
    assert len(basis) == oracles.intertwiner_dimension_exact(ra.matrices.tolist(), rb.matrices.tolist())
    for W in basis:
        assert symgrp.equivariance_residual(ra, rb, W) <= 1e-12
    if ra.is_permutation() and rb.is_permutation():
        pair = symgrp.product_action(symgrp.as_permutation(rb), symgrp.as_permutation(ra))
        assert len(basis) == symgrp.burnside(pair)


# -- fixed subspace and orbit distance ------------------------------------------------------

def test_fixed_subspace_examples():
    (v,) = symgrp.fixed_subspace(symgrp.swap_rep()).T
    np.testing.assert_allclose(v / v[0], [1.0, 1.0], atol=1e-12)
    assert symgrp.fixed_subspace(symgrp.trivial_representation(symgrp.z2(), 3)).shape == (3, 3)
    reg = symgrp.permutation_representation(symgrp.regular_action(symgrp.z2()))
    assert symgrp.fixed_subspace(reg).shape == (2, 1)


def test_orbit_distance_examples():
    sw = symgrp.swap_rep()
    assert symgrp.orbit_distance(sw, [1, 0], [0, 1]) == 0.0
    assert symgrp.orbit_distance(sw, [1.5, -2], [1.5, -2]) == 0.0
    assert symgrp.orbit_distance(sw, [1, 0], [2, 0]) == 1.0
    with pytest.raises(DimensionMismatch):
        symgrp.orbit_distance(sw, [1, 0], [1, 0, 0])


@pytest.mark.parametrize("name,r", S.small_reps(), ids=[n for n, _ in S.small_reps()])
def test_orbit_distance_properties(name, r):
    rng = np.random.default_rng(2)
    for _ in range(20):
        x, y = rng.normal(size=(2, r.dim))
        d = symgrp.orbit_distance(r, x, y)
        assert 0.0 <= d <= np.linalg.norm(x - y) + 1e-15
        for g in r.group:
            assert symgrp.orbit_distance(r, x, r(g) @ x) <= 1e-12
        if r.is_orthogonal():
            assert abs(d - symgrp.orbit_distance(r, y, x)) <= 1e-12
