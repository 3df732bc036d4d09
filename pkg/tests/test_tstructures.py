"""t-structures, hearts and t-trees over the three-vertex running algebra."""

import pytest

from tiltlab import algebra, derived, rep, tilting, tstructures
from tiltlab.errors import ModeUnsupported


@pytest.fixture(scope="module")
def a3():
    q = algebra.make_quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])
    return algebra.build_algebra(q, ["a*b"], 2)


@pytest.fixture(scope="module")
def ctx(a3):
    t = rep.direct_sum([rep.projective(a3, 2), rep.projective(a3, 1),
                        rep.simple(a3, 1)])[0]
    return tilting.TiltingContext(t, 2)


@pytest.fixture(scope="module")
def wb(ctx):
    return tstructures.DerivedWorkbench(ctx)


def profile(c):
    return dict(sorted(derived.cohomology_profile(c).items()))


def profiles(cs):
    return sorted(tuple(sorted(derived.cohomology_profile(c).items()))
                  for c in cs)


S1 = (1, 0, 0)
S2 = (0, 1, 0)
S3 = (0, 0, 1)
M12 = (1, 1, 0)
M23 = (0, 1, 1)
TWO_TERM = ((-1, S3), (0, S1))


def test_universe_is_the_six_objects(wb):
    assert len(wb.universe) == 6


def test_tilting_coaisle_membership(wb, a3):
    tilt = wb.tilting_structure
    s3 = derived.stalk_complex(rep.simple(a3, 3), 0)
    # 3[2] is the leftmost shift of 3 in the coaisle: 3[3] falls out,
    # while 3[1] = 3[2][-1] stays in (coaisles absorb right shifts)
    assert tilt.in_coaisle(derived.shift(s3, 2), 0)
    assert not tilt.in_coaisle(derived.shift(s3, 3), 0)
    assert tilt.in_coaisle(derived.shift(s3, 1), 0)
    # ... but 3[1] is not in the tilting heart (it fails the aisle test)
    assert not tilt.in_aisle(derived.shift(s3, 1), 0)


def test_natural_coaisle_contains_modules(wb, a3):
    nat = wb.structure(0)
    for v in (1, 2, 3):
        assert nat.in_coaisle(derived.stalk_complex(rep.simple(a3, v), 0), 0)


def test_intermediate_coaisle(wb, a3):
    d1 = wb.structure(1)
    s3 = derived.stalk_complex(rep.simple(a3, 3), 0)
    assert d1.in_coaisle(derived.shift(s3, 1), 0)
    assert not d1.in_coaisle(derived.shift(s3, 2), 0)


def test_tilting_aisle_membership(wb, a3):
    tilt = wb.tilting_structure
    s2 = derived.stalk_complex(rep.simple(a3, 2), 0)
    s3 = derived.stalk_complex(rep.simple(a3, 3), 0)
    # Ext^1(T, 2) != 0, so the module 2 enters the aisle only at level 1
    assert not tilt.in_aisle(s2, 0)
    assert tilt.in_aisle(s2, 1)
    # Ext^2(T, 3) != 0: 3 enters at level 2
    assert not tilt.in_aisle(s3, 0)
    assert not tilt.in_aisle(s3, 1)
    assert tilt.in_aisle(s3, 2)


def test_natural_heart_is_the_module_category(wb):
    assert profiles(wb.heart(0)) == sorted([
        ((0, S1),), ((0, S2),), ((0, S3),), ((0, M12),), ((0, M23),)])


def test_intermediate_heart(wb):
    assert profiles(wb.heart(1)) == sorted([
        ((0, S1),), ((0, S2),), ((-1, S3),), ((0, M12),), ((0, M23),),
        TWO_TERM])


def test_tilting_heart(wb):
    expected = sorted([
        ((0, S1),), ((-2, S3),), ((0, M12),), ((0, M23),), TWO_TERM])
    assert profiles(wb.heart(2)) == expected
    assert wb.tilting_heart_members() == wb.heart_members(2)


def test_heart_torsion_pairs(wb):
    xk, yk = wb.heart_torsion_pair(0)
    assert profiles(wb.member(k) for k in xk) == sorted([
        ((0, S1),), ((0, S2),), ((0, M12),), ((0, M23),)])
    assert profiles(wb.member(k) for k in yk) == [((0, S3),)]
    xk, yk = wb.heart_torsion_pair(1)
    assert profiles(wb.member(k) for k in xk) == sorted([
        ((0, S1),), ((0, M12),), ((0, M23),), TWO_TERM])
    assert profiles(wb.member(k) for k in yk) == [((-1, S3),)]


def test_torsion_pair_orthogonality(wb):
    for i in (0, 1):
        xk, yk = wb.heart_torsion_pair(i)
        for kx in xk:
            for ky in yk:
                assert wb.homs.dim(wb.member(kx), wb.member(ky)) == 0


def test_torsion_decompose_trivial_cases(wb, a3):
    s2 = derived.stalk_complex(rep.simple(a3, 2), 0)
    u, _, c = wb.torsion_decompose_in_heart(s2, 0, 0)
    assert profile(u) == {0: S2}
    assert derived.is_zero_in_derived(c)
    s3 = derived.stalk_complex(rep.simple(a3, 3), 0)
    u, _, c = wb.torsion_decompose_in_heart(s3, 0, 0)
    assert derived.is_zero_in_derived(u)
    assert profile(c) == {0: S3}


def test_torsion_decompose_proper_triangle(wb, a3):
    s2 = derived.stalk_complex(rep.simple(a3, 2), 0)
    u, f, c = wb.torsion_decompose_in_heart(s2, 1, 0)
    assert profile(u) == {0: M23}
    assert profile(c) == {-1: S3}
    assert f is not None


def test_t_tree_of_simple_2(wb, a3):
    tree = wb.t_tree(rep.simple(a3, 2))
    assert profile(tree.node((0,))) == {0: S2}
    assert derived.is_zero_in_derived(tree.node((1,)))
    assert profile(tree.node((0, 0))) == {0: M23}
    assert profile(tree.node((0, 1))) == {-1: S3}
    assert derived.is_zero_in_derived(tree.node((1, 0)))
    assert derived.is_zero_in_derived(tree.node((1, 1)))
    assert "X_00" in tree.render()


def test_t_tree_of_ke0_member_is_single_leaf(wb, a3):
    tree = wb.t_tree(rep.projective(a3, 2))
    assert profile(tree.node((0, 0))) == {0: M23}
    for pos in ((0, 1), (1, 0), (1, 1)):
        assert derived.is_zero_in_derived(tree.node(pos))


def test_t_tree_of_ke2_member(wb, a3):
    tree = wb.t_tree(rep.simple(a3, 3))
    assert profile(tree.node((1, 1))) == {0: S3}
    for pos in ((0, 0), (0, 1), (1, 0)):
        assert derived.is_zero_in_derived(tree.node(pos))


def test_t_tree_triangle_cohomology(wb, a3):
    tree = wb.t_tree(rep.simple(a3, 2))
    for pos, (u, f, c) in tree.triangles.items():
        node = tree.node(pos)

        def euler(x):
            return sum((-1) ** n * sum(h) for n, h
                       in derived.cohomology_profile(x).items())

        assert euler(node) == euler(u) + euler(c)


def test_structural_sweep(wb):
    report = wb.verify_structural_claims()
    assert report, "empty report"
    for name, (ok, detail) in report.items():
        assert ok, (name, detail)


def test_leaf_placement_matches_tilting_class(wb, ctx, a3):
    for m in ctx.indecomposables:
        cls = tilting.miyashita_class(ctx.t, m, 2)
        if cls is None:
            continue
        tree = wb.t_tree(m)
        for pos, leaf in tree.leaves().items():
            if derived.is_zero_in_derived(leaf):
                continue
            assert sum(pos) == cls
            assert derived.is_derived_isomorphic(
                leaf, derived.stalk_complex(m, 0))


def test_requires_representation_finite(a3):
    kron = algebra.build_algebra(
        algebra.make_quiver([1, 2], [("x", 1, 2), ("y", 1, 2)]), [], 2)
    t = rep.regular_module(kron)
    ctx = tilting.TiltingContext(t, 0, dim_bound=3)
    with pytest.raises(ModeUnsupported):
        tstructures.DerivedWorkbench(ctx)
