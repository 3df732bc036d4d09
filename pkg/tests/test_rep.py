import numpy as np
import pytest

from tiltlab.algebra import build_algebra, make_quiver
from tiltlab import rep
from tiltlab.errors import RelationViolated


@pytest.fixture(scope="module")
def a3():
    q = make_quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])
    return build_algebra(q, ["a*b"], p=2)


@pytest.fixture(scope="module")
def projs(a3):
    return {v: rep.projective(a3, v) for v in (1, 2, 3)}


@pytest.fixture(scope="module")
def tilt(a3, projs):
    """The running tilting module 2/3 + 1/2 + 1."""
    m, _, _ = rep.direct_sum([projs[2], projs[1], rep.injective(a3, 1)])
    return m


def test_projective_dim_vectors(projs):
    assert projs[1].dim_vector() == (1, 1, 0)
    assert projs[2].dim_vector() == (0, 1, 1)
    assert projs[3].dim_vector() == (0, 0, 1)


def test_injective_dim_vectors(a3):
    assert rep.injective(a3, 1).dim_vector() == (1, 0, 0)
    assert rep.injective(a3, 2).dim_vector() == (1, 1, 0)
    assert rep.injective(a3, 3).dim_vector() == (0, 1, 1)


def test_module_rejects_relation_violation(a3):
    # both arrows act by 1 on a one-dimensional space per vertex: a*b != 0
    with pytest.raises(RelationViolated):
        rep.check_module(a3, {1: 1, 2: 1, 3: 1},
                         {"a": [[1]], "b": [[1]]})


def test_module_accepts_uniserial(a3):
    m = rep.check_module(a3, {1: 1, 2: 1, 3: 0}, {"a": [[1]]})
    assert m.total_dim == 2


def test_hom_dims_between_simples_and_projectives(a3, projs):
    s = {v: rep.simple(a3, v) for v in (1, 2, 3)}
    # Hom(P(v), S(w)) = delta_{v,w}
    for v in (1, 2, 3):
        for w in (1, 2, 3):
            assert rep.hom_dim(projs[v], s[w]) == (1 if v == w else 0)
    # the arrow a: 1 -> 2 gives the map P(2) -> P(1) onto the socle
    assert rep.hom_dim(projs[2], projs[1]) == 1
    assert rep.hom_dim(projs[1], projs[2]) == 0


def test_endomorphisms_of_indecomposables_are_local(a3, projs):
    for v in (1, 2, 3):
        assert rep.hom_dim(projs[v], projs[v]) == 1


def test_kernel_image_cokernel_exactness(a3, projs):
    s1 = rep.simple(a3, 1)
    f = rep.hom_space(projs[1], s1)[0]
    ker, incl = rep.kernel(f)
    assert ker.dim_vector() == (0, 1, 0)
    assert incl.is_mono()
    im, im_incl, im_proj = rep.image(f)
    assert im.dim_vector() == (1, 0, 0)
    assert rep.compose(im_incl, im_proj).total().tolist() == f.total().tolist()
    cok, proj = rep.cokernel(f)
    assert cok.is_zero()
    # rank-nullity vertexwise
    for v in (1, 2, 3):
        assert ker.dims[v] + im.dims[v] == projs[1].dims[v]


def test_cokernel_action_is_induced(a3, projs):
    # P(3) -> P(2) includes the socle; quotient is the simple at 2
    f = rep.hom_space(projs[3], projs[2])[0]
    cok, proj = rep.cokernel(f)
    assert cok.dim_vector() == (0, 1, 0)
    assert proj.is_epi()


def test_radical_and_top(a3, projs):
    r, _ = rep.radical_submodule(projs[2])
    assert r.dim_vector() == (0, 0, 1)
    t, _ = rep.top(projs[2])
    assert t.dim_vector() == (0, 1, 0)


def test_direct_sum_maps(a3, projs):
    total, incs, prs = rep.direct_sum([projs[1], projs[3]])
    assert total.dim_vector() == (1, 1, 1)
    for inc, pr in zip(incs, prs):
        comp = rep.compose(pr, inc)
        assert comp.is_iso()
    cross = rep.compose(prs[0], incs[1])
    assert cross.is_zero()


def test_decompose_regular_module(a3, projs):
    reg = rep.regular_module(a3)
    parts = rep.decompose(reg)
    assert sorted(s.dim_vector() for s, _ in parts) == [
        (0, 0, 1), (0, 1, 1), (1, 1, 0)]
    assert all(mult == 1 for _, mult in parts)


def test_decompose_with_maps_reassembles(a3, tilt):
    parts = rep.decompose_with_maps(tilt)
    assert len(parts) == 3
    total = rep.zero_map(tilt, tilt)
    for s, inc, proj in parts:
        assert rep.compose(proj, inc).is_iso()
        total = total + rep.compose(inc, proj)
    assert total.is_iso()  # sum of idempotents is the identity
    ident = rep.identity_map(tilt)
    assert np.array_equal(total.total(), ident.total())


def test_decompose_multiplicities(a3, projs):
    m, _, _ = rep.direct_sum([projs[1], projs[1], projs[3]])
    parts = rep.decompose(m)
    mults = {s.dim_vector(): k for s, k in parts}
    assert mults == {(1, 1, 0): 2, (0, 0, 1): 1}


def test_is_isomorphic_detects_twisted_copy(a3):
    m = rep.check_module(a3, {1: 1, 2: 1}, {"a": [[1]]})
    n = rep.check_module(a3, {1: 1, 2: 1}, {"a": [[1]]})
    assert rep.is_isomorphic(m, n) is not None
    z = rep.check_module(a3, {1: 1, 2: 1}, {"a": [[0]]})
    assert rep.is_isomorphic(m, z) is None


def test_enumerate_indecomposables_is_complete(a3):
    mods = rep.enumerate_indecomposable_modules(a3, 3)
    assert [m.dim_vector() for m in mods] == [
        (0, 0, 1), (0, 1, 0), (1, 0, 0), (0, 1, 1), (1, 1, 0)]
    finite, _ = rep.is_representation_finite(a3, 3)
    assert finite


def test_enumerate_respects_relations():
    q = make_quiver([1, 2], [("a", 1, 2), ("b", 1, 2)])
    kronecker = build_algebra(q, [], p=2)
    mods = rep.enumerate_indecomposable_modules(kronecker, 2)
    # dim vectors (1,0), (0,1), and three modules (1,1): a=1 b=0; a=0 b=1; a=b=1
    assert [m.dim_vector() for m in mods] == [
        (0, 1), (1, 0), (1, 1), (1, 1), (1, 1)]


def test_trace_of_projectives_is_everything(a3, tilt):
    gens = [rep.projective(a3, v) for v in (1, 2, 3)]
    spaces = rep.trace_submodule(gens, tilt)
    assert all(spaces[v].shape[1] == tilt.dims[v] for v in (1, 2, 3))


def test_trace_of_simple_picks_socle(a3, projs):
    s3 = rep.simple(a3, 3)
    spaces = rep.trace_submodule([s3], projs[2])
    sub, _ = rep.submodule_from_subspaces(projs[2], spaces)
    assert sub.dim_vector() == (0, 0, 1)


def test_dual_module_double_dual(a3, projs):
    op = rep.opposite_of(a3)
    for v in (1, 2, 3):
        dd = rep.dual_module(rep.dual_module(projs[v], op), a3)
        assert rep.is_isomorphic(dd, projs[v]) is not None


def test_rep_from_abstract_recovers_regular(a3):
    def rho(i):
        cols = [a3.multiply_basis(j, i) for j in range(a3.dim)]
        return np.stack(cols, axis=1) % a3.p

    m, bases = rep.rep_from_abstract(a3, a3.dim, rho)
    assert m.total_dim == a3.dim
    reg = rep.regular_module(a3)
    assert rep.is_isomorphic(m, reg) is not None


def test_abstract_map_round_trip(a3, projs):
    # identity on the regular module transports to the identity map
    def rho(i):
        cols = [a3.multiply_basis(j, i) for j in range(a3.dim)]
        return np.stack(cols, axis=1) % a3.p

    m, bases = rep.rep_from_abstract(a3, a3.dim, rho)
    f = rep.abstract_map_to_module_map(m, bases, m, bases,
                                       np.eye(a3.dim, dtype=np.int64))
    assert f.is_iso()
