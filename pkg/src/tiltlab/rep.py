"""Finite-dimensional modules over a bound quiver algebra, as quiver
representations: a vector space per vertex and a matrix per arrow.

A path acts by composing arrow matrices right-to-left in traversal order:
the path ("a", "b") acts as act[b] @ act[a].
"""

from __future__ import annotations

from itertools import product

import numpy as np

from . import gf
from .algebra import BoundQuiverAlgebra, opposite_algebra
from .errors import AlgebraMismatch, RelationViolated, SearchExhausted

END_ENUM_CAP = 2 ** 20


class Module:
    def __init__(self, algebra: BoundQuiverAlgebra, dims: dict,
                 action: dict, check: bool = True):
        self.algebra = algebra
        self.p = algebra.p
        q = algebra.quiver
        self.dims = {v: int(dims.get(v, 0)) for v in q.vertices}
        self.action = {}
        for a in q.arrows:
            m = action.get(a.name)
            shape = (self.dims[a.target], self.dims[a.source])
            if m is None:
                m = gf.zeros(*shape)
            m = gf.asmat(m, self.p)
            if m.shape != shape:
                raise RelationViolated(
                    f"arrow {a.name}: matrix shape {m.shape} != {shape}")
            self.action[a.name] = m
        self.vertex_order = list(q.vertices)
        self.offsets = {}
        off = 0
        for v in self.vertex_order:
            self.offsets[v] = off
            off += self.dims[v]
        self.total_dim = off
        if check:
            self._check_relations()

    def _check_relations(self):
        for rel in self.algebra.relations:
            src = rel[0][1].source
            tgt = rel[0][1].target
            acc = gf.zeros(self.dims[tgt], self.dims[src])
            for c, path in rel:
                acc = (acc + c * self.path_matrix(path.arrows, src)) % self.p
            if acc.any():
                raise RelationViolated(
                    f"relation {rel} acts by a nonzero matrix")

    def path_matrix(self, arrows: tuple, source: int) -> np.ndarray:
        """Matrix of a path given in traversal order."""
        q = self.algebra.quiver
        if not arrows:
            return gf.eye(self.dims[source])
        m = gf.eye(self.dims[source])
        for name in arrows:
            m = gf.mul(self.action[name], m, self.p)
        return m

    def slice(self, v: int) -> slice:
        return slice(self.offsets[v], self.offsets[v] + self.dims[v])

    def arrow_total(self, name: str) -> np.ndarray:
        a = self.algebra.quiver.arrow(name)
        m = gf.zeros(self.total_dim, self.total_dim)
        m[self.slice(a.target), self.slice(a.source)] = self.action[name]
        return m

    def element_total(self, vec: np.ndarray) -> np.ndarray:
        """Total-space matrix of an algebra element (vector over path_basis)."""
        m = gf.zeros(self.total_dim, self.total_dim)
        for i in np.nonzero(vec)[0]:
            path = self.algebra.path_basis[int(i)]
            blk = self.path_matrix(path.arrows, path.source)
            m[self.slice(path.target), self.slice(path.source)] = (
                m[self.slice(path.target), self.slice(path.source)]
                + int(vec[i]) * blk) % self.p
        return m

    def dim_vector(self) -> tuple:
        return tuple(self.dims[v] for v in self.vertex_order)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def encode(self) -> tuple:
        """Canonical encoding: dim vector, then row-major action entries."""
        mats = tuple(tuple(self.action[a.name].flatten().tolist())
                     for a in self.algebra.quiver.arrows)
        return (self.dim_vector(), mats)

    def __repr__(self):
        return f"Module(dims={{{', '.join(f'{v}:{d}' for v, d in self.dims.items() if d)}}})"


class ModuleMap:
    def __init__(self, source: Module, target: Module, blocks: dict,
                 check: bool = True):
        if source.algebra is not target.algebra:
            raise AlgebraMismatch("map between modules over different algebras")
        self.source = source
        self.target = target
        self.p = source.p
        self.blocks = {}
        for v in source.vertex_order:
            b = blocks.get(v)
            shape = (target.dims[v], source.dims[v])
            if b is None:
                b = gf.zeros(*shape)
            b = gf.asmat(b, self.p)
            if b.shape != shape:
                raise ValueError(f"block at {v}: shape {b.shape} != {shape}")
            self.blocks[v] = b
        if check:
            self.verify()

    def verify(self):
        for a in self.source.algebra.quiver.arrows:
            lhs = gf.mul(self.target.action[a.name], self.blocks[a.source], self.p)
            rhs = gf.mul(self.blocks[a.target], self.source.action[a.name], self.p)
            if not np.array_equal(lhs, rhs):
                raise ValueError(f"map does not intertwine arrow {a.name}")

    def total(self) -> np.ndarray:
        m = gf.zeros(self.target.total_dim, self.source.total_dim)
        for v in self.source.vertex_order:
            m[self.target.slice(v), self.source.slice(v)] = self.blocks[v]
        return m

    def is_zero(self) -> bool:
        return not any(b.any() for b in self.blocks.values())

    def is_mono(self) -> bool:
        return all(gf.rank(b, self.p) == b.shape[1] for b in self.blocks.values())

    def is_epi(self) -> bool:
        return all(gf.rank(b, self.p) == b.shape[0] for b in self.blocks.values())

    def is_iso(self) -> bool:
        return (self.source.dim_vector() == self.target.dim_vector()
                and all(gf.is_invertible(b, self.p) for b in self.blocks.values()))

    def __add__(self, other):
        return ModuleMap(self.source, self.target,
                         {v: (self.blocks[v] + other.blocks[v]) % self.p
                          for v in self.blocks}, check=False)

    def __sub__(self, other):
        return ModuleMap(self.source, self.target,
                         {v: (self.blocks[v] - other.blocks[v]) % self.p
                          for v in self.blocks}, check=False)

    def __neg__(self):
        return ModuleMap(self.source, self.target,
                         {v: (-self.blocks[v]) % self.p for v in self.blocks},
                         check=False)

    def scale(self, c: int):
        return ModuleMap(self.source, self.target,
                         {v: (c * self.blocks[v]) % self.p for v in self.blocks},
                         check=False)

    def __repr__(self):
        return f"ModuleMap({self.source!r} -> {self.target!r})"


def zero_module(algebra: BoundQuiverAlgebra) -> Module:
    return Module(algebra, {}, {}, check=False)


def zero_map(source: Module, target: Module) -> ModuleMap:
    return ModuleMap(source, target, {}, check=False)


def identity_map(m: Module) -> ModuleMap:
    return ModuleMap(m, m, {v: gf.eye(m.dims[v]) for v in m.vertex_order},
                     check=False)


def compose(f: ModuleMap, g: ModuleMap) -> ModuleMap:
    """f after g (apply g first)."""
    if g.target is not f.source and g.target.dims != f.source.dims:
        raise ValueError("non-composable maps")
    return ModuleMap(g.source, f.target,
                     {v: gf.mul(f.blocks[v], g.blocks[v], f.p)
                      for v in f.blocks}, check=False)


def check_module(algebra: BoundQuiverAlgebra, dims: dict, action: dict) -> Module:
    return Module(algebra, dims, action, check=True)


# -- hom spaces --------------------------------------------------------------

def hom_space(m: Module, n: Module) -> list[ModuleMap]:
    """A basis of Hom(m, n) as intertwiner solutions."""
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("hom between modules over different algebras")
    p = m.p
    layout = []
    off = 0
    for v in m.vertex_order:
        size = n.dims[v] * m.dims[v]
        layout.append((v, off, size))
        off += size
    nunk = off
    if nunk == 0:
        return []
    rows = []
    for a in m.algebra.quiver.arrows:
        s, t = a.source, a.target
        neq = n.dims[t] * m.dims[s]
        if neq == 0:
            continue
        block = gf.zeros(neq, nunk)
        for v, voff, size in layout:
            if size == 0:
                continue
            if v == s:
                # vec(N_a F_s) = (I_{m_s} (x) N_a) vec(F_s), column-major vec
                block[:, voff:voff + size] = (
                    block[:, voff:voff + size]
                    + np.kron(gf.eye(m.dims[s]), n.action[a.name])) % p
            if v == t:
                block[:, voff:voff + size] = (
                    block[:, voff:voff + size]
                    - np.kron(m.action[a.name].T, gf.eye(n.dims[t]))) % p
        rows.append(block)
    sys = np.concatenate(rows, axis=0) % p if rows else gf.zeros(0, nunk)
    basis = gf.nullspace(sys, p)
    out = []
    for k in range(basis.shape[1]):
        blocks = {}
        for v, voff, size in layout:
            blocks[v] = basis[voff:voff + size, k].reshape(
                (n.dims[v], m.dims[v]), order="F")
        out.append(ModuleMap(m, n, blocks, check=False))
    return out


def hom_dim(m: Module, n: Module) -> int:
    return len(hom_space(m, n))


def map_from_coeffs(basis: list[ModuleMap], coeffs) -> ModuleMap:
    out = basis[0].scale(int(coeffs[0]))
    for b, c in zip(basis[1:], coeffs[1:]):
        out = out + b.scale(int(c))
    return out


def all_maps(basis: list[ModuleMap], p: int, skip_zero: bool = False,
             cap: int = END_ENUM_CAP):
    """Iterate over all maps in the span of `basis` (finite field)."""
    if not basis:
        return
    if p ** len(basis) > cap:
        raise SearchExhausted(
            f"hom-space enumeration of size {p}^{len(basis)} exceeds cap {cap}")
    for coeffs in product(range(p), repeat=len(basis)):
        if skip_zero and not any(coeffs):
            continue
        yield map_from_coeffs(basis, coeffs)


# -- kernels, images, cokernels ---------------------------------------------

def _restricted_action(m: Module, spaces: dict) -> dict:
    """Action induced on a stable family of subspaces (columns per vertex)."""
    act = {}
    for a in m.algebra.quiver.arrows:
        moved = gf.mul(m.action[a.name], spaces[a.source], m.p)
        x = gf.solve(spaces[a.target], moved, m.p)
        if x is None:
            raise ValueError(f"subspaces not stable under arrow {a.name}")
        act[a.name] = x
    return act


def submodule_from_subspaces(m: Module, spaces: dict) -> tuple[Module, ModuleMap]:
    """Submodule spanned by the given stable subspaces; returns (S, incl)."""
    cols = {v: gf.column_space(spaces.get(v, gf.zeros(m.dims[v], 0)), m.p)
            for v in m.vertex_order}
    act = _restricted_action(m, cols)
    s = Module(m.algebra, {v: cols[v].shape[1] for v in cols}, act, check=False)
    return s, ModuleMap(s, m, cols, check=False)


def kernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    spaces = {v: gf.nullspace(f.blocks[v], f.p) for v in f.source.vertex_order}
    return submodule_from_subspaces(f.source, spaces)


def image(f: ModuleMap) -> tuple[Module, ModuleMap, ModuleMap]:
    """Returns (im f, inclusion into target, projection from source)."""
    spaces = {v: gf.column_space(f.blocks[v], f.p) for v in f.source.vertex_order}
    im, incl = submodule_from_subspaces(f.target, spaces)
    proj_blocks = {}
    for v in f.source.vertex_order:
        x = gf.solve(incl.blocks[v], f.blocks[v], f.p)
        proj_blocks[v] = x
    return im, incl, ModuleMap(f.source, im, proj_blocks, check=False)


def cokernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    """Returns (coker f, projection target -> coker)."""
    n = f.target
    projs, secs = {}, {}
    for v in n.vertex_order:
        pr, sec = gf.quotient_map(f.blocks[v], n.dims[v], n.p)
        projs[v], secs[v] = pr, sec
    act = {}
    for a in n.algebra.quiver.arrows:
        act[a.name] = gf.mulchain(n.p, projs[a.target], n.action[a.name],
                                  secs[a.source])
    c = Module(n.algebra, {v: projs[v].shape[0] for v in projs}, act,
               check=False)
    return c, ModuleMap(n, c, projs, check=False)


def quotient_module(m: Module, incl: ModuleMap) -> tuple[Module, ModuleMap]:
    return cokernel(incl)


def preimage_submodule(f: ModuleMap, incl: ModuleMap) -> dict:
    """Subspaces of f.source mapping into the submodule incl of f.target."""
    _, proj = cokernel(incl)
    comp = compose(proj, f)
    return {v: gf.nullspace(comp.blocks[v], f.p) for v in f.source.vertex_order}


def direct_sum(mods: list[Module]):
    """Returns (sum, inclusions, projections)."""
    if not mods:
        raise ValueError("empty direct sum needs an algebra; use zero_module")
    alg = mods[0].algebra
    p = alg.p
    dims = {v: sum(m.dims[v] for m in mods) for v in alg.quiver.vertices}
    act = {}
    for a in alg.quiver.arrows:
        blocks = [m.action[a.name] for m in mods]
        mat = gf.zeros(dims[a.target], dims[a.source])
        ro = co = 0
        for m in mods:
            bt, bs = m.dims[a.target], m.dims[a.source]
            mat[ro:ro + bt, co:co + bs] = m.action[a.name]
            ro += bt
            co += bs
        act[a.name] = mat
    total = Module(alg, dims, act, check=False)
    incs, projs = [], []
    offs = {v: 0 for v in alg.quiver.vertices}
    for m in mods:
        ib, pb = {}, {}
        for v in alg.quiver.vertices:
            inc = gf.zeros(dims[v], m.dims[v])
            inc[offs[v]:offs[v] + m.dims[v], :] = gf.eye(m.dims[v])
            ib[v] = inc
            pb[v] = inc.T.copy()
        incs.append(ModuleMap(m, total, ib, check=False))
        projs.append(ModuleMap(total, m, pb, check=False))
        for v in alg.quiver.vertices:
            offs[v] += m.dims[v]
    return total, incs, projs


# -- canonical modules --------------------------------------------------------

def simple(alg: BoundQuiverAlgebra, v: int) -> Module:
    return Module(alg, {v: 1}, {}, check=False)


def projective_structure(alg: BoundQuiverAlgebra, v: int):
    """P(v) together with its basis paths grouped by endpoint.

    Returns (module, paths) where paths[w] lists, in coordinate order, the
    basis paths from v to w; the k-th basis vector of the w-component is
    the class of paths[w][k].
    """
    idxs = alg.basis_paths_from(v)
    groups = {}  # target vertex -> ordered list of basis indices
    for i in idxs:
        groups.setdefault(alg.path_basis[i].target, []).append(i)
    dims = {w: len(groups.get(w, [])) for w in alg.quiver.vertices}
    pos = {i: k for w in groups for k, i in enumerate(groups[w])}
    act = {}
    for a in alg.quiver.arrows:
        a_idx = alg.index[(a.source, (a.name,))]
        mat = gf.zeros(dims[a.target], dims[a.source])
        for i in groups.get(a.source, []):
            prod = alg.multiply_basis(i, a_idx)
            for j in np.nonzero(prod)[0]:
                mat[pos[int(j)], pos[i]] = prod[j]
        act[a.name] = mat
    paths = {w: [alg.path_basis[i] for i in groups.get(w, [])]
             for w in alg.quiver.vertices}
    return Module(alg, dims, act, check=False), paths


def projective(alg: BoundQuiverAlgebra, v: int) -> Module:
    """P(v) = (paths starting at v) with arrows acting by concatenation."""
    return projective_structure(alg, v)[0]


def regular_module(alg: BoundQuiverAlgebra) -> Module:
    return direct_sum([projective(alg, v) for v in alg.quiver.vertices])[0]


def dual_module(m: Module, op_alg: BoundQuiverAlgebra) -> Module:
    """k-dual over the opposite algebra (arrows reversed, matrices transposed)."""
    act = {a.name: m.action[a.name].T.copy() for a in m.algebra.quiver.arrows}
    return Module(op_alg, dict(m.dims), act, check=False)


def opposite_of(alg: BoundQuiverAlgebra) -> BoundQuiverAlgebra:
    op = getattr(alg, "_opposite_cache", None)
    if op is None:
        op = opposite_algebra(alg)
        alg._opposite_cache = op
        op._opposite_cache = alg
    return op


def injective(alg: BoundQuiverAlgebra, v: int) -> Module:
    return dual_module(projective(opposite_of(alg), v), alg)


# -- radical, top, trace -----------------------------------------------------

def radical_submodule(m: Module) -> tuple[Module, ModuleMap]:
    spaces = {v: gf.zeros(m.dims[v], 0) for v in m.vertex_order}
    for a in m.algebra.quiver.arrows:
        spaces[a.target] = np.concatenate(
            [spaces[a.target], m.action[a.name]], axis=1)
    return submodule_from_subspaces(m, spaces)


def top(m: Module) -> tuple[Module, ModuleMap]:
    _, incl = radical_submodule(m)
    return cokernel(incl)


def trace_submodule(generators: list[Module], x: Module) -> dict:
    """Subspaces of x spanned by images of all maps from the generators."""
    spaces = {v: gf.zeros(x.dims[v], 0) for v in x.vertex_order}
    for g in generators:
        for f in hom_space(g, x):
            for v in x.vertex_order:
                spaces[v] = np.concatenate([spaces[v], f.blocks[v]], axis=1)
    return {v: gf.column_space(spaces[v], x.p) for v in spaces}


# -- isomorphism and decomposition -------------------------------------------

def is_isomorphic(m: Module, n: Module, cap: int = END_ENUM_CAP):
    """Returns an invertible ModuleMap witness, or None."""
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("modules over different algebras")
    if m.dim_vector() != n.dim_vector():
        return None
    if m.total_dim == 0:
        return zero_map(m, n)
    homs = hom_space(m, n)
    if len(homs) == 0:
        return None
    for f in all_maps(homs, m.p, skip_zero=True, cap=cap):
        if f.is_iso():
            return f
    return None


def _find_idempotent(endos: list[ModuleMap], m: Module, cap: int):
    p = m.p
    ident = identity_map(m).total()
    for f in all_maps(endos, p, skip_zero=True, cap=cap):
        t = f.total()
        if np.array_equal(t, ident):
            continue
        if np.array_equal(gf.mul(t, t, p), t):
            return f
    return None


def _fitting_split(endos: list[ModuleMap], m: Module):
    p = m.p
    for f in endos:
        t = f.total()
        power = t
        for _ in range(m.total_dim):
            power = gf.mul(power, t, p)
        if power.any() and not gf.is_invertible(power, p):
            # stable kernel/image split
            fN = f
            for _ in range(m.total_dim):
                fN = compose(fN, f)
            return fN
    return None


def split_by_idempotent(m: Module, e: ModuleMap):
    """m = im(e) (+) ker(e), with inclusions and projections."""
    im, im_incl, _ = image(e)
    ker, ker_incl = kernel(e)
    p = m.p
    projs = []
    for sub_incl, other_incl, sub in ((im_incl, ker_incl, im),
                                      (ker_incl, im_incl, ker)):
        blocks = {}
        for v in m.vertex_order:
            combined = np.concatenate(
                [sub_incl.blocks[v], other_incl.blocks[v]], axis=1)
            inv = gf.inverse(combined, p)
            assert inv is not None, "idempotent split is not a decomposition"
            blocks[v] = inv[: sub.dims[v], :]
        projs.append(ModuleMap(m, sub, blocks, check=False))
    return (im, im_incl, projs[0]), (ker, ker_incl, projs[1])


def decompose_with_maps(m: Module, cap: int = END_ENUM_CAP):
    """List of (indecomposable summand, inclusion, projection)."""
    if m.total_dim == 0:
        return []
    endos = hom_space(m, m)
    e = None
    if m.p ** len(endos) <= cap:
        e = _find_idempotent(endos, m, cap)
    else:
        e = _fitting_split(endos, m)
        if e is not None:
            # use image/kernel of the stabilized power as the idempotent split
            im, im_incl, _ = image(e)
            ker, ker_incl = kernel(e)
            if im.total_dim == 0 or ker.total_dim == 0:
                e = None
    if e is None:
        return [(m, identity_map(m), identity_map(m))]
    (im, i1, p1), (ker, i2, p2) = split_by_idempotent(m, e)
    out = []
    for sub, inc, proj in ((im, i1, p1), (ker, i2, p2)):
        for s, si, sp in decompose_with_maps(sub, cap):
            out.append((s, compose(inc, si), compose(sp, proj)))
    return out


def decompose(m: Module, cap: int = END_ENUM_CAP):
    """Krull-Schmidt decomposition as [(summand, multiplicity)], canonical order."""
    parts = [s for s, _, _ in decompose_with_maps(m, cap)]
    parts.sort(key=lambda s: s.encode())
    out = []
    for s in parts:
        for i, (t, mult) in enumerate(out):
            if is_isomorphic(s, t, cap) is not None:
                out[i] = (t, mult + 1)
                break
        else:
            out.append((s, 1))
    return out


def is_indecomposable(m: Module, cap: int = END_ENUM_CAP) -> bool:
    if m.total_dim == 0:
        return False
    endos = hom_space(m, m)
    if m.p ** len(endos) <= cap:
        return _find_idempotent(endos, m, cap) is None
    return _fitting_split(endos, m) is None


def _dim_vectors(nvert: int, total: int):
    if nvert == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _dim_vectors(nvert - 1, total - first):
            yield (first,) + rest


def enumerate_indecomposable_modules(alg: BoundQuiverAlgebra, dim_bound: int,
                                     node_cap: int = END_ENUM_CAP):
    """All indecomposables of total dimension <= dim_bound, up to iso.

    Complete whenever the algebra is representation finite and dim_bound
    exceeds its largest indecomposable; deterministic canonical order.
    """
    verts = list(alg.quiver.vertices)
    p = alg.p
    found: list[Module] = []
    for total in range(1, dim_bound + 1):
        for dv in sorted(_dim_vectors(len(verts), total)):
            dims = dict(zip(verts, dv))
            entries = []
            for a in alg.quiver.arrows:
                entries.append((a.name, dims[a.target], dims[a.source]))
            nent = sum(r * c for _, r, c in entries)
            if p ** nent > node_cap:
                raise SearchExhausted(
                    f"dimension vector {dv}: {p}^{nent} actions exceed cap")
            bucket: list[Module] = []
            for flat in product(range(p), repeat=nent):
                action = {}
                pos = 0
                for name, r, c in entries:
                    action[name] = np.array(
                        flat[pos:pos + r * c], dtype=np.int64).reshape(r, c)
                    pos += r * c
                try:
                    m = Module(alg, dims, action, check=True)
                except RelationViolated:
                    continue
                if not is_indecomposable(m, node_cap):
                    continue
                if any(is_isomorphic(m, other, node_cap) is not None
                       for other in bucket):
                    continue
                bucket.append(m)
            bucket.sort(key=lambda s: s.encode())
            found.extend(bucket)
    return found


def is_representation_finite(alg: BoundQuiverAlgebra, dim_bound: int,
                             node_cap: int = END_ENUM_CAP):
    """Heuristic detection: enumeration stabilizes strictly below the bound.

    Returns (flag, indecomposables-up-to-bound).
    """
    mods = enumerate_indecomposable_modules(alg, dim_bound, node_cap)
    largest = max((m.total_dim for m in mods), default=0)
    return largest < dim_bound, mods


# -- abstract modules -> quiver representations -------------------------------

def rep_from_abstract(alg: BoundQuiverAlgebra, space_dim: int, rho):
    """Convert a module given by a total action into a quiver representation.

    rho(i) must return the (space_dim x space_dim) matrix of the i-th
    path-basis element of alg.  Returns (Module, vertex_bases) where
    vertex_bases[v] are the columns of the v-component inside the abstract
    space.
    """
    p = alg.p
    ids = sum((rho(alg.idempotent_index[v]) for v in alg.quiver.vertices),
              start=gf.zeros(space_dim, space_dim)) % p
    if not np.array_equal(ids, gf.eye(space_dim)):
        raise ValueError("vertex idempotents do not sum to the identity")
    bases = {v: gf.column_space(rho(alg.idempotent_index[v]), p)
             for v in alg.quiver.vertices}
    dims = {v: bases[v].shape[1] for v in bases}
    act = {}
    for a in alg.quiver.arrows:
        a_idx = alg.index[(a.source, (a.name,))]
        moved = gf.mul(rho(a_idx), bases[a.source], p)
        x = gf.solve(bases[a.target], moved, p)
        if x is None:
            raise ValueError(f"action of arrow {a.name} leaves its component")
        act[a.name] = x
    return Module(alg, dims, act, check=True), bases


def abstract_map_to_module_map(src: Module, src_bases: dict,
                               tgt: Module, tgt_bases: dict,
                               phi: np.ndarray) -> ModuleMap:
    """Total-space linear map (commuting with the action) -> ModuleMap."""
    p = src.p
    blocks = {}
    for v in src.vertex_order:
        moved = gf.mul(phi, src_bases[v], p)
        x = gf.solve(tgt_bases[v], moved, p)
        if x is None:
            raise ValueError(f"map does not respect the vertex split at {v}")
        blocks[v] = x
    return ModuleMap(src, tgt, blocks, check=False)
