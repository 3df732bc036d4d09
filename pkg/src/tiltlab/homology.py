"""Projective covers, resolutions, Ext/Tor, and endomorphism algebras.

The endomorphism algebra of a basic module is re-presented as a bound
quiver algebra so that Hom and tensor functors move modules back and
forth between the two module categories with exact arithmetic.
"""

from __future__ import annotations

import numpy as np

from . import gf, rep
from .algebra import (BoundQuiverAlgebra, Path, build_algebra, make_quiver)
from .errors import (InfiniteGlobalDimension, InternalInconsistency,
                     ModeUnsupported, NotBasic, SearchExhausted)
from .rep import Module, ModuleMap, compose

RESOLUTION_CAP = 32


def module_self_bases(m: Module) -> dict:
    """Vertex components of a module inside its own total space."""
    out = {}
    for v in m.vertex_order:
        cols = gf.zeros(m.total_dim, m.dims[v])
        cols[m.slice(v), :] = gf.eye(m.dims[v])
        out[v] = cols
    return out


def coords_in_basis(basis: list[ModuleMap], f: ModuleMap) -> np.ndarray:
    """Coordinates of f in a hom-space basis (raises if inconsistent)."""
    if not basis:
        if f.is_zero():
            return np.zeros(0, dtype=np.int64)
        raise ValueError("nonzero map in zero hom space")
    p = f.p
    mat = np.stack([b.total().flatten() for b in basis], axis=1) % p
    target = f.total().flatten().reshape(-1, 1) % p
    x = gf.solve(mat, target, p)
    if x is None:
        raise ValueError("map is not in the span of the given basis")
    return x[:, 0]


# -- projective covers and resolutions ----------------------------------------

def projective_cover(m: Module) -> tuple[Module, ModuleMap]:
    """Minimal projective cover P(M) ->> M."""
    alg = m.algebra
    tp, pi = rep.top(m)
    summands = []
    blocks_per_summand = []
    for v in m.vertex_order:
        t_v = tp.dims[v]
        if t_v == 0:
            continue
        # lift the top basis back into m
        lifts = gf.solve(pi.blocks[v], gf.eye(t_v), m.p)
        assert lifts is not None
        pv, paths = rep.projective_structure(alg, v)
        for k in range(t_v):
            gen = lifts[:, k]
            blocks = {}
            for w in m.vertex_order:
                cols = [gf.mul(m.path_matrix(q.arrows, v),
                               gen.reshape(-1, 1), m.p)
                        for q in paths.get(w, [])]
                blocks[w] = (np.concatenate(cols, axis=1)
                             if cols else gf.zeros(m.dims[w], 0))
            summands.append(pv)
            blocks_per_summand.append(blocks)
    if not summands:
        z = rep.zero_module(alg)
        return z, rep.zero_map(z, m)
    total, _, _ = rep.direct_sum(summands)
    blocks = {w: np.concatenate([b[w] for b in blocks_per_summand], axis=1)
              for w in m.vertex_order}
    epi = ModuleMap(total, m, blocks)
    if not epi.is_epi():
        raise InternalInconsistency("projective cover failed to surject")
    return total, epi


def minimal_projective_resolution(m: Module, cap: int = RESOLUTION_CAP):
    """Returns (terms, diffs, eps): ... -> P_1 -> P_0 -eps-> M -> 0.

    diffs[i] is the map P_{i+1} -> P_i; terms stop at the first zero kernel.
    """
    terms, diffs = [], []
    p0, eps = projective_cover(m)
    terms.append(p0)
    current_ker, current_incl = rep.kernel(eps)
    while current_ker.total_dim > 0:
        if len(terms) > cap:
            raise InfiniteGlobalDimension(
                f"projective resolution exceeds {cap} terms")
        pn, cover = projective_cover(current_ker)
        diffs.append(compose(current_incl, cover))
        terms.append(pn)
        current_ker, current_incl = rep.kernel(cover)
    return terms, diffs, eps


def projective_dimension(m: Module, cap: int = RESOLUTION_CAP) -> int:
    if m.total_dim == 0:
        return -1
    terms, _, _ = minimal_projective_resolution(m, cap)
    return len(terms) - 1


def global_dimension(alg: BoundQuiverAlgebra, cap: int = RESOLUTION_CAP) -> int:
    return max(projective_dimension(rep.simple(alg, v), cap)
               for v in alg.quiver.vertices)


def injective_coresolution(m: Module, cap: int = RESOLUTION_CAP):
    """Returns (terms, diffs, unit): 0 -> M -unit-> I^0 -> I^1 -> ...

    Computed by dualizing a minimal projective resolution over the
    opposite algebra.
    """
    alg = m.algebra
    op = rep.opposite_of(alg)
    dm = rep.dual_module(m, op)
    terms, diffs, eps = minimal_projective_resolution(dm, cap)
    # dualizing flips all arrows: transpose every block
    inj = [rep.dual_module(t, alg) for t in terms]

    def dual_map(f: ModuleMap, new_src: Module, new_tgt: Module) -> ModuleMap:
        return ModuleMap(new_src, new_tgt,
                         {v: f.blocks[v].T.copy() for v in f.blocks},
                         check=False)

    unit = dual_map(eps, m, inj[0])
    out_diffs = [dual_map(d, inj[i], inj[i + 1]) for i, d in enumerate(diffs)]
    return inj, out_diffs, unit


# -- Ext dimensions ------------------------------------------------------------

def _induced_matrix(src_basis, tgt_basis, induce, p):
    """Matrix of a linear operation between hom spaces in given bases."""
    if not src_basis or not tgt_basis:
        return gf.zeros(len(tgt_basis), len(src_basis))
    cols = [coords_in_basis(tgt_basis, induce(b)) for b in src_basis]
    return np.stack(cols, axis=1) % p


def ext_dim(x: Module, y: Module, i: int, cap: int = RESOLUTION_CAP) -> int:
    """dim Ext^i(x, y) from a minimal projective resolution of x."""
    if i < 0:
        return 0
    if x.total_dim == 0 or y.total_dim == 0:
        return 0
    terms, diffs, _ = minimal_projective_resolution(x, cap)
    if i >= len(terms):
        return 0
    p = x.p
    hom_i = rep.hom_space(terms[i], y)
    # incoming: precompose Hom(P_{i-1}, y) -> Hom(P_i, y) with d_i
    if i == 0:
        rank_in = 0
    else:
        hom_prev = rep.hom_space(terms[i - 1], y)
        mat_in = _induced_matrix(hom_prev, hom_i,
                                 lambda f: compose(f, diffs[i - 1]), p)
        rank_in = gf.rank(mat_in, p)
    if i + 1 >= len(terms):
        dim_ker = len(hom_i)
    else:
        hom_next = rep.hom_space(terms[i + 1], y)
        mat_out = _induced_matrix(hom_i, hom_next,
                                  lambda f: compose(f, diffs[i]), p)
        dim_ker = len(hom_i) - gf.rank(mat_out, p)
    return dim_ker - rank_in


def ext_dim_via_injectives(x: Module, y: Module, i: int,
                           cap: int = RESOLUTION_CAP) -> int:
    """Independent route: dim Ext^i(x, y) from an injective coresolution of y."""
    if i < 0 or x.total_dim == 0 or y.total_dim == 0:
        return 0
    terms, diffs, _ = injective_coresolution(y, cap)
    if i >= len(terms):
        return 0
    p = x.p
    hom_i = rep.hom_space(x, terms[i])
    if i == 0:
        rank_in = 0
    else:
        hom_prev = rep.hom_space(x, terms[i - 1])
        mat_in = _induced_matrix(hom_prev, hom_i,
                                 lambda f: compose(diffs[i - 1], f), p)
        rank_in = gf.rank(mat_in, p)
    if i + 1 >= len(terms):
        dim_ker = len(hom_i)
    else:
        hom_next = rep.hom_space(x, terms[i + 1])
        mat_out = _induced_matrix(hom_i, hom_next,
                                  lambda f: compose(diffs[i], f), p)
        dim_ker = len(hom_i) - gf.rank(mat_out, p)
    return dim_ker - rank_in


def ext_dim_checked(x: Module, y: Module, i: int,
                    cap: int = RESOLUTION_CAP) -> int:
    a = ext_dim(x, y, i, cap)
    b = ext_dim_via_injectives(x, y, i, cap)
    if a != b:
        raise InternalInconsistency(
            f"Ext^{i} disagrees between resolutions: {a} vs {b}")
    return a


# -- subquotients -------------------------------------------------------------

def homology_at(f: ModuleMap | None, g: ModuleMap | None) -> Module:
    """ker(g)/im(f) for composable maps with g∘f = 0 (either may be None)."""
    if g is not None:
        ker, incl = rep.kernel(g)
        mid = g.source
    else:
        mid = f.target
        ker, incl = mid, rep.identity_map(mid)
    if f is None:
        return ker
    p = mid.p
    sub_blocks = {}
    for v in mid.vertex_order:
        inside = gf.solve(incl.blocks[v], f.blocks[v], p)
        if inside is None:
            raise ValueError("image does not land in the kernel")
        sub_blocks[v] = inside
    sub, sub_incl = rep.submodule_from_subspaces(
        ker, {v: gf.column_space(sub_blocks[v], p) for v in sub_blocks})
    quot, _ = rep.cokernel(sub_incl)
    return quot


# -- endomorphism algebras ----------------------------------------------------

class EndomorphismData:
    """Presentation of B = End(T) as a bound quiver algebra.

    Multiplication in B composes endomorphisms left to right, so the
    stored structure constants follow the same traversal-order convention
    as every other algebra here.  psi(i) gives the total-space matrix on T
    of the i-th path-basis element of B.
    """

    def __init__(self, t: Module, summands, b: BoundQuiverAlgebra,
                 vertex_summand: dict, arrow_matrices: dict):
        self.t = t
        self.summands = summands  # [(module, inc, proj)] in label order
        self.b = b
        self.vertex_summand = vertex_summand  # B-vertex -> summand position
        self.arrow_matrices = arrow_matrices  # arrow name -> total matrix
        self._psi_cache = {}

    def psi(self, i: int) -> np.ndarray:
        """Total matrix on T of the i-th path-basis element of B."""
        got = self._psi_cache.get(i)
        if got is not None:
            return got
        path = self.b.path_basis[i]
        if not path.arrows:
            pos = self.vertex_summand[path.source]
            _, inc, proj = self.summands[pos]
            out = compose(inc, proj).total()
        else:
            out = self.arrow_matrices[path.arrows[0]]
            for name in path.arrows[1:]:
                out = gf.mul(out, self.arrow_matrices[name], self.b.p)
        self._psi_cache[i] = out
        return out

    def psi_element(self, vec: np.ndarray) -> np.ndarray:
        out = gf.zeros(self.t.total_dim, self.t.total_dim)
        for i in np.nonzero(vec)[0]:
            out = (out + int(vec[i]) * self.psi(int(i))) % self.b.p
        return out


def _local_radical(endos: list[ModuleMap], m: Module,
                   cap: int = rep.END_ENUM_CAP) -> list[np.ndarray]:
    """Total matrices spanning the radical of a local endomorphism ring."""
    p = m.p
    if p ** len(endos) > cap:
        raise SearchExhausted("endomorphism ring too large to scan")
    nilpotents = []
    for f in rep.all_maps(endos, p, skip_zero=True, cap=cap):
        t = f.total()
        power = t
        for _ in range(m.total_dim):
            power = gf.mul(power, t, p)
        if not power.any():
            nilpotents.append(t.flatten())
    if not nilpotents:
        return []
    span = gf.column_space(np.stack(nilpotents, axis=1), p)
    n = m.total_dim
    return [span[:, k].reshape(n, n) for k in range(span.shape[1])]


def endomorphism_algebra(t: Module, label_base: int | None = None,
                         cap: int = rep.END_ENUM_CAP) -> EndomorphismData:
    """Present End(t) of a basic module as a bound quiver algebra."""
    alg = t.algebra
    p = alg.p
    parts = rep.decompose_with_maps(t, cap)
    parts.sort(key=lambda x: x[0].encode())
    for i, (si, _, _) in enumerate(parts):
        for j in range(i + 1, len(parts)):
            if rep.is_isomorphic(si, parts[j][0], cap) is not None:
                raise NotBasic("module has repeated indecomposable summands",
                               multiplicities=[s.dim_vector()
                                               for s, _, _ in parts])
    n = len(parts)
    dim_t = t.total_dim
    end_basis = rep.hom_space(t, t)

    # radical components: rad[i][j] spans eps_i . rad(B) . eps_j
    rad = {}
    for i, (si, inci, proji) in enumerate(parts):
        for j, (sj, incj, projj) in enumerate(parts):
            if i == j:
                local = _local_radical(rep.hom_space(si, si), si, cap)
                rad[(i, j)] = [gf.mulchain(p, inci.total(), m, proji.total())
                               for m in local]
                if len(rep.hom_space(si, si)) - len(local) != 1:
                    raise ModeUnsupported(
                        "endomorphism ring has a non-prime residue field")
            else:
                rad[(i, j)] = [gf.mulchain(p, inci.total(), f.total(),
                                           projj.total())
                               for f in rep.hom_space(sj, si)]
    rad_all = [m for v in rad.values() for m in v]
    rad2 = {}
    for i in range(n):
        for j in range(n):
            prods = []
            for (a, b), mats in rad.items():
                if a != i:
                    continue
                for m1 in mats:
                    for (c, d), mats2 in rad.items():
                        if c != b or d != j:
                            continue
                        for m2 in mats2:
                            prods.append(gf.mul(m1, m2, p).flatten())
            rad2[(i, j)] = (gf.column_space(np.stack(prods, axis=1), p)
                            if prods else gf.zeros(dim_t * dim_t, 0))

    # arrows: basis of rad/rad^2, componentwise
    arrow_reps = {}  # (i, j) -> list of total matrices
    for i in range(n):
        for j in range(n):
            reps_ij = []
            seen = rad2[(i, j)]
            for m in rad[(i, j)]:
                flat = m.flatten()
                if gf.in_span(seen, flat, p):
                    continue
                seen = np.concatenate([seen, flat.reshape(-1, 1)], axis=1)
                seen = gf.column_space(seen, p)
                reps_ij.append(m)
            arrow_reps[(i, j)] = reps_ij

    # label order: sources before targets where possible
    edges = {i: set() for i in range(n)}
    for (i, j), reps_ij in arrow_reps.items():
        if reps_ij and i != j:
            edges[i].add(j)
    order = []
    remaining = set(range(n))
    while remaining:
        ready = sorted(i for i in remaining
                       if not any(i in edges[j] for j in remaining if j != i))
        pick = ready[0] if ready else min(remaining)
        order.append(pick)
        remaining.discard(pick)
    base = (max(alg.quiver.vertices) + 1) if label_base is None else label_base
    label_of = {pos: base + k for k, pos in enumerate(order)}

    arrow_list = []
    arrow_matrices = {}
    counter = 0
    for pos_u in order:
        for pos_v in order:
            for m in arrow_reps[(pos_u, pos_v)]:
                name = f"m{counter}"
                counter += 1
                arrow_list.append((name, label_of[pos_u], label_of[pos_v]))
                arrow_matrices[name] = m
    qb = make_quiver(sorted(label_of.values()), arrow_list)

    # radical nilpotency degree
    level = [m.flatten() for m in rad_all]
    nilp = 1
    while level:
        nxt = []
        for f1 in level:
            m1 = f1.reshape(dim_t, dim_t)
            for m2 in rad_all:
                prod = gf.mul(m1, m2, p).flatten()
                if prod.any():
                    nxt.append(prod)
        if nxt:
            span = gf.column_space(np.stack(nxt, axis=1), p)
            level = [span[:, k] for k in range(span.shape[1])]
        else:
            level = []
        nilp += 1
        if nilp > dim_t + 1:
            raise InternalInconsistency("radical fails to be nilpotent")

    def eval_path(path: Path) -> np.ndarray:
        if not path.arrows:
            pos = None
            for k, lab in label_of.items():
                if lab == path.source:
                    pos = k
            _, inc, proj = parts[pos]
            return compose(inc, proj).total()
        out = arrow_matrices[path.arrows[0]]
        for name in path.arrows[1:]:
            out = gf.mul(out, arrow_matrices[name], p)
        return out

    # relations: kernel of the evaluation on paths of length 1..nilp
    paths_by_pair = {}
    frontier = [Path(v, (), v) for v in qb.vertices]
    all_paths = []
    for _ in range(nilp):
        nxt = []
        for q in frontier:
            for a in qb.arrows:
                if a.source == q.target:
                    nxt.append(Path(q.source, q.arrows + (a.name,), a.target))
        all_paths.extend(nxt)
        frontier = nxt
    for q in all_paths:
        paths_by_pair.setdefault((q.source, q.target), []).append(q)
    relations = []
    for pair, plist in paths_by_pair.items():
        mat = np.stack([eval_path(q).flatten() for q in plist], axis=1) % p
        null = gf.nullspace(mat, p)
        for k in range(null.shape[1]):
            rel = [(int(null[r, k]), plist[r])
                   for r in np.nonzero(null[:, k])[0]]
            if any(len(q) < 2 for _, q in rel):
                raise InternalInconsistency(
                    "arrow representatives are dependent modulo rad^2")
            relations.append(rel)

    b = build_algebra(qb, relations, p)
    if b.dim != len(end_basis):
        raise InternalInconsistency(
            f"presented algebra has dim {b.dim}, End(T) has {len(end_basis)}")
    data = EndomorphismData(
        t, [parts[pos] for pos in order], b,
        {label_of[pos]: k for k, pos in enumerate(order)}, arrow_matrices)
    # multiplicativity audit: psi(i) psi(j) = psi(i then j)
    for i in range(b.dim):
        for j in range(b.dim):
            lhs = gf.mul(data.psi(i), data.psi(j), p)
            rhs = data.psi_element(b.multiply_basis(i, j))
            if not np.array_equal(lhs, rhs):
                raise InternalInconsistency("psi is not multiplicative")
    return data


# -- module transport along Hom(T, -) and T (x)_B - ---------------------------

class TransportedModule:
    """A module produced by a functor, with its identification data."""

    def __init__(self, module: Module, bases: dict, extra):
        self.module = module
        self.bases = bases  # vertex -> columns in the abstract total space
        self.extra = extra


def hom_as_b_module(data: EndomorphismData, x: Module) -> TransportedModule:
    """Hom_A(T, x) as a module over B = End(T)."""
    hom_basis = rep.hom_space(data.t, x)
    d = len(hom_basis)
    b = data.b
    p = b.p
    if d == 0:
        mod = rep.zero_module(b)
        return TransportedModule(mod, module_self_bases(mod), [])
    flat = np.stack([h.total().flatten() for h in hom_basis], axis=1) % p

    def rho(i):
        # path-basis element pi acts by h -> h . psi(pi)
        cols = []
        for k in range(d):
            moved = gf.mul(hom_basis[k].total(), data.psi(i), p)
            cols.append(gf.solve(flat, moved.flatten().reshape(-1, 1), p)[:, 0])
        return np.stack(cols, axis=1) % p

    mod, bases = rep.rep_from_abstract(b, d, rho)
    return TransportedModule(mod, bases, hom_basis)


def hom_induced_map(data: EndomorphismData, src: TransportedModule,
                    tgt: TransportedModule, f: ModuleMap) -> ModuleMap:
    """Hom(T, f) as a map of B-modules."""
    p = data.b.p
    if src.module.total_dim == 0 or tgt.module.total_dim == 0:
        return rep.zero_map(src.module, tgt.module)
    tgt_flat = np.stack([h.total().flatten() for h in tgt.extra], axis=1) % p
    cols = []
    for h in src.extra:
        moved = compose(f, h).total().flatten().reshape(-1, 1)
        cols.append(gf.solve(tgt_flat, moved, p)[:, 0])
    phi = np.stack(cols, axis=1) % p
    return rep.abstract_map_to_module_map(src.module, src.bases,
                                          tgt.module, tgt.bases, phi)


def ext_as_b_module(data: EndomorphismData, x: Module, i: int,
                    cap: int = RESOLUTION_CAP) -> Module:
    """Ext^i_A(T, x) as a B-module, from an injective coresolution of x."""
    if i < 0:
        return rep.zero_module(data.b)
    terms, diffs, _ = injective_coresolution(x, cap)
    if i >= len(terms):
        return rep.zero_module(data.b)
    homs = [hom_as_b_module(data, term) for term in terms]
    incoming = None
    if i > 0:
        incoming = hom_induced_map(data, homs[i - 1], homs[i], diffs[i - 1])
    outgoing = None
    if i + 1 < len(terms):
        outgoing = hom_induced_map(data, homs[i], homs[i + 1], diffs[i])
    if outgoing is None and incoming is None:
        return homs[i].module
    return homology_at(incoming, outgoing)


def tensor_over_b(data: EndomorphismData, n: Module) -> TransportedModule:
    """T (x)_B n as an A-module (n is a B-module)."""
    alg = data.t.algebra
    b = data.b
    p = b.p
    dt, dn = data.t.total_dim, n.total_dim
    if dt == 0 or dn == 0:
        mod = rep.zero_module(alg)
        return TransportedModule(mod, module_self_bases(mod), None)
    # balance relations: psi(pi) t (x) x - t (x) pi.x for every basis pi
    cols = []
    for i in range(b.dim):
        left = np.kron(data.psi(i), gf.eye(dn)) % p
        right = np.kron(gf.eye(dt), n.element_total(b.basis_vector(i))) % p
        diff = (left - right) % p
        if diff.any():
            cols.append(diff)
    relmat = (np.concatenate(cols, axis=1) % p
              if cols else gf.zeros(dt * dn, 0))
    proj, sec = gf.quotient_map(relmat, dt * dn, p)

    def rho(i):
        act = np.kron(data.t.element_total(alg.basis_vector(i)),
                      gf.eye(dn)) % p
        return gf.mulchain(p, proj, act, sec)

    mod, bases = rep.rep_from_abstract(alg, proj.shape[0], rho)
    return TransportedModule(mod, bases, (proj, sec, n))


def tensor_induced_map(data: EndomorphismData, src: TransportedModule,
                       tgt: TransportedModule, g: ModuleMap) -> ModuleMap:
    """T (x) g for a map g of B-modules."""
    p = data.b.p
    if src.module.total_dim == 0 or tgt.module.total_dim == 0:
        return rep.zero_map(src.module, tgt.module)
    proj_s, sec_s, _ = src.extra
    proj_t, _, _ = tgt.extra
    dt = data.t.total_dim
    big = np.kron(gf.eye(dt), g.total()) % p
    phi = gf.mulchain(p, proj_t, big, sec_s)
    return rep.abstract_map_to_module_map(src.module, src.bases,
                                          tgt.module, tgt.bases, phi)


def tor_over_b(data: EndomorphismData, n: Module, i: int,
               cap: int = RESOLUTION_CAP) -> Module:
    """Tor_i^B(T, n) as an A-module."""
    if i < 0:
        return rep.zero_module(data.t.algebra)
    terms, diffs, _ = minimal_projective_resolution(n, cap)
    if i >= len(terms):
        return rep.zero_module(data.t.algebra)
    tens = [tensor_over_b(data, term) for term in terms]
    incoming = None
    if i + 1 < len(terms):
        incoming = tensor_induced_map(data, tens[i + 1], tens[i], diffs[i])
    outgoing = None
    if i > 0:
        outgoing = tensor_induced_map(data, tens[i], tens[i - 1], diffs[i - 1])
    if incoming is None and outgoing is None:
        return tens[i].module
    return homology_at(incoming, outgoing)


def counit_map(data: EndomorphismData, x: Module,
               hom_mod: TransportedModule | None = None,
               tens: TransportedModule | None = None) -> ModuleMap:
    """Evaluation T (x)_B Hom(T, x) -> x."""
    p = data.b.p
    if hom_mod is None:
        hom_mod = hom_as_b_module(data, x)
    if tens is None:
        tens = tensor_over_b(data, hom_mod.module)
    if tens.module.total_dim == 0:
        return rep.zero_map(tens.module, x)
    proj, sec, n = tens.extra
    dn = n.total_dim
    # module coordinates of Hom(T, x) -> actual linear maps
    emb = np.concatenate([hom_mod.bases[v] for v in hom_mod.module.vertex_order],
                         axis=1) % p
    hom_flat = np.stack([h.total().flatten() for h in hom_mod.extra],
                        axis=1) % p
    maps_flat = gf.mul(hom_flat, emb, p)  # column j: j-th module basis vector
    dt = data.t.total_dim
    dx = x.total_dim
    ev = gf.zeros(dx, dt * dn)
    for i in range(dt):
        for j in range(dn):
            hmat = maps_flat[:, j].reshape(dx, dt)
            ev[:, i * dn + j] = hmat[:, i]
    if gf.mul(ev, gf.column_space(
            (np.kron(gf.eye(dt), gf.eye(dn)) - gf.mul(sec, proj, p)) % p, p),
            p).any():
        raise InternalInconsistency("evaluation does not kill the relations")
    phi = gf.mul(ev, sec, p)
    return rep.abstract_map_to_module_map(tens.module, tens.bases, x,
                                          module_self_bases(x), phi)


def t_as_right_module(data: EndomorphismData) -> Module:
    """T with its right B-action, as a module over the opposite of B."""
    b = data.b
    bop = rep.opposite_of(b)

    def rho(i):
        q = bop.path_basis[i]
        orig = b.index[(q.target, tuple(reversed(q.arrows)))]
        return data.psi(orig)

    mod, _ = rep.rep_from_abstract(bop, data.t.total_dim, rho)
    return mod
