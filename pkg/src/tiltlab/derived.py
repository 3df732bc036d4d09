"""Bounded cochain complexes over a bound quiver algebra: shifts, cones,
homotopy classes of chain maps, projective replacements, cohomology,
Krull-Schmidt decomposition and desk-scale enumeration of indecomposables."""

from __future__ import annotations

from itertools import product

import numpy as np

from . import gf, rep
from .errors import (InfiniteGlobalDimension, InternalInconsistency,
                     SearchExhausted)
from .homology import (coords_in_basis, global_dimension, homology_at,
                       projective_cover)
from .rep import Module, ModuleMap, compose

REPLACEMENT_SLACK = 8


class Complex:
    """A bounded cochain complex: finitely many modules and differentials.

    terms maps degree -> Module (zero terms dropped); diffs maps degree n to
    the map term(n) -> term(n+1).
    """

    def __init__(self, algebra, terms: dict, diffs: dict, check: bool = True):
        self.algebra = algebra
        self.p = algebra.p
        self.terms = {n: m for n, m in terms.items() if m.total_dim > 0}
        self.diffs = {}
        for n, d in diffs.items():
            if n in self.terms and (n + 1) in self.terms:
                self.diffs[n] = d
        self.support = sorted(self.terms)
        if check:
            self._check()

    def _check(self):
        for n, d in self.diffs.items():
            if d.source.dims != self.terms[n].dims or \
                    d.target.dims != self.terms[n + 1].dims:
                raise ValueError(f"differential at {n} has wrong endpoints")
            d.verify()
        for n in self.support:
            if n + 1 in self.diffs and n in self.diffs:
                if not compose(self.diff(n + 1), self.diff(n)).is_zero():
                    raise ValueError(f"d o d != 0 at degree {n}")

    def term(self, n: int) -> Module:
        return self.terms.get(n) or rep.zero_module(self.algebra)

    def diff(self, n: int) -> ModuleMap:
        d = self.diffs.get(n)
        if d is None:
            return rep.zero_map(self.term(n), self.term(n + 1))
        return d

    def is_zero_complex(self) -> bool:
        return not self.terms

    def total_dim(self) -> int:
        return sum(m.total_dim for m in self.terms.values())

    def width(self) -> int:
        return len(self.terms)

    def encode(self) -> tuple:
        return tuple((n, self.terms[n].encode(),
                      tuple(self.diff(n).total().flatten().tolist())
                      if n in self.diffs else ())
                     for n in self.support)

    def __repr__(self):
        if not self.terms:
            return "Complex(0)"
        parts = ", ".join(f"{n}:{self.terms[n].dim_vector()}"
                          for n in self.support)
        return f"Complex({parts})"


class ChainMap:
    """A degreewise module map commuting with the differentials."""

    def __init__(self, source: Complex, target: Complex, maps: dict,
                 check: bool = True):
        self.source = source
        self.target = target
        self.p = source.p
        self.maps = {n: f for n, f in maps.items()
                     if n in source.terms and n in target.terms}
        if check:
            self.verify()

    def verify(self):
        degs = set(self.source.support) | set(self.target.support)
        for n in degs:
            lhs = compose(self.target.diff(n), self.map_at(n))
            rhs = compose(self.map_at(n + 1), self.source.diff(n))
            if not np.array_equal(lhs.total(), rhs.total()):
                raise ValueError(f"chain map does not commute at degree {n}")

    def map_at(self, n: int) -> ModuleMap:
        f = self.maps.get(n)
        if f is None:
            return rep.zero_map(self.source.term(n), self.target.term(n))
        return f

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.maps.values())

    def __add__(self, other):
        degs = set(self.maps) | set(other.maps)
        return ChainMap(self.source, self.target,
                        {n: self.map_at(n) + other.map_at(n) for n in degs},
                        check=False)

    def scale(self, c: int):
        return ChainMap(self.source, self.target,
                        {n: f.scale(c) for n, f in self.maps.items()},
                        check=False)


def compose_chain(f: ChainMap, g: ChainMap) -> ChainMap:
    """f after g."""
    degs = set(g.maps) | set(f.maps)
    return ChainMap(g.source, f.target,
                    {n: compose(f.map_at(n), g.map_at(n)) for n in degs},
                    check=False)


def identity_chain(x: Complex) -> ChainMap:
    return ChainMap(x, x, {n: rep.identity_map(x.terms[n])
                           for n in x.support}, check=False)


def stalk_complex(m: Module, deg: int = 0) -> Complex:
    return Complex(m.algebra, {deg: m}, {}, check=False)


def zero_complex(algebra) -> Complex:
    return Complex(algebra, {}, {}, check=False)


def shift(x: Complex, k: int) -> Complex:
    """(X[k])^n = X^{n+k}, differential scaled by (-1)^k."""
    sign = 1 if k % 2 == 0 else -1
    terms = {n - k: m for n, m in x.terms.items()}
    diffs = {n - k: d.scale(sign) for n, d in x.diffs.items()}
    return Complex(x.algebra, terms, diffs, check=False)


def cone(f: ChainMap) -> Complex:
    """Terms X^{n+1} (+) Y^n, differential [[-d_X, 0], [f, d_Y]]."""
    x, y = f.source, f.target
    alg = x.algebra
    degs = sorted({n - 1 for n in x.terms} | set(y.terms))
    terms, parts = {}, {}
    for n in degs:
        summands = [x.term(n + 1), y.term(n)]
        total, incs, projs = rep.direct_sum(summands)
        terms[n] = total
        parts[n] = (incs, projs)
    diffs = {}
    for n in degs:
        if n + 1 not in terms:
            continue
        incs1, _ = parts[n + 1]
        _, projs0 = parts[n]
        d = rep.zero_map(terms[n], terms[n + 1])
        d = d + compose(incs1[0], compose(x.diff(n + 1), projs0[0])).scale(-1)
        d = d + compose(incs1[1], compose(f.map_at(n + 1), projs0[0]))
        d = d + compose(incs1[1], compose(y.diff(n), projs0[1]))
        diffs[n] = d
    return Complex(alg, terms, diffs, check=True)


def cone_triangle(f: ChainMap):
    """Returns (cone, inclusion Y -> cone, projection cone -> X[1])."""
    c = cone(f)
    x, y = f.source, f.target
    x1 = shift(x, 1)
    inc_maps, proj_maps = {}, {}
    for n in c.support:
        xt = x.term(n + 1)
        yt = y.term(n)
        total = c.terms[n]
        blocks_in = {}
        blocks_out = {}
        for v in total.vertex_order:
            bi = gf.zeros(total.dims[v], yt.dims[v])
            bi[xt.dims[v]:, :] = gf.eye(yt.dims[v])
            blocks_in[v] = bi
            bo = gf.zeros(xt.dims[v], total.dims[v])
            bo[:, :xt.dims[v]] = gf.eye(xt.dims[v])
            blocks_out[v] = bo
        if n in y.terms:
            inc_maps[n] = ModuleMap(yt, total, blocks_in, check=False)
        if n in x1.terms:
            proj_maps[n] = ModuleMap(total, x1.terms[n], blocks_out,
                                     check=False)
    return c, ChainMap(y, c, inc_maps), ChainMap(c, x1, proj_maps)


def cohomology(x: Complex, i: int) -> Module:
    if i not in x.terms:
        return rep.zero_module(x.algebra)
    incoming = x.diffs.get(i - 1)
    outgoing = x.diffs.get(i)
    if incoming is None and outgoing is None:
        return x.terms[i]
    if outgoing is None:
        outgoing = rep.zero_map(x.terms[i], rep.zero_module(x.algebra))
    return homology_at(incoming, outgoing)


def cohomology_profile(x: Complex) -> dict:
    out = {}
    for n in x.support:
        h = cohomology(x, n)
        if h.total_dim:
            out[n] = h.dim_vector()
    return out


def is_zero_in_derived(x: Complex) -> bool:
    return not cohomology_profile(x)


# -- chain maps and homotopy ---------------------------------------------------

def chain_maps(x: Complex, y: Complex) -> list[ChainMap]:
    """Basis of the space of strict chain maps x -> y."""
    degs = sorted(set(x.support) & set(y.support))
    if not degs:
        return []
    bases = {n: rep.hom_space(x.terms[n], y.terms[n]) for n in degs}
    layout = []
    off = 0
    for n in degs:
        layout.append((n, off, len(bases[n])))
        off += len(bases[n])
    nunk = off
    if nunk == 0:
        return []
    p = x.p
    rows = []
    cons_degs = sorted(n for n in x.support if (n + 1) in y.terms)
    for n in cons_degs:
        # d_Y^n f^n = f^{n+1} d_X^n inside Hom(X^n, Y^{n+1})
        cross = rep.hom_space(x.term(n), y.term(n + 1))
        ncons = len(cross)
        if ncons == 0:
            continue
        row = gf.zeros(ncons, nunk)
        for (m, moff, msz) in layout:
            if msz == 0:
                continue
            if m == n:
                for k in range(msz):
                    col = coords_in_basis(
                        cross, compose(y.diff(n), bases[n][k]))
                    row[:, moff + k] = (row[:, moff + k] + col) % p
            if m == n + 1:
                for k in range(msz):
                    col = coords_in_basis(
                        cross, compose(bases[n + 1][k], x.diff(n)))
                    row[:, moff + k] = (row[:, moff + k] - col) % p
        rows.append(row)
    sysmat = (np.concatenate(rows, axis=0) % p if rows
              else gf.zeros(0, nunk))
    null = gf.nullspace(sysmat, p)
    out = []
    for c in range(null.shape[1]):
        maps = {}
        for (n, noff, nsz) in layout:
            if nsz == 0:
                continue
            f = rep.zero_map(x.terms[n], y.terms[n])
            for k in range(nsz):
                f = f + bases[n][k].scale(int(null[noff + k, c]))
            maps[n] = f
        out.append(ChainMap(x, y, maps, check=False))
    return out


def _chain_coords(basis: list[ChainMap], f: ChainMap) -> np.ndarray:
    degs = sorted(set(f.source.support) & set(f.target.support))
    if not basis:
        if f.is_zero():
            return np.zeros(0, dtype=np.int64)
        raise ValueError("nonzero chain map in empty basis")
    p = f.p

    def flat(g):
        return np.concatenate(
            [g.map_at(n).total().flatten() for n in degs]) % p

    mat = np.stack([flat(b) for b in basis], axis=1)
    sol = gf.solve(mat, flat(f).reshape(-1, 1), p)
    if sol is None:
        raise ValueError("chain map not in span")
    return sol[:, 0]


def homotopy_span(x: Complex, y: Complex,
                  chain_basis: list[ChainMap]) -> np.ndarray:
    """Coordinates (w.r.t. chain_basis) spanning the nullhomotopic maps."""
    p = x.p
    cols = []
    for n in x.support:
        for sigma in rep.hom_space(x.terms[n], y.term(n - 1)):
            maps = {}
            h_n = compose(y.diff(n - 1), sigma)
            if n in y.terms:
                maps[n] = h_n
            if (n - 1) in x.terms and (n - 1) in y.terms:
                maps[n - 1] = compose(sigma, x.diff(n - 1))
            h = ChainMap(x, y, maps, check=False)
            cols.append(_chain_coords(chain_basis, h))
    if not cols:
        return gf.zeros(len(chain_basis), 0)
    return gf.column_space(np.stack(cols, axis=1), p)


def hom_homotopy(x: Complex, y: Complex) -> list[ChainMap]:
    """Basis of chain maps modulo homotopy (class representatives)."""
    basis = chain_maps(x, y)
    if not basis:
        return []
    p = x.p
    null = homotopy_span(x, y, basis)
    reps = []
    seen = null
    for k, b in enumerate(basis):
        e = np.zeros(len(basis), dtype=np.int64)
        e[k] = 1
        if gf.in_span(seen, e, p):
            continue
        seen = gf.column_space(
            np.concatenate([seen, e.reshape(-1, 1)], axis=1), p)
        reps.append(b)
    return reps


def is_nullhomotopic(f: ChainMap) -> bool:
    basis = chain_maps(f.source, f.target)
    if f.is_zero():
        return True
    coords = _chain_coords(basis, f)
    null = homotopy_span(f.source, f.target, basis)
    return gf.in_span(null, coords, f.p)


# -- projective replacement -----------------------------------------------------

def has_projective_terms(x: Complex) -> bool:
    from .tilting import in_add
    reg = rep.regular_module(x.algebra)
    return all(in_add(reg, m) for m in x.terms.values())


def projective_replacement(x: Complex, cap: int = REPLACEMENT_SLACK):
    """A complex of projectives with a surjective quasi-isomorphism onto x.

    Built degree by degree from the top: each new term covers the pullback
    of the previous kernel against the incoming differential of x.
    """
    alg = x.algebra
    if x.is_zero_complex():
        z = zero_complex(alg)
        return z, ChainMap(z, x, {}, check=False)
    top = max(x.support)
    bot = min(x.support)
    gl = global_dimension(alg)
    terms, diffs, pis = {}, {}, {}
    n = top
    prev_term = None   # P^{n+1}
    while True:
        if prev_term is None:
            v_mod = x.term(n)
            to_prev = None
            pi_pre = rep.identity_map(v_mod)
        else:
            k_mod, k_incl = rep.kernel(diffs_map(prev_term, diffs, n + 1))
            phi = compose(pis[n + 1], k_incl)      # K -> X^{n+1}
            psi = x.diff(n)                         # X^n -> X^{n+1}
            pair, incs, projs = rep.direct_sum([k_mod, x.term(n)])
            delta = compose(phi, projs[0]) - compose(psi, projs[1])
            v_mod, v_incl = rep.kernel(delta)
            to_prev = compose(k_incl, compose(projs[0], v_incl))
            pi_pre = compose(projs[1], v_incl)
        if v_mod.total_dim == 0:
            break
        p_term, eps = projective_cover(v_mod)
        terms[n] = p_term
        pis[n] = compose(pi_pre, eps)
        if to_prev is not None and prev_term is not None:
            diffs[n] = compose(to_prev, eps)
        prev_term = p_term
        n -= 1
        if n < bot - gl - cap:
            raise InfiniteGlobalDimension(
                "projective replacement does not terminate")
    px = Complex(alg, terms, diffs, check=True)
    pi_maps = {m: pis[m] for m in px.support if m in x.terms}
    qis = ChainMap(px, x, pi_maps, check=True)
    return px, qis


def diffs_map(term: Module, diffs: dict, n: int) -> ModuleMap:
    d = diffs.get(n)
    if d is not None:
        return d
    return rep.zero_map(term, rep.zero_module(term.algebra))


def hom_in_derived(x: Complex, y: Complex) -> list[ChainMap]:
    """Basis of Hom in the derived category (via a projective replacement
    of the source; the algebra has finite global dimension)."""
    px, _ = projective_replacement(x)
    return hom_homotopy(px, y)


def is_quasi_iso(f: ChainMap) -> bool:
    return is_zero_in_derived(cone(f))


def is_derived_isomorphic(x: Complex, y: Complex,
                          cap: int = rep.END_ENUM_CAP) -> bool:
    hx, hy = cohomology_profile(x), cohomology_profile(y)
    if sorted(hx) != sorted(hy):
        return False
    if any(hx[n] != hy[n] for n in hx):
        return False
    if not hx:
        return True
    px, _ = projective_replacement(x)
    classes = hom_homotopy(px, y)
    if not classes:
        return False
    if x.p ** len(classes) > cap:
        raise SearchExhausted("derived hom space too large to scan")
    for coeffs in product(range(x.p), repeat=len(classes)):
        if not any(coeffs):
            continue
        f = classes[0].scale(coeffs[0])
        for b, c in zip(classes[1:], coeffs[1:]):
            f = f + b.scale(c)
        if is_quasi_iso(f):
            return True
    return False


# -- minimization and decomposition ---------------------------------------------

def _complement_maps(parts, skip_index, ambient, into: bool):
    """Inclusion/projection of the direct sum of all parts except one."""
    alg = ambient.algebra
    keep = [k for k in range(len(parts)) if k != skip_index]
    if not keep:
        z = rep.zero_module(alg)
        return z, rep.zero_map(z, ambient), rep.zero_map(ambient, z)
    comp, incs, projs = rep.direct_sum([parts[k][0] for k in keep])
    inc_total = rep.zero_map(comp, ambient)
    proj_total = rep.zero_map(ambient, comp)
    for pos, k in enumerate(keep):
        inc_total = inc_total + compose(parts[k][1], projs[pos])
        proj_total = proj_total + compose(incs[pos], parts[k][2])
    return comp, inc_total, proj_total


def _eliminate_once(x: Complex, cap: int):
    for n in sorted(x.diffs):
        d = x.diffs[n]
        if d.is_zero():
            continue
        sparts = rep.decompose_with_maps(x.terms[n], cap)
        tparts = rep.decompose_with_maps(x.terms[n + 1], cap)
        for i, (s, si, sp) in enumerate(sparts):
            for j, (t, ti, tp) in enumerate(tparts):
                alpha = compose(tp, compose(d, si))
                if not alpha.is_iso():
                    continue
                b_mod, b_inc, b_proj = _complement_maps(sparts, i, x.terms[n],
                                                        True)
                d_mod, d_inc, d_proj = _complement_maps(tparts, j,
                                                        x.terms[n + 1], True)
                alpha_inv = ModuleMap(
                    t, s, {v: gf.inverse(alpha.blocks[v], x.p)
                           for v in alpha.blocks}, check=False)
                beta = compose(tp, compose(d, b_inc))
                gamma = compose(d_proj, compose(d, si))
                delta = compose(d_proj, compose(d, b_inc))
                new_d = delta - compose(gamma, compose(alpha_inv, beta))
                terms = dict(x.terms)
                diffs = dict(x.diffs)
                terms[n] = b_mod
                terms[n + 1] = d_mod
                if new_d.is_zero() or b_mod.total_dim == 0 \
                        or d_mod.total_dim == 0:
                    diffs.pop(n, None)
                else:
                    diffs[n] = new_d
                if (n - 1) in x.diffs:
                    diffs[n - 1] = compose(b_proj, x.diffs[n - 1])
                    if diffs[n - 1].is_zero():
                        diffs.pop(n - 1)
                if (n + 1) in x.diffs:
                    diffs[n + 1] = compose(x.diffs[n + 1], d_inc)
                    if diffs[n + 1].is_zero():
                        diffs.pop(n + 1)
                return Complex(x.algebra, terms, diffs, check=True), True
    return x, False


def minimize_complex(x: Complex, cap: int = rep.END_ENUM_CAP) -> Complex:
    """Cancel invertible differential components until none remain."""
    cur = x
    while True:
        cur, changed = _eliminate_once(cur, cap)
        if not changed:
            return cur


def _split_by_chain_idempotent(x: Complex, e: ChainMap, cap: int):
    out = []
    for maps_of in ("image", "kernel"):
        terms, diffs = {}, {}
        incls = {}
        for n in x.support:
            f = e.map_at(n)
            if maps_of == "image":
                sub, incl, _ = rep.image(f)
            else:
                sub, incl = rep.kernel(f)
            if sub.total_dim:
                terms[n] = sub
                incls[n] = incl
        for n in list(terms):
            if n + 1 not in terms:
                continue
            moved = compose(x.diff(n), incls[n])
            blocks = {}
            ok = True
            for v in moved.source.vertex_order:
                sol = gf.solve(incls[n + 1].blocks[v], moved.blocks[v], x.p)
                if sol is None:
                    ok = False
                    break
                blocks[v] = sol
            if not ok:
                raise InternalInconsistency(
                    "idempotent image is not a subcomplex")
            diffs[n] = ModuleMap(terms[n], terms[n + 1], blocks, check=False)
        out.append(Complex(x.algebra, terms, diffs, check=True))
    return out


def decompose_complex(x: Complex, cap: int = rep.END_ENUM_CAP):
    """Indecomposable summands of x in the derived category.

    Works on a minimized projective replacement, where homotopy
    equivalences are chain isomorphisms, so strict idempotents suffice.
    """
    px, _ = projective_replacement(x)
    mx = minimize_complex(px, cap)
    return _decompose_minimal(mx, cap)


def _decompose_minimal(x: Complex, cap: int):
    if x.is_zero_complex():
        return []
    endos = chain_maps(x, x)
    if x.p ** len(endos) > cap:
        raise SearchExhausted(
            f"chain endomorphism ring of dimension {len(endos)} too large")
    ident = identity_chain(x)
    id_coords = _chain_coords(endos, ident)
    for coeffs in product(range(x.p), repeat=len(endos)):
        if not any(coeffs) or list(coeffs) == id_coords.tolist():
            continue
        e = endos[0].scale(coeffs[0])
        for b, c in zip(endos[1:], coeffs[1:]):
            e = e + b.scale(c)
        sq = compose_chain(e, e)
        if all(np.array_equal(sq.map_at(n).total(), e.map_at(n).total())
               for n in x.support):
            parts = _split_by_chain_idempotent(x, e, cap)
            out = []
            for piece in parts:
                out.extend(_decompose_minimal(piece, cap))
            return out
    return [x]


def is_indecomposable_complex(x: Complex, cap: int = rep.END_ENUM_CAP) -> bool:
    if is_zero_in_derived(x):
        return False
    return len(decompose_complex(x, cap)) == 1


def direct_sum_complexes(xs: list[Complex]):
    """Degreewise direct sum; returns (total, inclusion chain maps)."""
    if not xs:
        raise ValueError("empty direct sum of complexes")
    alg = xs[0].algebra
    degs = sorted({n for x in xs for n in x.support})
    terms, incs_at, projs_at = {}, {}, {}
    for n in degs:
        total, incs, projs = rep.direct_sum([x.term(n) for x in xs])
        terms[n] = total
        incs_at[n] = incs
        projs_at[n] = projs
    diffs = {}
    for n in degs:
        if n + 1 not in terms:
            continue
        d = rep.zero_map(terms[n], terms[n + 1])
        for k, x in enumerate(xs):
            d = d + compose(incs_at[n + 1][k],
                            compose(x.diff(n), projs_at[n][k]))
        if not d.is_zero():
            diffs[n] = d
    total_cplx = Complex(alg, terms, diffs, check=True)
    inc_chains = []
    for k, x in enumerate(xs):
        maps = {n: incs_at[n][k] for n in x.support}
        inc_chains.append(ChainMap(x, total_cplx, maps, check=False))
    return total_cplx, inc_chains


# -- enumeration -----------------------------------------------------------------

def normalize_shift(x: Complex) -> Complex:
    """Shift so the top nonzero cohomology sits in degree zero."""
    prof = cohomology_profile(x)
    if not prof:
        return zero_complex(x.algebra)
    return shift(x, max(prof))


def enumerate_indecomposable_complexes(alg, width_bound: int, dim_bound: int,
                                       cap: int = rep.END_ENUM_CAP):
    """All indecomposables of the bounded derived category, up to shift and
    isomorphism, with at most width_bound nonzero terms of total dimension
    at most dim_bound.

    Complete for derived-discrete desk-scale inputs; deterministic order.
    """
    indec_mods = rep.enumerate_indecomposable_modules(alg, dim_bound, cap)
    from .tilting import _sums_with_dim_bound
    found = []
    parts_cache = {}

    def summand_maps(m):
        key = m.encode()
        if key not in parts_cache:
            parts_cache[key] = rep.decompose_with_maps(m, cap)
        return parts_cache[key]

    def has_invertible_component(d):
        # such a candidate is homotopy-equivalent to a smaller one that the
        # enumeration also visits
        for _, si, _ in summand_maps(d.source):
            for _, _, tp in summand_maps(d.target):
                if compose(tp, compose(d, si)).is_iso():
                    return True
        return False

    def record(x: Complex):
        nx = normalize_shift(x)
        mnx = minimize_complex(projective_replacement(nx)[0], cap)
        for other, _ in found:
            if is_derived_isomorphic(mnx, other, cap):
                return
        found.append((mnx, nx))

    for width in range(1, width_bound + 1):
        term_choices = []
        for parts in _sums_with_dim_bound(indec_mods, dim_bound):
            if parts:
                term_choices.append(parts)
        for combo in product(term_choices, repeat=width):
            if sum(sum(m.total_dim for m in parts) for parts in combo) \
                    > dim_bound:
                continue
            terms = {i: (rep.direct_sum(list(parts))[0]
                         if len(parts) > 1 else parts[0])
                     for i, parts in enumerate(combo)}
            hom_bases = {i: rep.hom_space(terms[i], terms[i + 1])
                         for i in range(width - 1)}
            sizes = [len(hom_bases[i]) for i in range(width - 1)]
            if alg.p ** sum(sizes) > cap:
                raise SearchExhausted("too many candidate differentials")
            for assignment in product(
                    *(range(alg.p ** s) for s in sizes)):
                diffs = {}
                ok = True
                for i in range(width - 1):
                    code = assignment[i]
                    f = rep.zero_map(terms[i], terms[i + 1])
                    for k in range(sizes[i]):
                        c = (code // (alg.p ** k)) % alg.p
                        if c:
                            f = f + hom_bases[i][k].scale(c)
                    diffs[i] = f
                    if width > 1 and i > 0:
                        if not compose(diffs[i], diffs[i - 1]).is_zero():
                            ok = False
                            break
                if not ok:
                    continue
                # every term must matter: no zero row/column differentials
                if width > 1:
                    if diffs[0].is_zero() and width == 2:
                        continue
                    degenerate = False
                    for i in range(width):
                        outgoing = diffs.get(i)
                        incoming = diffs.get(i - 1)
                        if ((outgoing is None or outgoing.is_zero())
                                and (incoming is None or incoming.is_zero())):
                            degenerate = True
                            break
                    if degenerate:
                        continue
                if any(has_invertible_component(diffs[i])
                       for i in range(width - 1)):
                    continue
                cand = Complex(alg, terms, diffs, check=False)
                if is_zero_in_derived(cand):
                    continue
                if not is_indecomposable_complex(cand, cap):
                    continue
                record(cand)
    ordered = sorted(found, key=lambda pair: (pair[0].width(),
                                              pair[0].total_dim(),
                                              pair[0].encode()))
    return [nx for _, nx in ordered]
