"""t-structures generated by a tilting module: membership tests, hearts,
heart torsion pairs, torsion decompositions, and the depth-n t-tree."""

from __future__ import annotations

from itertools import product

from . import derived, rep
from .derived import (Complex, cohomology, cohomology_profile,
                      hom_homotopy, is_derived_isomorphic, is_zero_in_derived,
                      projective_replacement, shift, stalk_complex)
from .errors import (ModeUnsupported, SearchExhausted, WindowTooSmall)
from .tilting import TiltingContext, miyashita_class

WINDOW_WIDEN_CAP = 16


class GeneratedTStructure:
    """A t-structure given by a finite generator list of complexes.

    kind selects the aisle test: "tilting" (direct Hom-vanishing against the
    tilting generator), "natural" (cohomology support), or "generic"
    (Keller-Vossieck duality against an enumerated coaisle universe).
    """

    def __init__(self, algebra, generators: list[Complex], kind: str,
                 universe=None, hom_dim=None, name: str = ""):
        self.algebra = algebra
        self.generators = generators
        self.kind = kind
        self.universe = universe
        self.name = name
        self._hom = hom_dim if hom_dim is not None else _HomCache().dim
        self._gen_repl = [projective_replacement(g)[0] for g in generators]
        self._coaisle_memo = {}
        self._aisle_memo = {}

    def in_coaisle(self, y: Complex, k: int = 0) -> bool:
        """Y in S^{>= k}: Hom(E, Y[k + j]) = 0 for every j < 0."""
        if y.is_zero_complex():
            return True
        key = (y.encode(), k)
        hit = self._coaisle_memo.get(key)
        if hit is not None:
            return hit
        ok = True
        for pe in self._gen_repl:
            if pe.is_zero_complex():
                continue
            lo = min(y.support) - k - max(pe.support)
            hi = max(y.support) - k - min(pe.support)
            for j in range(lo, min(hi, -1) + 1):
                if j >= 0:
                    break
                if self._hom(pe, shift(y, k + j), replaced=True):
                    ok = False
                    break
            if not ok:
                break
        self._coaisle_memo[key] = ok
        return ok

    def in_aisle(self, x: Complex, k: int = 0, window: int = None) -> bool:
        """X in S^{<= k}."""
        if x.is_zero_complex():
            return True
        key = (x.encode(), k)
        hit = self._aisle_memo.get(key)
        if hit is not None:
            return hit
        if self.kind == "natural":
            ok = all(n <= k for n in cohomology_profile(x))
        elif self.kind == "tilting":
            t = self.generators[0]
            pt = self._gen_repl[0]
            lo = min(x.support) - max(pt.support)
            hi = max(x.support) - min(pt.support)
            ok = not any(self._hom(pt, shift(x, i), replaced=True)
                         for i in range(max(k + 1, lo), hi + 1))
        else:
            ok = self._aisle_via_duality(x, k, window)
        self._aisle_memo[key] = ok
        return ok

    def _aisle_via_duality(self, x: Complex, k: int, window) -> bool:
        """X in S^{<= k} iff Hom(X, Y) = 0 for every Y in S^{>= k+1}."""
        if self.universe is None:
            raise ModeUnsupported(
                "aisle test for a generic t-structure needs an enumerated "
                "indecomposable universe")
        px, _ = projective_replacement(x)
        if px.is_zero_complex():
            return True
        lo_need = min(px.support)
        hi_need = max(px.support)
        if window is not None:
            width = window
            while True:
                if -width <= lo_need and hi_need <= width:
                    break
                if width > WINDOW_WIDEN_CAP:
                    raise WindowTooSmall(
                        f"support of candidate exceeds window cap "
                        f"{WINDOW_WIDEN_CAP}")
                width *= 2
        for u in self.universe:
            # shifts of u whose support can meet supp(px)
            lo = min(u.support) - hi_need
            hi = max(u.support) - lo_need
            for s in range(lo, hi + 1):
                y = shift(u, s)
                if not self.in_coaisle(y, k + 1):
                    continue
                if self._hom(px, y, replaced=True):
                    return False
        return True

    def heart_keys(self, window: int):
        """Members of the heart among shifted universe objects: (index, s)
        pairs meaning universe[index][s]."""
        if self.universe is None:
            raise ModeUnsupported("heart needs an enumerated universe")
        out = []
        for ui, u in enumerate(self.universe):
            for s in range(-window, window + 1):
                y = shift(u, s)
                if self.in_coaisle(y, 0) and self.in_aisle(y, 0):
                    out.append((ui, s))
        return sorted(out)


class _HomCache:
    """Derived Hom dimensions memoized on complex encodings."""

    def __init__(self):
        self._memo = {}
        self._repl = {}

    def replacement(self, x: Complex) -> Complex:
        key = x.encode()
        px = self._repl.get(key)
        if px is None:
            px = projective_replacement(x)[0]
            self._repl[key] = px
        return px

    def dim(self, x: Complex, y: Complex, replaced: bool = False) -> int:
        px = x if replaced else self.replacement(x)
        key = (px.encode(), y.encode())
        d = self._memo.get(key)
        if d is None:
            d = len(hom_homotopy(px, y))
            self._memo[key] = d
        return d


class TTree:
    """The depth-n binary t-tree of a module: node (b_1..b_i) splits into
    torsion child (append 0) and torsion-free child (append 1)."""

    def __init__(self, root: Complex, depth: int):
        self.root = root
        self.depth = depth
        self.nodes = {(): root}
        self.triangles = {}

    def node(self, pos: tuple) -> Complex:
        return self.nodes[pos]

    def leaves(self):
        return {pos: self.nodes[pos]
                for pos in self.nodes if len(pos) == self.depth}

    def render(self) -> str:
        lines = []
        for pos in sorted(self.nodes, key=lambda q: (len(q), q)):
            label = "X_" + ("".join(map(str, pos)) if pos else "()")
            obj = self.nodes[pos]
            if obj.is_zero_complex() or is_zero_in_derived(obj):
                desc = "0"
            else:
                desc = ", ".join(f"H^{n}={h}" for n, h
                                 in sorted(cohomology_profile(obj).items()))
            lines.append("  " * len(pos) + f"{label}: {desc}")
        return "\n".join(lines)


class DerivedWorkbench:
    """Derived-category side of a certified tilting module: the natural,
    intermediate and tilting t-structures, their hearts and torsion pairs,
    and t-trees.  Requires representation-finite desk scale."""

    def __init__(self, ctx: TiltingContext, width_bound: int = 2,
                 dim_bound: int = None, cap: int = rep.END_ENUM_CAP):
        if not ctx.representation_finite:
            raise ModeUnsupported(
                "t-structure workbench needs a representation-finite "
                "algebra within the dimension bound")
        self.ctx = ctx
        self.algebra = ctx.t.algebra
        self.n = ctx.n
        self.cap = cap
        if dim_bound is None:
            dim_bound = ctx.dim_bound
        self.universe = derived.enumerate_indecomposable_complexes(
            self.algebra, width_bound, dim_bound, cap)
        self.window = self.n + 2
        self.homs = _HomCache()
        t_stalk = stalk_complex(ctx.t, 0)
        a_stalk = stalk_complex(rep.regular_module(self.algebra), 0)
        self.tilting_structure = GeneratedTStructure(
            self.algebra, [t_stalk], "tilting", self.universe,
            self.homs.dim, name="tilting")
        self._intermediate = {}
        for i in range(self.n + 1):
            if i == 0:
                kind = "natural"
            elif i == self.n:
                kind = "tilting"
            else:
                kind = "generic"
            self._intermediate[i] = GeneratedTStructure(
                self.algebra, [t_stalk, shift(a_stalk, i)],
                kind, self.universe, self.homs.dim, name=f"level {i}")
        self._hearts = {}
        self._pairs = {}

    def structure(self, i: int) -> GeneratedTStructure:
        return self._intermediate[i]

    def heart(self, i: int):
        keys = self.heart_members(i)
        return [self.member(k) for k in keys]

    def member(self, key) -> Complex:
        ui, s = key
        return shift(self.universe[ui], s)

    def heart_members(self, i: int):
        if i not in self._hearts:
            self._hearts[i] = self.structure(i).heart_keys(self.window)
        return self._hearts[i]

    def tilting_heart_members(self):
        return self.heart_members(self.n)

    def heart_torsion_pair(self, i: int):
        """Keys of (X_i, Y_i): X_i = H_i meet H_{i+1},
        Y_i = H_i meet H_{i+1}[-1]."""
        if i in self._pairs:
            return self._pairs[i]
        low = set(self.heart_members(i))
        high = set(self.heart_members(i + 1))
        x_keys = sorted(k for k in low if k in high)
        y_keys = sorted((ui, s) for (ui, s) in low if (ui, s + 1) in high)
        self._pairs[i] = (x_keys, y_keys)
        return self._pairs[i]

    def in_additive_closure(self, x: Complex, keys, extra_shift: int) -> bool:
        """Does x decompose into summands from {member(k)[extra_shift]}?"""
        if is_zero_in_derived(x):
            return True
        try:
            parts = derived.decompose_complex(x, self.cap)
        except SearchExhausted:
            return False
        for piece in parts:
            if not any(is_derived_isomorphic(
                    piece, shift(self.member(k), extra_shift), self.cap)
                    for k in keys):
                return False
        return True

    def torsion_decompose_in_heart(self, x: Complex, i: int, s: int):
        """Triangle U -> X -> C with U built from X_i[-s] members and
        C in add(Y_i[-s]); X must lie in H_i[-s]."""
        x_keys, y_keys = self.heart_torsion_pair(i)
        if is_zero_in_derived(x):
            z = derived.zero_complex(self.algebra)
            return z, None, z
        if self.in_additive_closure(x, y_keys, -s):
            return derived.zero_complex(self.algebra), None, x
        members = [shift(self.member(k), -s) for k in x_keys]
        mults = [self.homs.dim(m, x) for m in members]
        for counts in product(*(range(c + 1) for c in mults)):
            if not any(counts):
                continue
            summands = []
            for m, c in zip(members, counts):
                summands.extend([m] * c)
            u, _ = derived.direct_sum_complexes(summands)
            pu = self.homs.replacement(u)
            classes = hom_homotopy(pu, x)
            if not classes:
                continue
            if self.algebra.p ** len(classes) > self.cap:
                raise SearchExhausted("torsion-part morphism space too large")
            for coeffs in product(range(self.algebra.p), repeat=len(classes)):
                if not any(coeffs):
                    continue
                f = classes[0].scale(coeffs[0])
                for b, c in zip(classes[1:], coeffs[1:]):
                    f = f + b.scale(c)
                cone = derived.cone(f)
                if self.in_additive_closure(cone, y_keys, -s):
                    return u, f, cone
        raise SearchExhausted(
            "no torsion decomposition found within the multiplicity cap")

    def t_tree(self, x: rep.Module) -> TTree:
        tree = TTree(stalk_complex(x, 0), self.n)
        frontier = [()]
        for level in range(self.n):
            nxt = []
            for pos in frontier:
                node = tree.nodes[pos]
                s = sum(pos)
                u, f, c = self.torsion_decompose_in_heart(node, level, s)
                tree.nodes[pos + (0,)] = u
                tree.nodes[pos + (1,)] = c
                tree.triangles[pos] = (u, f, c)
                nxt.extend([pos + (0,), pos + (1,)])
            frontier = nxt
        self._verify_leaves(tree)
        return tree

    def _verify_leaves(self, tree: TTree):
        tilt = self.tilting_structure
        for pos, leaf in tree.leaves().items():
            if is_zero_in_derived(leaf):
                continue
            s = sum(pos)
            if not (tilt.in_aisle(leaf, s) and tilt.in_coaisle(leaf, s)):
                raise SearchExhausted(
                    f"t-tree leaf at {pos} escapes the tilting heart")
            prof = cohomology_profile(leaf)
            if list(prof) == [0]:
                cls = miyashita_class(self.ctx.t, cohomology(leaf, 0), self.n)
                if cls != s:
                    raise SearchExhausted(
                        f"module leaf at {pos} has tilting class {cls}, "
                        f"expected {s}")

    # -- structural sweeps -------------------------------------------------

    def shifted_universe(self):
        out = []
        for ui, u in enumerate(self.universe):
            for s in range(-self.window, self.window + 1):
                out.append(shift(u, s))
        return out

    def verify_structural_claims(self) -> dict:
        """Exhaustive checks over the shifted universe; values are
        (passed, detail) pairs."""
        report = {}
        objs = self.shifted_universe()
        natural = self.structure(0)
        tilt = self.tilting_structure

        bad = [o for o in objs
               if natural.in_coaisle(o, 0) and not tilt.in_coaisle(o, 0)]
        bad += [o for o in objs
                if tilt.in_coaisle(o, 0) and not natural.in_coaisle(o, -self.n)]
        report["coaisle_sandwich"] = (not bad, f"{len(bad)} violations")

        bad = [o for o in objs
               if natural.in_aisle(o, -self.n) and not tilt.in_aisle(o, 0)]
        bad += [o for o in objs
                if tilt.in_aisle(o, 0) and not natural.in_aisle(o, 0)]
        report["aisle_sandwich"] = (not bad, f"{len(bad)} violations")

        bad = []
        for i in range(self.n + 1):
            s_i = self.structure(i)
            for o in objs:
                two_sided = (natural.in_coaisle(o, -i)
                             and tilt.in_coaisle(o, 0))
                if s_i.in_coaisle(o, 0) != two_sided:
                    bad.append((i, o))
        report["generated_coaisle_agreement"] = (not bad,
                                                 f"{len(bad)} violations")

        bad = []
        for i in range(self.n):
            lo, hi = self.structure(i), self.structure(i + 1)
            for o in objs:
                if lo.in_coaisle(o, 0) and not hi.in_coaisle(o, 0):
                    bad.append((i, o, "chain"))
                if hi.in_coaisle(o, 0) and not lo.in_coaisle(o, -1):
                    bad.append((i, o, "step"))
        report["coaisle_chain"] = (not bad, f"{len(bad)} violations")

        bad = []
        for o in objs:
            if not tilt.in_aisle(o, 0):
                continue
            h0 = cohomology(o, 0)
            if h0.total_dim == 0:
                continue
            ok = all(not any(self.ctx.ext_row(p)[j]
                             for j in range(1, self.n + 1))
                     for p, _ in rep.decompose(h0, self.cap))
            if not ok:
                bad.append(o)
        report["h0_of_aisle_in_ke0"] = (not bad, f"{len(bad)} violations")

        bad = []
        for o in objs:
            if not tilt.in_aisle(o, 0):
                continue
            for y in objs:
                if tilt.in_coaisle(y, 1) and self.homs.dim(o, y):
                    bad.append((o, y))
        report["t2_orthogonality"] = (not bad, f"{len(bad)} violations")
        return report
