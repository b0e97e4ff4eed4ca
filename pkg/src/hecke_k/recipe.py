"""Cokernel recipes for K0 from fundamental-domain data.

A :class:`RecipeInstance` lists vertex orbit representatives V (totally
ordered), and for each pair ``(v, w)`` with ``v <= w`` a set of labels g, one
per edge orbit ``[v, g w]``. Each label carries the object for the
intersection ``G_v ∩ G_{gw}``, an inclusion-type morphism into ``G_v`` and a
conjugation-type morphism into ``G_w``. Coefficient groups and the matrices
they induce are inputs; nothing here computes a K-group of a p-adic group.

The inclusion side always carries the sign -1. Flipping every sign would not
change any cokernel.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .bredon import Cell, Edge, OneSkeletonData, apply_coefficients
from .errors import CrossCheckError, InstanceError
from .exactla import (AbHom, FgAbGroup, IntMatrix, block_hom, cokernel, direct_sum,
                      hom_power, is_isomorphic, pi_shift, power)
from .fincat import CoeffSystem, FinCategory, Morphism, validate_category, validate_functor

__all__ = [
    "Vertex",
    "EdgeLabel",
    "RecipeInstance",
    "CentralExtInstance",
    "build_beta",
    "k0_general",
    "sh0_of_instance",
    "strict_domain_instance",
    "build_gamma",
    "build_delta_epsilon",
    "k0_central",
    "sl_instance",
    "pgl_instance",
    "gl_instance",
    "gl_bar_map",
    "gl_tilde_map",
    "k0_gl",
    "skeleton_instance",
]


@dataclass(frozen=True)
class Vertex:
    name: str
    stabilizer: str


@dataclass(frozen=True)
class EdgeLabel:
    v: str
    w: str
    label: str
    intersection: str
    inclusion: str
    conjugation: str


@dataclass(frozen=True, eq=False)
class RecipeInstance:
    coefficients: CoeffSystem
    vertices: tuple
    edges: tuple

    @property
    def category(self) -> FinCategory:
        return self.coefficients.category

    def vertex_index(self, name: str) -> int:
        for i, v in enumerate(self.vertices):
            if v.name == name:
                return i
        raise InstanceError(f"unknown vertex {name!r}")

    def validate(self, check_functor: bool = True):
        cat = self.category
        names = [v.name for v in self.vertices]
        if len(set(names)) != len(names):
            raise InstanceError("duplicate vertex names")
        if check_functor:
            for report in (validate_category(cat), validate_functor(self.coefficients)):
                if not report:
                    raise InstanceError(str(report), code=report.code)
        for v in self.vertices:
            if v.stabilizer not in cat.objects:
                raise InstanceError(f"vertex {v.name!r}: unknown stabilizer {v.stabilizer!r}",
                                    code="REFERENCE")
        seen = set()
        for e in self.edges:
            iv, iw = self.vertex_index(e.v), self.vertex_index(e.w)
            if iv > iw:
                raise InstanceError(f"edge ({e.v}, {e.w}) violates the vertex order")
            key = (e.v, e.w, e.label)
            if key in seen:
                raise InstanceError(f"label {e.label!r} repeated for ({e.v}, {e.w})")
            seen.add(key)
            for mid, end in ((e.inclusion, self.vertices[iv]), (e.conjugation, self.vertices[iw])):
                if not cat.has_morphism(mid):
                    raise InstanceError(f"unknown morphism {mid!r}", code="REFERENCE")
                m = cat.morphism(mid)
                if (m.source, m.target) != (e.intersection, end.stabilizer):
                    raise InstanceError(
                        f"label {e.label!r} of ({e.v}, {e.w}): morphism {mid!r} goes "
                        f"{m.source}->{m.target}, expected {e.intersection}->{end.stabilizer}")

    def edge_orbits(self) -> int:
        return len(self.edges)

    def to_one_skeleton(self) -> OneSkeletonData:
        """1-skeleton whose first Bredon differential is the beta map."""
        verts = tuple(Cell(v.name, v.stabilizer) for v in self.vertices)
        edges = tuple(
            Edge(f"[{e.v},{e.label}{e.w}]", e.intersection, self.vertex_index(e.v),
                 self.vertex_index(e.w), e.inclusion, e.conjugation)
            for e in self.edges)
        return OneSkeletonData(self.category, verts, edges)


def _beta_like(inst: RecipeInstance) -> AbHom:
    F = inst.coefficients
    targets = [F.value(v.stabilizer) for v in inst.vertices]
    sources = [F.value(e.intersection) for e in inst.edges]
    blocks = {}
    for k, e in enumerate(inst.edges):
        iv, iw = inst.vertex_index(e.v), inst.vertex_index(e.w)
        neg_incl = -F.map(e.inclusion).matrix
        conj = F.map(e.conjugation).matrix
        if iv == iw:
            blocks[(iv, k)] = conj + neg_incl
        else:
            blocks[(iv, k)] = neg_incl
            blocks[(iw, k)] = conj
    return block_hom(direct_sum(sources)[0], direct_sum(targets)[0], sources, targets, blocks)


def build_beta(inst: RecipeInstance) -> AbHom:
    """Block map from the sum over edge labels of F(intersection) to the sum over V of F(G_u).

    Component at u = v is -F(inclusion), at u = w it is F(conjugation), zero
    elsewhere; both contributions add when v = w.
    """
    inst.validate()
    return _beta_like(inst)


def k0_general(inst: RecipeInstance) -> FgAbGroup:
    """coker(beta)."""
    return cokernel(build_beta(inst))[0]


def sh0_of_instance(inst: RecipeInstance) -> FgAbGroup:
    """H0 of the generated 1-skeleton through the Bredon chain complex."""
    inst.validate()
    return apply_coefficients(inst.to_one_skeleton().to_complex(), inst.coefficients).homology(0)


def strict_domain_instance(coefficients: CoeffSystem, vertices: Sequence,
                           edges: Sequence) -> RecipeInstance:
    """Instance for a strict fundamental domain: one label ``e`` per edge.

    ``vertices`` are ``(name, stabilizer)`` in the chosen order; ``edges`` are
    ``(v, w, intersection, inclusion_into_v, inclusion_into_w)`` with v < w.
    """
    verts = tuple(Vertex(*v) if not isinstance(v, Vertex) else v for v in vertices)
    order = {v.name: i for i, v in enumerate(verts)}
    out = []
    for e in edges:
        v, w, inter, inc_v, inc_w = e
        if v not in order or w not in order:
            raise InstanceError(f"edge ({v}, {w}) uses an unknown vertex", code="REFERENCE")
        if order[v] >= order[w]:
            raise InstanceError(f"edge ({v}, {w}) must satisfy v < w in a strict domain")
        out.append(EdgeLabel(v, w, "e", inter, inc_v, inc_w))
    inst = RecipeInstance(coefficients, verts, tuple(out))
    inst.validate()
    return inst


# ---------------------------------------------------------------------------
# Central extension variation


@dataclass(frozen=True, eq=False)
class CentralExtInstance:
    """Recipe data over the ``tilde-G ∩ tilde-M`` objects, plus m and mu-bar.

    ``mu_bar[k]`` is the residue mod m of the k-th edge label.
    """

    base: RecipeInstance
    m: int
    mu_bar: tuple

    def validate(self):
        if self.m < 1:
            raise InstanceError(f"m must be >= 1, got {self.m}")
        if len(self.mu_bar) != len(self.base.edges):
            raise InstanceError("one mu-bar residue is needed per edge label")
        for r in self.mu_bar:
            if not 0 <= r < self.m:
                raise InstanceError(f"residue {r} is not reduced mod {self.m}")
        self.base.validate()

    @classmethod
    def reduced(cls, base: RecipeInstance, m: int, mu: Sequence[int]) -> "CentralExtInstance":
        return cls(base, m, tuple(x % m for x in mu))


def build_gamma(inst: CentralExtInstance) -> AbHom:
    """Same block shape as beta, over the tilde objects."""
    inst.validate()
    return _beta_like(inst.base)


def build_delta_epsilon(inst: CentralExtInstance) -> AbHom:
    """``delta + epsilon`` into the sum over V of F(G_u)^m.

    delta is ``pi - id`` on each vertex summand. epsilon is the m-fold sum of
    the gamma component at u = v, and ``pi^mu_bar(g)`` after the m-fold
    conjugation component at u = w.
    """
    inst.validate()
    base, m = inst.base, inst.m
    F = base.coefficients
    vgroups = [F.value(v.stabilizer) for v in base.vertices]
    egroups = [F.value(e.intersection) for e in base.edges]
    targets = [power(A, m) for A in vgroups]
    sources = targets + [power(B, m) for B in egroups]
    blocks = {}
    for i, A in enumerate(vgroups):
        blocks[(i, i)] = pi_shift(A, m) - AbHom.identity(targets[i])
    nv = len(vgroups)
    for k, e in enumerate(base.edges):
        iv, iw = base.vertex_index(e.v), base.vertex_index(e.w)
        incl = hom_power(-F.map(e.inclusion), m)
        conj = pi_shift(vgroups[iw], m, inst.mu_bar[k]).compose(hom_power(F.map(e.conjugation), m))
        col = nv + k
        if iv == iw:
            blocks[(iv, col)] = incl + conj
        else:
            blocks[(iv, col)] = incl
            blocks[(iw, col)] = conj
    return block_hom(direct_sum(sources)[0], direct_sum(targets)[0], sources, targets, blocks)


def k0_central(inst: CentralExtInstance) -> FgAbGroup:
    """coker(gamma), cross-checked against coker(delta + epsilon)."""
    g = cokernel(build_gamma(inst))[0]
    de = cokernel(build_delta_epsilon(inst))[0]
    if not is_isomorphic(g, de):
        raise CrossCheckError(f"coker(gamma) = {g} but coker(delta+epsilon) = {de}")
    return g


# ---------------------------------------------------------------------------
# Instance builders


def _need(table, key, what):
    try:
        return table[key]
    except (KeyError, IndexError):
        raise InstanceError(f"missing coefficient entry: {what}", code="REFERENCE") from None


def _hom(src: FgAbGroup, tgt: FgAbGroup, M) -> AbHom:
    return M if isinstance(M, AbHom) else AbHom(src, tgt, M)


def sl_instance(n: int, vertex_groups: Sequence[FgAbGroup], edge_groups: Mapping,
                inclusions: Mapping) -> RecipeInstance:
    """Strict-domain instance for SL_n: vertices 0..n-1, an edge for each i < j.

    ``vertex_groups[l]`` models K0 of the l-th maximal parahoric,
    ``edge_groups[(i, j)]`` K0 of the intersection, and
    ``inclusions[(i, j, k)]`` for k in {i, j} the matrix induced by the
    inclusion of the intersection into the k-th vertex group.
    """
    if n < 1:
        raise InstanceError("n must be at least 1")
    objects = [f"U{l}" for l in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    objects += [f"U{i},{j}" for i, j in pairs]
    mors = []
    for i, j in pairs:
        for k in (i, j):
            mors.append(Morphism(f"f{i},{j}>{k}", f"U{i},{j}", f"U{k}", "inclusion"))
    cat = FinCategory.build(objects, mors)
    values = {f"U{l}": _need(vertex_groups, l, f"vertex group {l}") for l in range(n)}
    for i, j in pairs:
        values[f"U{i},{j}"] = _need(edge_groups, (i, j), f"edge group ({i}, {j})")
    matrices = {}
    for i, j in pairs:
        for k in (i, j):
            M = _need(inclusions, (i, j, k), f"inclusion ({i}, {j}) -> {k}")
            matrices[f"f{i},{j}>{k}"] = _hom(values[f"U{i},{j}"], values[f"U{k}"], M)
    F = CoeffSystem.from_matrices(cat, values, matrices)
    return strict_domain_instance(
        F, [(f"v{l}", f"U{l}") for l in range(n)],
        [(f"v{i}", f"v{j}", f"U{i},{j}", f"f{i},{j}>{i}", f"f{i},{j}>{j}") for i, j in pairs])


def pgl_instance(n: int, *, U0: FgAbGroup, HI: FgAbGroup, I: FgAbGroup, caps: Mapping,
                 i_H, i_0, c0: Mapping, cl: Mapping) -> RecipeInstance:
    """Instance for PGL_n with vertex orbits v0 < b and k = n // 2 loop labels.

    ``caps[l]`` models K0 of ``U_0 ∩ U_l`` for l = 1..k; ``c0[l]`` is the
    inclusion into U_0 and ``cl[l]`` the conjugation by ``h^-l`` into U_0.
    ``i_H`` and ``i_0`` are the inclusions of the Iwahori into ``H I`` and U_0.
    """
    if n < 2:
        raise InstanceError("PGL instances need n >= 2")
    k = n // 2
    objects = ["U0", "HI", "I"] + [f"U0,{l}" for l in range(1, k + 1)]
    mors = [Morphism("i_H", "I", "HI", "inclusion"), Morphism("i_0", "I", "U0", "inclusion")]
    for l in range(1, k + 1):
        mors.append(Morphism(f"c0_{l}", f"U0,{l}", "U0", "inclusion"))
        mors.append(Morphism(f"c{l}", f"U0,{l}", "U0", f"conjugation by h^-{l}"))
    cat = FinCategory.build(objects, mors)
    values = {"U0": U0, "HI": HI, "I": I}
    for l in range(1, k + 1):
        values[f"U0,{l}"] = _need(caps, l, f"group for U0 ∩ U{l}")
    matrices = {"i_H": _hom(I, HI, i_H), "i_0": _hom(I, U0, i_0)}
    for l in range(1, k + 1):
        matrices[f"c0_{l}"] = _hom(values[f"U0,{l}"], U0, _need(c0, l, f"c0 for l={l}"))
        matrices[f"c{l}"] = _hom(values[f"U0,{l}"], U0, _need(cl, l, f"c_l for l={l}"))
    F = CoeffSystem.from_matrices(cat, values, matrices)
    edges = [EdgeLabel("v0", "v0", f"h^{l}", f"U0,{l}", f"c0_{l}", f"c{l}") for l in range(1, k + 1)]
    edges.append(EdgeLabel("v0", "b", "e", "I", "i_0", "i_H"))
    inst = RecipeInstance(F, (Vertex("v0", "U0"), Vertex("b", "HI")), tuple(edges))
    inst.validate()
    return inst


def gl_instance(n: int, *, U0: FgAbGroup, I: FgAbGroup, caps: Mapping, i_0,
                c0: Mapping, cl: Mapping) -> tuple:
    """Central-extension instance for GL_n and the reduced map d-tilde.

    Built on the PGL shape with m = n. The barycenter vertex and the edge
    ``[v0, b]`` both carry the Iwahori object, joined by its identity; the
    loop label ``h^l`` has residue l mod n.
    """
    if n < 2:
        raise InstanceError("GL instances need n >= 2")
    k = n // 2
    objects = ["U0", "I"] + [f"U0,{l}" for l in range(1, k + 1)]
    mors = [Morphism("i_0", "I", "U0", "inclusion")]
    for l in range(1, k + 1):
        mors.append(Morphism(f"c0_{l}", f"U0,{l}", "U0", "inclusion"))
        mors.append(Morphism(f"c{l}", f"U0,{l}", "U0", f"conjugation by h^-{l}"))
    cat = FinCategory.build(objects, mors)
    values = {"U0": U0, "I": I}
    for l in range(1, k + 1):
        values[f"U0,{l}"] = _need(caps, l, f"group for U0 ∩ U{l}")
    matrices = {"i_0": _hom(I, U0, i_0)}
    for l in range(1, k + 1):
        matrices[f"c0_{l}"] = _hom(values[f"U0,{l}"], U0, _need(c0, l, f"c0 for l={l}"))
        matrices[f"c{l}"] = _hom(values[f"U0,{l}"], U0, _need(cl, l, f"c_l for l={l}"))
    F = CoeffSystem.from_matrices(cat, values, matrices)
    edges = [EdgeLabel("v0", "v0", f"h^{l}", f"U0,{l}", f"c0_{l}", f"c{l}") for l in range(1, k + 1)]
    edges.append(EdgeLabel("v0", "b", "e", "I", "i_0", cat.identity("I")))
    base = RecipeInstance(F, (Vertex("v0", "U0"), Vertex("b", "I")), tuple(edges))
    mu = [l for l in range(1, k + 1)] + [0]
    inst = CentralExtInstance.reduced(base, n, mu)
    inst.validate()
    return inst, gl_tilde_map(inst)


def gl_tilde_map(inst: CentralExtInstance) -> AbHom:
    """Sum over loop labels of ``F(c_l) - F(c_0)`` into F(U0)."""
    base = inst.base
    F = base.coefficients
    loops = [e for e in base.edges if e.v == e.w == "v0"]
    sources = [F.value(e.intersection) for e in loops]
    U0 = F.value("U0")
    blocks = {(0, k): F.map(e.conjugation) - F.map(e.inclusion) for k, e in enumerate(loops)}
    return block_hom(direct_sum(sources)[0], U0, sources, [U0], blocks)


def gl_bar_map(inst: CentralExtInstance) -> AbHom:
    """d-bar: the gamma map, with the identity on the Iwahori summand."""
    return build_gamma(inst)


def k0_gl(inst: CentralExtInstance, d_tilde: AbHom) -> FgAbGroup:
    """coker(d-tilde), checked against coker(d-bar) and coker(delta + epsilon)."""
    reduced = cokernel(d_tilde)[0]
    full = k0_central(inst)
    if not is_isomorphic(reduced, full):
        raise CrossCheckError(f"coker(d-tilde) = {reduced} but coker(d-bar) = {full}")
    return reduced


def skeleton_instance(family: str, n: int, rank: int = 1):
    """Instance of the given shape with ``Z^rank`` everywhere and identity matrices."""
    A = FgAbGroup.free(rank)
    one = IntMatrix.identity(rank)
    if family == "sl":
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        return sl_instance(n, [A] * n, {p: A for p in pairs},
                           {(i, j, k): one for i, j in pairs for k in (i, j)})
    k = n // 2
    caps = {l: A for l in range(1, k + 1)}
    ones = {l: one for l in range(1, k + 1)}
    if family == "pgl":
        return pgl_instance(n, U0=A, HI=A, I=A, caps=caps, i_H=one, i_0=one, c0=ones, cl=ones)
    if family == "gl":
        return gl_instance(n, U0=A, I=A, caps=caps, i_0=one, c0=ones, cl=ones)[0]
    raise InstanceError(f"unknown family {family!r}")
