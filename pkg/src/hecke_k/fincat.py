"""Finite index categories, coefficient systems, pushdown and colimits.

A category is given by complete finite data: objects, morphisms (with
identities), and a composition table keyed by ``(g, f)`` for ``g o f`` where
``f: x -> y`` and ``g: y -> z``. These categories stand in for the finite
pieces of orbit and subgroup categories that a model actually touches.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (CategoryError, ConditionSubError, DanglingReferenceError,
                     FunctorialityError)
from .exactla import AbHom, FgAbGroup, IntMatrix, block_hom, cokernel, direct_sum

__all__ = [
    "Morphism",
    "FinCategory",
    "CatFunctor",
    "CoeffSystem",
    "Report",
    "validate_category",
    "validate_functor",
    "validate_cat_functor",
    "pushdown",
    "colimit",
    "colimit_map",
]


@dataclass(frozen=True)
class Report:
    """Outcome of a validation; ``code`` and ``message`` locate the first failure."""

    ok: bool
    code: str = ""
    message: str = ""

    def __bool__(self):
        return self.ok

    @classmethod
    def passed(cls) -> "Report":
        return cls(True)

    @classmethod
    def failed(cls, code: str, message: str) -> "Report":
        return cls(False, code, message)

    def __str__(self):
        return "ok" if self.ok else f"{self.code}: {self.message}"


@dataclass(frozen=True)
class Morphism:
    id: str
    source: str
    target: str
    label: str = ""


def identity_id(obj: str) -> str:
    return f"id:{obj}"


@dataclass(frozen=True, eq=False)
class FinCategory:
    objects: tuple
    morphisms: tuple
    identities: Mapping[str, str]
    composition: Mapping[tuple, str]
    central: frozenset = frozenset()

    @classmethod
    def build(cls, objects: Sequence[str], morphisms: Iterable = (),
              composition: Mapping[tuple, str] = None, central: Iterable[str] = ()) -> "FinCategory":
        """Category from non-identity data; identities and unit laws are added.

        ``morphisms`` holds Morphism values or ``(id, source, target)`` tuples.
        ``composition`` only needs the non-identity composable pairs.
        """
        objects = tuple(objects)
        mors = [identity_mor(o) for o in objects]
        for m in morphisms:
            mors.append(m if isinstance(m, Morphism) else Morphism(*m))
        ids = {o: identity_id(o) for o in objects}
        comp = dict(composition or {})
        for m in mors:
            comp[(ids.get(m.target, "?"), m.id)] = m.id
            comp[(m.id, ids.get(m.source, "?"))] = m.id
        return cls(objects, tuple(mors), ids, comp, frozenset(central))

    @classmethod
    def trivial(cls, obj: str = "pt") -> "FinCategory":
        return cls.build([obj])

    @classmethod
    def poset(cls, objects: Sequence[str], relations: Iterable[tuple]) -> "FinCategory":
        """Poset category from pairs ``(a, b)`` meaning a <= b; arrows run a -> b.

        The transitive closure is taken; morphism ids are ``"a>b"``.
        """
        objects = tuple(objects)
        above = {o: set() for o in objects}
        for a, b in relations:
            if a != b:
                above[a].add(b)
        changed = True
        while changed:
            changed = False
            for a in objects:
                extra = set().union(*(above[b] for b in above[a])) - above[a] - {a}
                if extra:
                    above[a] |= extra
                    changed = True
        mors = [Morphism(f"{a}>{b}", a, b) for a in objects for b in objects if b in above[a]]
        comp = {}
        for f in mors:
            for g in mors:
                if g.source == f.target:
                    comp[(g.id, f.id)] = f"{f.source}>{g.target}"
        return cls.build(objects, mors, comp)

    # -- queries ------------------------------------------------------
    @property
    def _by_id(self) -> dict:
        d = self.__dict__.get("_by_id_cache")
        if d is None:
            d = {m.id: m for m in self.morphisms}
            object.__setattr__(self, "_by_id_cache", d)
        return d

    def morphism(self, mid: str) -> Morphism:
        try:
            return self._by_id[mid]
        except KeyError:
            raise DanglingReferenceError(f"unknown morphism {mid!r}") from None

    def has_morphism(self, mid: str) -> bool:
        return mid in self._by_id

    def identity(self, obj: str) -> str:
        try:
            return self.identities[obj]
        except KeyError:
            raise DanglingReferenceError(f"unknown object {obj!r}") from None

    def compose(self, g: str, f: str) -> str:
        """Id of ``g o f``."""
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise CategoryError(f"composite {g} o {f} missing from the table") from None

    def non_identity_morphisms(self) -> list:
        ids = set(self.identities.values())
        return [m for m in self.morphisms if m.id not in ids]

    def hom(self, x: str, y: str) -> list:
        return [m for m in self.morphisms if m.source == x and m.target == y]

    def restrict(self, objects: Iterable[str]) -> "FinCategory":
        """Full subcategory on ``objects`` (kept in this category's order)."""
        keep = set(objects)
        for o in keep:
            self.identity(o)
        objs = tuple(o for o in self.objects if o in keep)
        mors = tuple(m for m in self.morphisms if m.source in keep and m.target in keep)
        mids = {m.id for m in mors}
        comp = {k: v for k, v in self.composition.items() if k[0] in mids and k[1] in mids}
        return FinCategory(objs, mors, {o: self.identities[o] for o in objs}, comp,
                           frozenset(c for c in self.central if c in mids))

    def __eq__(self, other):
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (self.objects == other.objects and self.morphisms == other.morphisms
                and dict(self.identities) == dict(other.identities)
                and dict(self.composition) == dict(other.composition)
                and self.central == other.central)

    __hash__ = None


def identity_mor(obj: str) -> Morphism:
    return Morphism(identity_id(obj), obj, obj, "id")


def validate_category(c: FinCategory) -> Report:
    """Exhaustive check of the category axioms on the finite data."""
    if len(set(c.objects)) != len(c.objects):
        return Report.failed("FUNCTORIALITY", "duplicate object labels")
    by_id = {}
    for m in c.morphisms:
        if m.id in by_id:
            return Report.failed("FUNCTORIALITY", f"duplicate morphism id {m.id!r}")
        if m.source not in c.objects or m.target not in c.objects:
            return Report.failed("REFERENCE", f"morphism {m.id!r} has an unknown endpoint")
        by_id[m.id] = m
    for o in c.objects:
        i = c.identities.get(o)
        if i is None or i not in by_id:
            return Report.failed("FUNCTORIALITY", f"object {o!r} has no identity morphism")
        if (by_id[i].source, by_id[i].target) != (o, o):
            return Report.failed("FUNCTORIALITY", f"identity of {o!r} has wrong endpoints")
    for c_id in c.central:
        if c_id not in by_id:
            return Report.failed("REFERENCE", f"central morphism {c_id!r} is unknown")
        m = by_id[c_id]
        if m.source != m.target:
            return Report.failed("FUNCTORIALITY", f"central morphism {c_id!r} is not an endomorphism")
    for (g, f), h in c.composition.items():
        if g not in by_id or f not in by_id or h not in by_id:
            return Report.failed("REFERENCE", f"composition entry {g} o {f} = {h} is dangling")
        if by_id[f].target != by_id[g].source:
            return Report.failed("FUNCTORIALITY", f"composition entry {g} o {f} is not composable")
        if (by_id[h].source, by_id[h].target) != (by_id[f].source, by_id[g].target):
            return Report.failed(
                "FUNCTORIALITY",
                f"{g} o {f} = {h} has endpoints {by_id[h].source}->{by_id[h].target}, "
                f"expected {by_id[f].source}->{by_id[g].target}")
    out_of = defaultdict(list)
    for m in c.morphisms:
        out_of[m.source].append(m)
    for f in c.morphisms:
        for g in out_of[f.target]:
            if (g.id, f.id) not in c.composition:
                return Report.failed("FUNCTORIALITY", f"composable pair {g.id} o {f.id} missing")
    for m in c.morphisms:
        if c.composition[(c.identities[m.target], m.id)] != m.id or \
                c.composition[(m.id, c.identities[m.source])] != m.id:
            return Report.failed("FUNCTORIALITY", f"unit law fails for {m.id!r}")
    for f in c.morphisms:
        for g in out_of[f.target]:
            gf = c.composition[(g.id, f.id)]
            for h in out_of[g.target]:
                if c.composition[(h.id, gf)] != c.composition[(c.composition[(h.id, g.id)], f.id)]:
                    return Report.failed(
                        "FUNCTORIALITY", f"associativity fails for {h.id}, {g.id}, {f.id}")
    return Report.passed()


@dataclass(frozen=True, eq=False)
class CatFunctor:
    source: FinCategory
    target: FinCategory
    object_map: Mapping[str, str]
    morphism_map: Mapping[str, str]


def validate_cat_functor(P: CatFunctor) -> Report:
    for cat in (P.source, P.target):
        r = validate_category(cat)
        if not r:
            return r
    for o in P.source.objects:
        if P.object_map.get(o) not in P.target.objects:
            return Report.failed("REFERENCE", f"object {o!r} has no image")
    for m in P.source.morphisms:
        im = P.morphism_map.get(m.id)
        if im is None or not P.target.has_morphism(im):
            return Report.failed("REFERENCE", f"morphism {m.id!r} has no image")
        t = P.target.morphism(im)
        if (t.source, t.target) != (P.object_map[m.source], P.object_map[m.target]):
            return Report.failed("FUNCTORIALITY", f"image of {m.id!r} has wrong endpoints")
    for o in P.source.objects:
        if P.morphism_map[P.source.identities[o]] != P.target.identities[P.object_map[o]]:
            return Report.failed("FUNCTORIALITY", f"identity of {o!r} not preserved")
    for (g, f), h in P.source.composition.items():
        if P.target.composition.get((P.morphism_map[g], P.morphism_map[f])) != P.morphism_map[h]:
            return Report.failed("FUNCTORIALITY", f"composite {g} o {f} not preserved")
    return Report.passed()


@dataclass(frozen=True, eq=False)
class CoeffSystem:
    """Covariant functor from a FinCategory to presented abelian groups."""

    category: FinCategory
    values: Mapping[str, FgAbGroup]
    maps: Mapping[str, AbHom]

    @classmethod
    def from_matrices(cls, category: FinCategory, values: Mapping[str, FgAbGroup],
                      matrices: Mapping[str, object]) -> "CoeffSystem":
        """Identities are filled in; other morphisms need a matrix each."""
        maps = {}
        for m in category.morphisms:
            if m.id in matrices:
                M = matrices[m.id]
                maps[m.id] = M if isinstance(M, AbHom) else AbHom(
                    _lookup(values, m.source), _lookup(values, m.target), M)
            elif m.id == category.identities.get(m.source):
                maps[m.id] = AbHom.identity(_lookup(values, m.source))
            else:
                raise DanglingReferenceError(f"no matrix for morphism {m.id!r}")
        return cls(category, dict(values), maps)

    @classmethod
    def constant(cls, category: FinCategory, A: FgAbGroup) -> "CoeffSystem":
        return cls(category, {o: A for o in category.objects},
                   {m.id: AbHom.identity(A) for m in category.morphisms})

    @classmethod
    def zero(cls, category: FinCategory) -> "CoeffSystem":
        return cls.constant(category, FgAbGroup.trivial())

    def value(self, obj: str) -> FgAbGroup:
        return _lookup(self.values, obj)

    def map(self, mid: str) -> AbHom:
        return _lookup(self.maps, mid)

    def restrict(self, objects: Iterable[str]) -> "CoeffSystem":
        sub = self.category.restrict(objects)
        return CoeffSystem(sub, {o: self.values[o] for o in sub.objects},
                           {m.id: self.maps[m.id] for m in sub.morphisms})

    def is_zero(self) -> bool:
        return all(v.is_trivial() for v in self.values.values())


def _lookup(table, key):
    try:
        return table[key]
    except KeyError:
        raise DanglingReferenceError(f"missing entry for {key!r}") from None


def validate_functor(F: CoeffSystem) -> Report:
    """Functoriality plus identity action of the flagged central morphisms."""
    c = F.category
    for o in c.objects:
        if o not in F.values:
            return Report.failed("REFERENCE", f"no value for object {o!r}")
    for m in c.morphisms:
        h = F.maps.get(m.id)
        if h is None:
            return Report.failed("REFERENCE", f"no map for morphism {m.id!r}")
        if h.source != F.values[m.source] or h.target != F.values[m.target]:
            return Report.failed("FUNCTORIALITY",
                                 f"map for {m.id!r} has the wrong source or target group")
    for o in c.objects:
        if not F.maps[c.identities[o]].is_identity():
            return Report.failed("FUNCTORIALITY", f"identity of {o!r} is not sent to the identity")
    for (g, f), h in c.composition.items():
        if not F.maps[h].equals(F.maps[g].compose(F.maps[f])):
            return Report.failed("FUNCTORIALITY", f"F({g} o {f}) != F({g}) F({f})")
    for mid in sorted(c.central):
        if not F.maps[mid].is_identity():
            return Report.failed(
                "CONDITION_SUB", f"central morphism {mid!r} does not act by the identity")
    return Report.passed()


def _require(report: Report, exc=FunctorialityError):
    if not report:
        cls = {"CONDITION_SUB": ConditionSubError, "REFERENCE": DanglingReferenceError}.get(
            report.code, exc)
        raise cls(report.message)


def pushdown(F: CoeffSystem, P: CatFunctor) -> CoeffSystem:
    """The unique N over ``P.target`` with ``N o P == F``.

    Morphisms that P identifies must carry equal maps; for the projection from
    an orbit-type to a subgroup-type category this is the centralizer
    condition.
    """
    _require(validate_category(F.category), CategoryError)
    _require(validate_functor(F))
    if P.source != F.category:
        raise FunctorialityError("P does not start at the category of F")
    _require(validate_cat_functor(P), CategoryError)
    values, maps, witness = {}, {}, {}
    for o in P.source.objects:
        y = P.object_map[o]
        if y in values and values[y] != F.values[o]:
            raise ConditionSubError(f"objects over {y!r} carry different groups")
        values[y] = F.values[o]
    for m in P.source.morphisms:
        t = P.morphism_map[m.id]
        if t in maps:
            if not maps[t].equals(F.maps[m.id]):
                raise ConditionSubError(
                    f"morphisms {witness[t]!r} and {m.id!r} both map to {t!r} "
                    f"but induce different homomorphisms")
        else:
            maps[t] = F.maps[m.id]
            witness[t] = m.id
    missing = [o for o in P.target.objects if o not in values]
    missing += [m.id for m in P.target.morphisms if m.id not in maps]
    if missing:
        raise ConditionSubError(f"P is not surjective; nothing over {missing[0]!r}")
    N = CoeffSystem(P.target, values, maps)
    _require(validate_functor(N))
    return N


def colimit_map(F: CoeffSystem) -> AbHom:
    """The relation map whose cokernel presents the colimit.

    Source: one copy of F(x) per non-identity morphism f: x -> y. Target: the
    sum of all F(x). The f-block is ``inc_y F(f) - inc_x``.
    """
    c = F.category
    objs = list(c.objects)
    mors = c.non_identity_morphisms()
    tgt_groups = [F.values[o] for o in objs]
    src_groups = [F.values[m.source] for m in mors]
    T = direct_sum(tgt_groups)[0]
    S = direct_sum(src_groups)[0]
    index = {o: i for i, o in enumerate(objs)}
    blocks = {}
    for k, m in enumerate(mors):
        x, y = index[m.source], index[m.target]
        blocks[(y, k)] = F.maps[m.id].matrix
        neg = -IntMatrix.identity(F.values[m.source].generators)
        blocks[(x, k)] = blocks[(x, k)] + neg if (x, k) in blocks else neg
    return block_hom(S, T, src_groups, tgt_groups, blocks)


def colimit(F: CoeffSystem) -> FgAbGroup:
    """Colimit of F, presented as a coequalizer cokernel."""
    _require(validate_category(F.category), CategoryError)
    _require(validate_functor(F))
    return cokernel(colimit_map(F))[0]
