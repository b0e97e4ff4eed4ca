"""Face-poset chain models, exact-sequence checks and the degree-zero tail.

A face-poset model puts one object on each face of an ordered simplicial
complex and a morphism from each face to each of its codimension-one faces,
so coefficient maps run from a face to its faces, the way stabilizers of
larger faces include into stabilizers of smaller ones. The chain complex has
the sum of ``F(face)`` over p-faces in degree p with the usual alternating
signs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .bredon import CellOrbitComplex, ChainComplex, apply_coefficients, close_simplices, face_name, simplicial_complex
from .errors import (BoundaryError, DanglingReferenceError, FunctorialityError, InstanceError,
                     NonZeroCompositeError)
from .exactla import AbHom, FgAbGroup, block_hom, cokernel, direct_sum, homology_at
from .fincat import CoeffSystem, FinCategory, validate_category, validate_functor

__all__ = [
    "PosetChainModel",
    "face_poset_model",
    "face_poset_category",
    "simplex_model",
    "poset_chain_complex",
    "ExactSequenceInstance",
    "PositionReport",
    "check_exactness",
    "degree0_map",
    "solve_degree0",
    "mv_tail",
]


def _faces_of(s: tuple) -> list:
    return [s[:k] + s[k + 1:] for k in range(len(s))]


@dataclass(frozen=True, eq=False)
class PosetChainModel:
    """Faces of Δ, a stabilizer object per face and a morphism per codimension-one face.

    ``face_maps[(sigma, tau)]`` is the morphism ``stabilizer[sigma] ->
    stabilizer[tau]``. Along any two chains ``sigma > tau > rho`` the composed
    morphisms must agree.
    """

    faces: tuple
    stabilizer: Mapping[tuple, str]
    face_maps: Mapping[tuple, str]
    coefficients: CoeffSystem

    @property
    def category(self) -> FinCategory:
        return self.coefficients.category

    @property
    def dimension(self) -> int:
        return max((len(s) for s in self.faces), default=0) - 1

    def validate(self):
        cat = self.category
        for report in (validate_category(cat), validate_functor(self.coefficients)):
            if not report:
                raise FunctorialityError(str(report), code=report.code)
        faces = set(self.faces)
        for s in self.faces:
            if s not in self.stabilizer:
                raise DanglingReferenceError(f"face {face_name(s)!r} has no stabilizer")
            cat.identity(self.stabilizer[s])
            if len(s) > 1:
                for t in _faces_of(s):
                    if t not in faces:
                        raise InstanceError(f"face {face_name(t)!r} of {face_name(s)!r} is missing")
                    mid = self.face_maps.get((s, t))
                    if mid is None:
                        raise DanglingReferenceError(
                            f"no morphism for {face_name(s)!r} -> {face_name(t)!r}")
                    m = cat.morphism(mid)
                    if (m.source, m.target) != (self.stabilizer[s], self.stabilizer[t]):
                        raise BoundaryError(f"morphism {mid!r} does not go from the stabilizer of "
                                            f"{face_name(s)!r} to that of {face_name(t)!r}")
        for s in self.faces:
            if len(s) < 3:
                continue
            seen = {}
            for t in _faces_of(s):
                for r in _faces_of(t):
                    comp = cat.compose(self.face_maps[(t, r)], self.face_maps[(s, t)])
                    if seen.setdefault(r, comp) != comp:
                        raise FunctorialityError(
                            f"chains from {face_name(s)!r} to {face_name(r)!r} compose differently")

    def to_complex(self) -> CellOrbitComplex:
        return simplicial_complex(self.faces, self.category,
                                  stabilizer=lambda s: self.stabilizer[s],
                                  face_map=lambda s, t: self.face_maps[(s, t)])


def face_poset_category(faces: Sequence[tuple]) -> FinCategory:
    """Objects are face names; one arrow ``sigma -> tau`` whenever tau is a proper face."""
    names = [face_name(s) for s in faces]
    rel = []
    for s in faces:
        for t in faces:
            if len(t) < len(s) and set(t) <= set(s):
                rel.append((face_name(s), face_name(t)))
    return FinCategory.poset(names, rel)


def face_poset_model(simplices, values: Optional[Mapping] = None,
                     maps: Optional[Mapping] = None, constant: Optional[FgAbGroup] = None) -> PosetChainModel:
    """Model on the face poset of the closure of ``simplices``.

    Give either ``constant`` (identity maps everywhere) or ``values[face]``
    with ``maps[(face, codim-one face)]`` as matrices. Maps between faces of
    larger codimension are composed along a chain and must not depend on it.
    """
    faces = tuple(close_simplices(simplices))
    cat = face_poset_category(faces)
    if constant is not None:
        F = CoeffSystem.constant(cat, constant)
    else:
        if values is None:
            raise InstanceError("give coefficient values or a constant group")
        vals = {}
        for s in faces:
            key = s if s in values else face_name(s)
            if key not in values:
                raise DanglingReferenceError(f"no coefficient group for face {face_name(s)!r}")
            vals[face_name(s)] = values[key]
        step = {}
        for s in faces:
            for t in (_faces_of(s) if len(s) > 1 else ()):
                M = (maps or {}).get((s, t))
                if M is None:
                    raise DanglingReferenceError(
                        f"no coefficient map for {face_name(s)!r} -> {face_name(t)!r}")
                step[(s, t)] = M if isinstance(M, AbHom) else AbHom(vals[face_name(s)], vals[face_name(t)], M)
        matrices = {}
        # longer relations by composing along chains, checked for independence
        for s in sorted(faces, key=len):
            reach = {}
            for t in (_faces_of(s) if len(s) > 1 else ()):
                reach[t] = step[(s, t)]
                for r, h in _chain_maps(t, step).items():
                    g = h.compose(step[(s, t)])
                    if r in reach and not reach[r].equals(g):
                        raise FunctorialityError(
                            f"maps from {face_name(s)!r} to {face_name(r)!r} depend on the chain")
                    reach.setdefault(r, g)
            for r, h in reach.items():
                matrices[f"{face_name(s)}>{face_name(r)}"] = h
        F = CoeffSystem.from_matrices(cat, vals, matrices)
    stab = {s: face_name(s) for s in faces}
    fmaps = {(s, t): f"{face_name(s)}>{face_name(t)}" for s in faces if len(s) > 1 for t in _faces_of(s)}
    model = PosetChainModel(faces, stab, fmaps, F)
    model.validate()
    return model


def _chain_maps(t: tuple, step: Mapping) -> dict:
    out = {}
    for r in (_faces_of(t) if len(t) > 1 else ()):
        out.setdefault(r, step[(t, r)])
        for u, h in _chain_maps(r, step).items():
            out.setdefault(u, h.compose(step[(t, r)]))
    return out


def simplex_model(k: int, A: FgAbGroup) -> PosetChainModel:
    """The full k-simplex with constant coefficients A."""
    return face_poset_model([tuple(range(k + 1))], constant=A)


def poset_chain_complex(model: PosetChainModel) -> ChainComplex:
    model.validate()
    return apply_coefficients(model.to_complex(), model.coefficients)


# ---------------------------------------------------------------------------
# Exact sequences


@dataclass(frozen=True, eq=False)
class ExactSequenceInstance:
    """``groups[0] -> groups[1] -> ...`` with ``maps[i]: groups[i] -> groups[i+1]``.

    Put explicit trivial groups at the ends to test exactness there.
    """

    groups: tuple
    maps: tuple
    names: tuple = ()

    def validate(self):
        if len(self.maps) != len(self.groups) - 1:
            raise InstanceError("need exactly one map between consecutive groups")
        for i, h in enumerate(self.maps):
            if h.source != self.groups[i] or h.target != self.groups[i + 1]:
                raise InstanceError(f"map {i} has the wrong shape")
        for i in range(1, len(self.maps)):
            if not self.maps[i].compose(self.maps[i - 1]).is_zero():
                raise NonZeroCompositeError(f"composite of maps {i - 1} and {i} is not zero")

    def label(self, i: int) -> str:
        return self.names[i] if i < len(self.names) else str(i)


@dataclass(frozen=True)
class PositionReport:
    position: int
    label: str
    homology: FgAbGroup
    exact: bool

    def __str__(self):
        verdict = "exact" if self.exact else f"not exact (ker/im = {self.homology})"
        return f"at {self.label}: {verdict}"


def check_exactness(seq: ExactSequenceInstance) -> list:
    """One report per interior position: exact iff ker/im is trivial."""
    seq.validate()
    out = []
    for i in range(1, len(seq.groups) - 1):
        H = homology_at(seq.maps[i], seq.maps[i - 1])
        out.append(PositionReport(i, seq.label(i), H, H.is_trivial()))
    return out


# ---------------------------------------------------------------------------
# Degree-zero tail of the two-vertex square


def degree0_map(iwahori: FgAbGroup, u0: FgAbGroup, u1: FgAbGroup, to_u0, to_u1) -> AbHom:
    """``F(I) -> F(U0) + F(U1)``, ``x -> (-to_u0 x, to_u1 x)``."""
    a = to_u0 if isinstance(to_u0, AbHom) else AbHom(iwahori, u0, to_u0)
    b = to_u1 if isinstance(to_u1, AbHom) else AbHom(iwahori, u1, to_u1)
    if a.source != iwahori or b.source != iwahori:
        raise InstanceError("both maps must start at the Iwahori group")
    return block_hom(iwahori, direct_sum([u0, u1])[0], [iwahori], [u0, u1], {(0, 0): -a, (1, 0): b})


def solve_degree0(iwahori: FgAbGroup, u0: FgAbGroup, u1: FgAbGroup, to_u0, to_u1) -> FgAbGroup:
    """The group completing ``F(I) -> F(U0) + F(U1) -> ? -> 0``."""
    return cokernel(degree0_map(iwahori, u0, u1, to_u0, to_u1))[0]


def mv_tail(iwahori: FgAbGroup, u0: FgAbGroup, u1: FgAbGroup, to_u0, to_u1) -> ExactSequenceInstance:
    """``F(I) -> F(U0) + F(U1) -> Q -> 0`` with Q the cokernel."""
    d = degree0_map(iwahori, u0, u1, to_u0, to_u1)
    Q, proj = cokernel(d)
    return ExactSequenceInstance((d.source, d.target, Q, FgAbGroup.trivial()),
                                 (d, proj, AbHom.zero(Q, FgAbGroup.trivial())),
                                 ("F(I)", "F(U0)+F(U1)", "K0", "0"))
