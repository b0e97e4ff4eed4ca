"""Equivariant cell structures and Bredon homology.

Cells are orbit cells ``G/H x D^n``; each carries a stabilizer object of the
index category. Boundary data is stored in covariant form: the entry for an
n-cell i and an (n-1)-cell j is a formal Z-combination of morphisms
``stabilizer(i) -> stabilizer(j)``. Applying a covariant coefficient system
then gives an ordinary chain complex of presented abelian groups.

For cells of dimension 2 and higher the signs are whatever the caller
supplies; only ``d o d == 0`` is enforced. The simplicial helper uses the
usual alternating signs, removing vertex k with sign ``(-1)^k``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Mapping, Optional

from .errors import BoundaryError, DanglingReferenceError
from .exactla import AbHom, FgAbGroup, block_hom, cokernel, direct_sum, homology_at
from .fincat import CoeffSystem, FinCategory

__all__ = [
    "Cell",
    "CellOrbitComplex",
    "ChainComplex",
    "Edge",
    "OneSkeletonData",
    "apply_coefficients",
    "bredon_homology",
    "first_differential",
    "simplicial_complex",
    "close_simplices",
]


@dataclass(frozen=True)
class Cell:
    name: str
    stabilizer: str


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """``groups[n]`` in degree n; ``differentials[n]: groups[n] -> groups[n-1]`` for n >= 1."""

    groups: tuple
    differentials: Mapping[int, AbHom]

    @property
    def top(self) -> int:
        return len(self.groups) - 1

    def group(self, n: int) -> FgAbGroup:
        return self.groups[n] if 0 <= n <= self.top else FgAbGroup.trivial()

    def d(self, n: int) -> AbHom:
        """Differential out of degree n (zero map at the ends)."""
        if 1 <= n <= self.top:
            return self.differentials[n]
        return AbHom.zero(self.group(n), self.group(n - 1))

    def homology(self, n: int) -> FgAbGroup:
        if n < 0 or n > self.top:
            return FgAbGroup.trivial()
        return homology_at(self.d(n), self.d(n + 1))

    def check_square_zero(self):
        for n in range(2, self.top + 1):
            if not self.d(n - 1).compose(self.d(n)).is_zero():
                raise BoundaryError(f"d_{n - 1} o d_{n} is not zero")


@dataclass(frozen=True, eq=False)
class CellOrbitComplex:
    """Orbit cells per dimension with covariant boundary formal sums.

    ``boundary[n][(i, j)]`` is a tuple of ``(coefficient, morphism_id)`` for
    the i-th n-cell and the j-th (n-1)-cell.
    """

    category: FinCategory
    cells: tuple
    boundary: Mapping[int, Mapping[tuple, tuple]]

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def cells_in(self, n: int) -> tuple:
        return self.cells[n] if 0 <= n < len(self.cells) else ()

    def stabilizers(self) -> set:
        return {c.stabilizer for dim in self.cells for c in dim}

    def validate(self):
        """Check references and ``d o d == 0`` in the free module over the category.

        Vanishing there is equivalent to vanishing after applying every
        coefficient system.
        """
        cat = self.category
        for dim in self.cells:
            for c in dim:
                cat.identity(c.stabilizer)
        for n, entries in self.boundary.items():
            if not 1 <= n <= self.dimension:
                if entries:
                    raise BoundaryError(f"boundary data in dimension {n} without cells")
                continue
            for (i, j), terms in entries.items():
                if not (0 <= i < len(self.cells[n]) and 0 <= j < len(self.cells[n - 1])):
                    raise DanglingReferenceError(f"boundary entry {(i, j)} in dimension {n} "
                                                 f"refers to a missing cell")
                src, tgt = self.cells[n][i].stabilizer, self.cells[n - 1][j].stabilizer
                for _, mid in terms:
                    m = cat.morphism(mid)
                    if (m.source, m.target) != (src, tgt):
                        raise BoundaryError(
                            f"morphism {mid!r} in boundary of {self.cells[n][i].name!r} "
                            f"goes {m.source}->{m.target}, expected {src}->{tgt}")
        for n in range(2, self.dimension + 1):
            upper, lower = self.boundary.get(n, {}), self.boundary.get(n - 1, {})
            by_face = {}
            for (j, k), terms in lower.items():
                by_face.setdefault(j, []).append((k, terms))
            for i in range(len(self.cells[n])):
                total = Counter()
                for (ii, j), terms in upper.items():
                    if ii != i:
                        continue
                    for k, terms2 in by_face.get(j, ()):
                        for a, f in terms:
                            for b, g in terms2:
                                total[(k, cat.compose(g, f))] += a * b
                bad = [key for key, v in total.items() if v]
                if bad:
                    k, mid = min(bad)
                    raise BoundaryError(
                        f"d o d != 0 at cell {self.cells[n][i].name!r} -> "
                        f"{self.cells[n - 2][k].name!r} (morphism {mid!r})")

    def truncate(self, n: int) -> "CellOrbitComplex":
        """The n-skeleton."""
        return CellOrbitComplex(self.category, self.cells[:n + 1],
                                {k: v for k, v in self.boundary.items() if k <= n})


def apply_coefficients(X: CellOrbitComplex, F: CoeffSystem) -> ChainComplex:
    """Chain complex with ``C_n = sum over n-cells of F(stabilizer)``."""
    X.validate()
    if F.category is not X.category and F.category != X.category:
        missing = X.stabilizers() - set(F.category.objects)
        if missing:
            raise DanglingReferenceError(f"stabilizer {sorted(missing)[0]!r} not in the "
                                         f"coefficient category")
    groups, summands = [], []
    for dim in X.cells:
        parts = [F.value(c.stabilizer) for c in dim]
        summands.append(parts)
        groups.append(direct_sum(parts)[0])
    diffs = {}
    for n in range(1, X.dimension + 1):
        blocks = {}
        for (i, j), terms in X.boundary.get(n, {}).items():
            M = None
            for a, mid in terms:
                term = F.map(mid).matrix.scale(a)
                M = term if M is None else M + term
            if M is not None:
                blocks[(j, i)] = M
        diffs[n] = block_hom(groups[n], groups[n - 1], summands[n], summands[n - 1], blocks)
    C = ChainComplex(tuple(groups), diffs)
    C.check_square_zero()
    return C


def bredon_homology(X: CellOrbitComplex, F: CoeffSystem, n: int) -> FgAbGroup:
    if n < 0 or n > X.dimension:
        return FgAbGroup.trivial()
    return apply_coefficients(X, F).homology(n)


# ---------------------------------------------------------------------------
# Dimension one


@dataclass(frozen=True)
class Edge:
    """One edge orbit with endpoints ``minus``/``plus`` (vertex indices)."""

    name: str
    stabilizer: str
    minus: int
    plus: int
    minus_map: str
    plus_map: str


@dataclass(frozen=True, eq=False)
class OneSkeletonData:
    category: FinCategory
    vertices: tuple
    edges: tuple

    def validate(self):
        cat = self.category
        for v in self.vertices:
            cat.identity(v.stabilizer)
        for e in self.edges:
            for idx, mid in ((e.minus, e.minus_map), (e.plus, e.plus_map)):
                if not 0 <= idx < len(self.vertices):
                    raise DanglingReferenceError(f"edge {e.name!r} has a missing endpoint")
                m = cat.morphism(mid)
                want = (e.stabilizer, self.vertices[idx].stabilizer)
                if (m.source, m.target) != want:
                    raise BoundaryError(f"edge {e.name!r}: morphism {mid!r} goes "
                                        f"{m.source}->{m.target}, expected {want[0]}->{want[1]}")

    def to_complex(self) -> CellOrbitComplex:
        """The equivalent 1-dimensional CellOrbitComplex."""
        bd = {}
        for i, e in enumerate(self.edges):
            if e.minus != e.plus:
                bd[(i, e.minus)] = ((-1, e.minus_map),)
                bd[(i, e.plus)] = ((1, e.plus_map),)
            else:
                bd[(i, e.minus)] = ((1, e.plus_map), (-1, e.minus_map))
        cells = (tuple(self.vertices), tuple(Cell(e.name, e.stabilizer) for e in self.edges))
        return CellOrbitComplex(self.category, cells, {1: bd})


def first_differential(data: OneSkeletonData, F: CoeffSystem) -> AbHom:
    """Block map ``sum_i F(U_i) -> sum_j F(V_j)``.

    Block (j, i) is ``-F(m_-)`` / ``+F(m_+)`` at the two distinct endpoints,
    ``F(m_+) - F(m_-)`` when both endpoints coincide, and zero elsewhere.
    """
    data.validate()
    vsum = [F.value(v.stabilizer) for v in data.vertices]
    esum = [F.value(e.stabilizer) for e in data.edges]
    blocks = {}
    for i, e in enumerate(data.edges):
        plus, minus = F.map(e.plus_map), F.map(e.minus_map)
        if e.minus != e.plus:
            blocks[(e.minus, i)] = -minus
            blocks[(e.plus, i)] = plus
        else:
            blocks[(e.minus, i)] = plus - minus
    return block_hom(direct_sum(esum)[0], direct_sum(vsum)[0], esum, vsum, blocks)


def sh0_from_first_differential(data: OneSkeletonData, F: CoeffSystem) -> FgAbGroup:
    return cokernel(first_differential(data, F))[0]


# ---------------------------------------------------------------------------
# Simplicial input


def close_simplices(simplices) -> list:
    """Downward closure, sorted by dimension then lexicographically."""
    out = set()
    for s in simplices:
        s = tuple(sorted(s))
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return sorted(out, key=lambda s: (len(s), s))


def face_name(simplex) -> str:
    return ",".join(str(v) for v in simplex)


def simplicial_complex(simplices, category: Optional[FinCategory] = None,
                       stabilizer: Optional[Callable] = None,
                       face_map: Optional[Callable] = None) -> CellOrbitComplex:
    """CellOrbitComplex of an ordered simplicial complex.

    ``stabilizer(simplex)`` gives the object for each simplex and
    ``face_map(simplex, face)`` the morphism from its stabilizer to the
    stabilizer of a codimension-one face. Without them the trivial category
    and identity morphisms are used.
    """
    faces = close_simplices(simplices)
    if category is None:
        category = FinCategory.trivial()
    if stabilizer is None:
        obj = category.objects[0]
        stabilizer = lambda s: obj
    if face_map is None:
        face_map = lambda s, t: category.identity(stabilizer(s))
    dim = max((len(s) for s in faces), default=0) - 1
    by_dim = [[s for s in faces if len(s) == n + 1] for n in range(dim + 1)]
    index = [{s: i for i, s in enumerate(level)} for level in by_dim]
    cells = tuple(tuple(Cell(face_name(s), stabilizer(s)) for s in level) for level in by_dim)
    boundary = {}
    for n in range(1, dim + 1):
        bd = {}
        for i, s in enumerate(by_dim[n]):
            for k in range(len(s)):
                t = s[:k] + s[k + 1:]
                bd[(i, index[n - 1][t])] = (((-1) ** k, face_map(s, t)),)
        boundary[n] = bd
    return CellOrbitComplex(category, cells, boundary)
