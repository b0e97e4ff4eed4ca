"""E1 and E2 pages of the equivariant Atiyah-Hirzebruch spectral sequence.

Only the first two pages are computed. Higher differentials have no formula
available, so K-groups are assembled only for complexes of dimension at most
one, where the sequence degenerates at E2 for shape reasons. Even then the
output is the associated graded; extensions are not solved.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .bredon import CellOrbitComplex, ChainComplex, apply_coefficients, bredon_homology
from .errors import FunctorialityError, HeckeKError
from .exactla import AbHom, FgAbGroup, format_group, is_isomorphic
from .fincat import CoeffSystem, FinCategory, colimit

__all__ = [
    "GradedCoeffSystem",
    "SpectralPage",
    "e1_page",
    "e2_page",
    "edge_h0_check",
    "assemble_k_groups",
    "render_page",
]


@dataclass(frozen=True, eq=False)
class GradedCoeffSystem:
    """Coefficient systems ``F_q`` for q in a finite window, on one category."""

    category: FinCategory
    systems: Mapping[int, CoeffSystem]
    connective: bool = False

    def __post_init__(self):
        for q, F in self.systems.items():
            if F.category is not self.category and F.category != self.category:
                raise FunctorialityError(f"F_{q} lives on a different category")
            if self.connective and q < 0 and not F.is_zero():
                raise FunctorialityError(f"connective system has nonzero F_{q}")

    @property
    def window(self) -> Optional[tuple]:
        if not self.systems:
            return None
        return (min(self.systems), max(self.systems))

    def degrees(self) -> list:
        return sorted(self.systems)

    def at(self, q: int) -> CoeffSystem:
        F = self.systems.get(q)
        return F if F is not None else CoeffSystem.zero(self.category)


@dataclass(frozen=True, eq=False)
class SpectralPage:
    r: int
    entries: Mapping[tuple, FgAbGroup]
    p_max: int
    q_degrees: tuple
    differentials: Mapping[tuple, AbHom] = field(default_factory=dict)

    def __getitem__(self, pq) -> FgAbGroup:
        return self.entries.get(tuple(pq), FgAbGroup.trivial())

    def nonzero(self) -> list:
        return sorted(pq for pq, g in self.entries.items() if not g.is_trivial())


def _rows(X: CellOrbitComplex, G: GradedCoeffSystem) -> dict:
    return {q: apply_coefficients(X, G.at(q)) for q in G.degrees()}


def e1_page(X: CellOrbitComplex, G: GradedCoeffSystem) -> SpectralPage:
    """``E1_{p,q}`` is the sum of ``F_q`` over p-cells; d1 is the cellular differential."""
    entries, diffs = {}, {}
    for q, C in _rows(X, G).items():
        for p in range(X.dimension + 1):
            entries[(p, q)] = C.group(p)
            if p >= 1:
                diffs[(p, q)] = C.d(p)
    return SpectralPage(1, entries, X.dimension, tuple(G.degrees()), diffs)


def e2_page(X: CellOrbitComplex, G: GradedCoeffSystem) -> SpectralPage:
    """``E2_{p,q}`` is Bredon homology in degree p with coefficients F_q."""
    entries = {}
    for q, C in _rows(X, G).items():
        for p in range(X.dimension + 1):
            entries[(p, q)] = C.homology(p)
    return SpectralPage(2, entries, X.dimension, tuple(G.degrees()))


def e2_from_e1(page: SpectralPage) -> SpectralPage:
    """Homology of the rows of an E1 page."""
    if page.r != 1:
        raise ValueError("expected an E1 page")
    entries = {}
    for q in page.q_degrees:
        row = ChainComplex(tuple(page[(p, q)] for p in range(page.p_max + 1)),
                           {p: page.differentials[(p, q)] for p in range(1, page.p_max + 1)})
        for p in range(page.p_max + 1):
            entries[(p, q)] = row.homology(p)
    return SpectralPage(2, entries, page.p_max, page.q_degrees)


def edge_h0_check(X: CellOrbitComplex, F0: CoeffSystem) -> bool:
    """Compare H0 with the colimit over the isotropy objects.

    Whether the answer means anything depends on the caller's assertion that
    X models the classifying space on its isotropy set.
    """
    try:
        h0 = bredon_homology(X, F0, 0)
        col = colimit(F0.restrict(X.stabilizers()))
    except HeckeKError:
        return False
    return is_isomorphic(h0, col)


def assemble_k_groups(page: SpectralPage) -> list:
    """``[(n, (E2_{0,n}, E2_{1,n-1})), ...]`` for complexes of dimension <= 1.

    Degrees run over the window extended by one on each side, which covers
    every n with a possibly nonzero piece plus n = q_min - 1.
    """
    if page.r != 2:
        raise ValueError("assembly needs the E2 page")
    if page.p_max >= 2:
        raise HeckeKError("K-group assembly needs a complex of dimension at most 1; "
                          "higher differentials and extensions are unavailable",
                          code="DIMENSION")
    if not page.q_degrees:
        return []
    lo, hi = min(page.q_degrees), max(page.q_degrees)
    return [(n, (page[(0, n)], page[(1, n - 1)])) for n in range(lo - 1, hi + 2)]


def render_page(page: SpectralPage) -> str:
    """Text grid, q descending down the rows and p increasing across."""
    ps = list(range(page.p_max + 1))
    qs = sorted(page.q_degrees, reverse=True)
    cells = {(p, q): format_group(page[(p, q)]) for p in ps for q in qs}
    width = max([len(s) for s in cells.values()] + [3])
    qw = max([len(f"q={q}") for q in qs] + [3])
    lines = [f"E{page.r}"]
    for q in qs:
        lines.append(f"{'q=' + str(q):>{qw}} | " + "  ".join(f"{cells[(p, q)]:>{width}}" for p in ps))
    lines.append(" " * qw + "-+-" + "--".join("-" * width for _ in ps))
    lines.append(" " * qw + "   " + "  ".join(f"{'p=' + str(p):>{width}}" for p in ps))
    return "\n".join(lines)
