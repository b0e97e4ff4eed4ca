"""Exact integer linear algebra and finitely generated abelian groups.

Everything here works with Python integers, so there is no overflow at any
magnitude. Groups are presented as cokernels of integer matrices::

    G = Z^g / (column span of R)        R is a g x r matrix

and homomorphisms as integer matrices on generators. All values are
immutable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from numbers import Integral
from typing import Iterable, Optional, Sequence

from .errors import DimensionError, IllDefinedMapError, NonZeroCompositeError

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "FgAbGroup",
    "AbHom",
    "smith_normal_form",
    "lattice_solve",
    "kernel_basis",
    "image_basis",
    "cokernel",
    "kernel",
    "homology_at",
    "direct_sum",
    "is_isomorphic",
    "format_group",
    "power",
    "block_hom",
    "pi_shift",
    "augmentation",
    "hom_power",
]


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError(f"negative shape {self.rows}x{self.cols}")
        entries = tuple(_as_int(x) for x in self.entries)
        if len(entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(entries)} entries for a {self.rows}x{self.cols} matrix")
        object.__setattr__(self, "entries", entries)

    # -- construction -------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise DimensionError(f"column of length {len(c)}, expected {rows}")
        return cls(rows, len(columns),
                   tuple(columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: Optional[int] = None,
                 cols: Optional[int] = None) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = v
        return cls.from_rows(out, cols)

    @classmethod
    def hstack(cls, blocks: Sequence["IntMatrix"], rows: Optional[int] = None) -> "IntMatrix":
        if not blocks:
            return cls.zeros(rows or 0, 0)
        r = blocks[0].rows
        if any(b.rows != r for b in blocks):
            raise DimensionError("hstack of blocks with different row counts")
        out = [[x for b in blocks for x in b.row(i)] for i in range(r)]
        return cls.from_rows(out, sum(b.cols for b in blocks))

    @classmethod
    def vstack(cls, blocks: Sequence["IntMatrix"], cols: Optional[int] = None) -> "IntMatrix":
        if not blocks:
            return cls.zeros(0, cols or 0)
        c = blocks[0].cols
        if any(b.cols != c for b in blocks):
            raise DimensionError("vstack of blocks with different column counts")
        return cls(sum(b.rows for b in blocks), c, tuple(x for b in blocks for x in b.entries))

    @classmethod
    def block_diag(cls, blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                out[r0 + i][c0:c0 + b.cols] = b.row(i)
            r0 += b.rows
            c0 += b.cols
        return cls.from_rows(out, cols)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence["IntMatrix"]],
                    row_sizes: Sequence[int], col_sizes: Sequence[int]) -> "IntMatrix":
        """Assemble a block matrix; ``blocks[a][b]`` may be None for zero."""
        rows, cols = sum(row_sizes), sum(col_sizes)
        out = [[0] * cols for _ in range(rows)]
        r0 = 0
        for a, rs in enumerate(row_sizes):
            c0 = 0
            for b, cs in enumerate(col_sizes):
                blk = blocks[a][b]
                if blk is not None:
                    if (blk.rows, blk.cols) != (rs, cs):
                        raise DimensionError(
                            f"block ({a},{b}) has shape {blk.shape}, expected {(rs, cs)}")
                    for i in range(rs):
                        out[r0 + i][c0:c0 + cs] = blk.row(i)
                c0 += cs
            r0 += rs
        return cls.from_rows(out, cols)

    # -- access -------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> list:
        return [self.col(j) for j in range(self.cols)]

    def select_rows(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix.from_rows([self.row(i) for i in idx], self.cols)

    def select_cols(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix.from_rows([[self[i, j] for j in idx] for i in range(self.rows)], len(idx))

    def is_zero(self) -> bool:
        return not any(self.entries)

    # -- arithmetic ---------------------------------------------------
    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.columns()
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum(a * b for a, b in zip(r, c) if a) for c in ocols)
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence[int]) -> list:
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for {self.shape} matrix")
        return [sum(a * b for a, b in zip(self.row(i), v) if a) for i in range(self.rows)]

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return IntMatrix(self.rows, self.cols,
                         tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows(self.columns(), self.rows)

    def determinant(self) -> int:
        """Fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise DimensionError("determinant of a non-square matrix")
        n = self.rows
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def __repr__(self):
        return f"IntMatrix({self.to_rows()!r})" if self.rows else f"IntMatrix.zeros(0, {self.cols})"


def _as_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, Integral):
        raise TypeError(f"matrix entries must be integers, got {x!r}")
    return int(x)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == S`` with U, V unimodular and S in Smith form.

    ``U_inv`` and ``V_inv`` are the exact inverses, tracked during the
    elimination so that callers never need to invert over the rationals.
    """

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix = field(repr=False, compare=False)
    V_inv: IntMatrix = field(repr=False, compare=False)

    @property
    def diagonal(self) -> list:
        return [self.S[i, i] for i in range(min(self.S.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    The pivot at each stage is the nonzero entry of smallest absolute value in
    the remaining submatrix, ties broken by lowest row then lowest column, so
    the output is a deterministic function of the input.
    """
    m, n = A.shape
    a = A.to_rows()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        ra, rs = a[dst], a[src]
        for k in range(n):
            if rs[k]:
                ra[k] += q * rs[k]
        ud, us = U[dst], U[src]
        for k in range(m):
            if us[k]:
                ud[k] += q * us[k]
        for r in Ui:
            if r[dst]:
                r[src] -= q * r[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for r in a:
            if r[src]:
                r[dst] += q * r[src]
        for r in V:
            if r[src]:
                r[dst] += q * r[src]
        vd, vs = Vi[dst], Vi[src]
        for k in range(n):
            if vd[k]:
                vs[k] -= q * vd[k]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        clean = False
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(a[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
            for r in Ui:
                r[t] = -r[t]
        if a[t][t] == 0:
            break

    return SmithDecomposition(
        U=IntMatrix.from_rows(U, m), S=IntMatrix.from_rows(a, n), V=IntMatrix.from_rows(V, n),
        U_inv=IntMatrix.from_rows(Ui, m), V_inv=IntMatrix.from_rows(Vi, n))


def lattice_solve(A: IntMatrix, b: Sequence[int]) -> Optional[list]:
    """Integer solution x of ``A @ x == b``, or None when there is none."""
    if len(b) != A.rows:
        raise DimensionError(f"right-hand side of length {len(b)} for {A.shape} matrix")
    return _solve_with(smith_normal_form(A), b)


def _solve_with(snf: SmithDecomposition, b: Sequence[int]) -> Optional[list]:
    c = snf.U.apply(list(b))
    diag = snf.diagonal
    y = [0] * snf.V.rows
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ci:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    return snf.V.apply(y)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of {x : A x = 0}."""
    snf = smith_normal_form(A)
    return snf.V.select_cols(range(snf.rank, A.cols))


def image_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of the column span of A."""
    snf = smith_normal_form(A)
    return (A @ snf.V).select_cols(range(snf.rank))


# ---------------------------------------------------------------------------
# Groups and homomorphisms


@dataclass(frozen=True)
class FgAbGroup:
    """The group ``Z^generators / colspan(relations)``.

    Equality of instances is equality of presentations; use
    :func:`is_isomorphic` to compare abstract groups.
    """

    generators: int
    relations: IntMatrix = None

    def __post_init__(self):
        if self.generators < 0:
            raise DimensionError("negative number of generators")
        rel = self.relations
        if rel is None:
            rel = IntMatrix.zeros(self.generators, 0)
        elif not isinstance(rel, IntMatrix):
            rel = IntMatrix.from_columns(rel, self.generators)
        if rel.rows != self.generators:
            raise DimensionError(
                f"relation matrix has {rel.rows} rows for {self.generators} generators")
        object.__setattr__(self, "relations", rel)

    # -- constructors -------------------------------------------------
    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls(rank)

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls(0)

    @classmethod
    def cyclic(cls, order: int) -> "FgAbGroup":
        """Z/order; order 0 gives Z."""
        return cls(1, IntMatrix(1, 1, (order,)))

    @classmethod
    def from_invariants(cls, rank: int, torsion: Sequence[int] = ()) -> "FgAbGroup":
        torsion = list(torsion)
        g = rank + len(torsion)
        rel = IntMatrix.diagonal([0] * rank + torsion, g, g)
        return cls(g, rel.select_cols(range(rank, g)))

    # -- invariants ---------------------------------------------------
    @cached_property
    def _snf(self) -> SmithDecomposition:
        return smith_normal_form(self.relations)

    @cached_property
    def invariant_factors(self) -> tuple:
        """``(free_rank, (d1, d2, ...))`` with each d >= 2 and d_i | d_{i+1}."""
        diag = self._snf.diagonal
        nonzero = [d for d in diag if d]
        torsion = tuple(d for d in nonzero if d != 1)
        return (self.generators - len(nonzero), torsion)

    @property
    def rank(self) -> int:
        return self.invariant_factors[0]

    @property
    def torsion(self) -> tuple:
        return self.invariant_factors[1]

    def is_trivial(self) -> bool:
        return self.invariant_factors == (0, ())

    def is_free(self) -> bool:
        return not self.torsion

    def order(self) -> Optional[int]:
        """Number of elements, or None when infinite."""
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def is_zero_element(self, v: Sequence[int]) -> bool:
        """Whether a generator-coordinate vector represents 0."""
        return _solve_with(self._snf, v) is not None

    def express_relation(self, v: Sequence[int]) -> Optional[list]:
        """Coefficients y with ``relations @ y == v``, or None."""
        return _solve_with(self._snf, v)

    def canonical(self) -> tuple:
        """Invariant-factor presentation ``(H, to_H, from_H)``.

        ``to_H`` and ``from_H`` are mutually inverse isomorphisms. H has one
        generator per free summand followed by one per torsion coefficient.
        """
        snf = self._snf
        diag = snf.diagonal + [0] * (self.generators - len(snf.diagonal))
        keep = [i for i, d in enumerate(diag) if d != 1]
        free = [i for i in keep if diag[i] == 0]
        tors = [i for i in keep if diag[i] != 0]
        order = free + tors
        H = FgAbGroup.from_invariants(len(free), [diag[i] for i in tors])
        to_H = AbHom(self, H, snf.U.select_rows(order))
        from_H = AbHom(H, self, snf.U_inv.select_cols(order))
        return H, to_H, from_H

    def __str__(self):
        return format_group(self)


def format_group(G: FgAbGroup) -> str:
    """Canonical text: ``0``, ``Z``, ``Z^r``, ``Z/d`` joined with `` + ``."""
    rank, torsion = G.invariant_factors
    parts = []
    if rank == 1:
        parts.append("Z")
    elif rank > 1:
        parts.append(f"Z^{rank}")
    parts.extend(f"Z/{d}" for d in torsion)
    return " + ".join(parts) if parts else "0"


def parse_group_string(text: str) -> tuple:
    """Inverse of :func:`format_group` at the level of invariant factors."""
    text = text.strip()
    if text == "0":
        return (0, ())
    rank, torsion = 0, []
    for part in text.split("+"):
        part = part.strip()
        if part == "Z":
            rank += 1
        elif part.startswith("Z^"):
            rank += int(part[2:])
        elif part.startswith("Z/"):
            torsion.append(int(part[2:]))
        else:
            raise ValueError(f"cannot parse group summand {part!r}")
    return FgAbGroup.from_invariants(rank, torsion).invariant_factors


def is_isomorphic(a: FgAbGroup, b: FgAbGroup) -> bool:
    return a.invariant_factors == b.invariant_factors


@dataclass(frozen=True, eq=False)
class AbHom:
    """Homomorphism given on generators by ``matrix`` (target x source).

    Construction checks well-definedness: every relator of the source must
    map into the relation lattice of the target.
    """

    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        M = self.matrix
        if not isinstance(M, IntMatrix):
            M = IntMatrix.from_rows(M, self.source.generators)
            object.__setattr__(self, "matrix", M)
        if M.shape != (self.target.generators, self.source.generators):
            raise DimensionError(
                f"matrix shape {M.shape} does not match "
                f"{self.target.generators}x{self.source.generators}")
        if self.check:
            image = M @ self.source.relations
            for j, c in enumerate(image.columns()):
                if not self.target.is_zero_element(c):
                    raise IllDefinedMapError(
                        f"source relator {j} does not map to a relation of the target")

    @classmethod
    def identity(cls, G: FgAbGroup) -> "AbHom":
        return cls(G, G, IntMatrix.identity(G.generators), check=False)

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> "AbHom":
        return cls(source, target, IntMatrix.zeros(target.generators, source.generators),
                   check=False)

    def compose(self, inner: "AbHom") -> "AbHom":
        """``self`` after ``inner``."""
        if inner.target != self.source:
            raise DimensionError("composing maps with mismatched groups")
        return AbHom(inner.source, self.target, self.matrix @ inner.matrix, check=False)

    def __matmul__(self, inner: "AbHom") -> "AbHom":
        return self.compose(inner)

    def _same_ends(self, other):
        if self.source != other.source or self.target != other.target:
            raise DimensionError("maps have different source or target")

    def __add__(self, other: "AbHom") -> "AbHom":
        self._same_ends(other)
        return AbHom(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other: "AbHom") -> "AbHom":
        self._same_ends(other)
        return AbHom(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self) -> "AbHom":
        return AbHom(self.source, self.target, -self.matrix, check=False)

    def scale(self, k: int) -> "AbHom":
        return AbHom(self.source, self.target, self.matrix.scale(k), check=False)

    def is_zero(self) -> bool:
        return all(self.target.is_zero_element(c) for c in self.matrix.columns())

    def equals(self, other: "AbHom") -> bool:
        """Equality as maps of presented groups."""
        if self.source != other.source or self.target != other.target:
            return False
        return (self - other).is_zero()

    def is_identity(self) -> bool:
        return self.source == self.target and self.equals(AbHom.identity(self.source))

    def __repr__(self):
        return f"AbHom({self.source} -> {self.target}, {self.matrix.to_rows()!r})"


# ---------------------------------------------------------------------------
# Constructions


def direct_sum(groups: Sequence[FgAbGroup]) -> tuple:
    """``(G, injections, projections)`` for the block presentation."""
    groups = list(groups)
    G = FgAbGroup(sum(g.generators for g in groups),
                  IntMatrix.block_diag([g.relations for g in groups]))
    injections, projections = [], []
    offset = 0
    for g in groups:
        sel = IntMatrix.from_rows(
            [[int(j == offset + i) for j in range(G.generators)] for i in range(g.generators)],
            G.generators)
        injections.append(AbHom(g, G, sel.T, check=False))
        projections.append(AbHom(G, g, sel, check=False))
        offset += g.generators
    return G, injections, projections


def power(A: FgAbGroup, m: int) -> FgAbGroup:
    """The m-fold direct sum A^m."""
    return direct_sum([A] * m)[0]


def block_hom(source: FgAbGroup, target: FgAbGroup, sources: Sequence[FgAbGroup],
              targets: Sequence[FgAbGroup], blocks: dict) -> AbHom:
    """Map between direct sums from ``blocks[(t, s)]`` (missing = zero)."""
    rows = [[None] * len(sources) for _ in targets]
    for (t, s), h in blocks.items():
        M = h.matrix if isinstance(h, AbHom) else h
        rows[t][s] = M if rows[t][s] is None else rows[t][s] + M
    M = IntMatrix.from_blocks(rows, [g.generators for g in targets],
                              [g.generators for g in sources])
    return AbHom(source, target, M)


def cokernel(h: AbHom) -> tuple:
    """``(Q, projection)`` with Q = target / image(h).

    Q keeps the generators of the target, so the projection matrix is the
    identity.
    """
    T = h.target
    Q = FgAbGroup(T.generators, IntMatrix.hstack([T.relations, h.matrix], T.generators))
    return Q, AbHom(T, Q, IntMatrix.identity(T.generators), check=False)


def kernel(h: AbHom) -> tuple:
    """``(K, inclusion)`` with K the kernel of h on the presented groups.

    Computed on free covers: the lattice {x : h x lies in the target relation
    lattice} is the projection of the integer kernel of ``[M | R_target]``;
    K is that lattice modulo the source relations.
    """
    S, T, M = h.source, h.target, h.matrix
    big = IntMatrix.hstack([M, T.relations], T.generators)
    null = kernel_basis(big).select_rows(range(S.generators))
    basis = image_basis(null)
    snf = smith_normal_form(basis)
    rels = []
    for r in S.relations.columns():
        z = _solve_with(snf, r)
        if z is None:
            raise IllDefinedMapError("source relator outside the kernel lattice")
        rels.append(z)
    K = FgAbGroup(basis.cols, IntMatrix.from_columns(rels, basis.cols))
    return K, AbHom(K, S, basis, check=False)


def homology_at(d_out: AbHom, d_in: AbHom) -> FgAbGroup:
    """ker(d_out) / im(d_in), returned in invariant-factor form."""
    if d_out.source != d_in.target:
        raise DimensionError("d_out.source differs from d_in.target")
    if not d_out.compose(d_in).is_zero():
        raise NonZeroCompositeError("consecutive maps compose to a nonzero map")
    K, inc = kernel(d_out)
    snf = smith_normal_form(inc.matrix)
    cols = []
    for c in d_in.matrix.columns():
        z = _solve_with(snf, c)
        if z is None:
            raise NonZeroCompositeError("image of d_in is not contained in ker d_out")
        cols.append(z)
    lift = AbHom(d_in.source, K, IntMatrix.from_columns(cols, K.generators), check=False)
    Q, _ = cokernel(lift)
    return Q.canonical()[0]


def pi_shift(A: FgAbGroup, m: int, power_: int = 1) -> AbHom:
    """Cyclic shift (a1, ..., am) -> (am, a1, ..., a_{m-1}) on A^m, iterated."""
    Am = power(A, m)
    k = power_ % m if m else 0
    g = A.generators
    blocks = [[None] * m for _ in range(m)]
    for src in range(m):
        blocks[(src + k) % m][src] = IntMatrix.identity(g)
    M = IntMatrix.from_blocks(blocks, [g] * m, [g] * m)
    return AbHom(Am, Am, M, check=False)


def augmentation(A: FgAbGroup, m: int) -> AbHom:
    """(a1, ..., am) -> a1 + ... + am."""
    M = IntMatrix.hstack([IntMatrix.identity(A.generators)] * m, A.generators)
    return AbHom(power(A, m), A, M, check=False)


def hom_power(h: AbHom, m: int) -> AbHom:
    """The m-fold direct sum of h."""
    return AbHom(power(h.source, m), power(h.target, m),
                 IntMatrix.block_diag([h.matrix] * m), check=False)
