"""JSON instance documents.

A document is an object with these keys::

    format        "hecke-k/1"
    kind          cell-complex | recipe | central-ext | poset | exact-sequence
    category      {"objects": [...], "morphisms": [{"id", "source", "target", "label"?}],
                   "composition": [[g, f, g o f], ...], "central": [...]}
    coefficients  {"groups": {obj: group}, "maps": {morphism: matrix}}
                  or {"graded": {"q": {"groups", "maps"} | "zero"}, "connective": bool}
    structure     kind-specific, see the ``_build_*`` functions
    assertions    free-form hypotheses, echoed back by the command line

A group is ``{"generators": n, "relations": [column, ...]}``,
``{"rank": r, "torsion": [d, ...]}`` or a string such as ``"Z^2 + Z/3"``.
Matrices are nested arrays, one inner array per target generator. Identity
morphisms never need a matrix.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from .ahss import GradedCoeffSystem
from .bredon import Cell, CellOrbitComplex, close_simplices, face_name, simplicial_complex
from .errors import DocumentError, HeckeKError
from .exactla import AbHom, FgAbGroup, IntMatrix, parse_group_string
from .fincat import CoeffSystem, FinCategory, Morphism, validate_category, validate_functor
from .mvcube import ExactSequenceInstance, face_poset_model
from .recipe import CentralExtInstance, EdgeLabel, RecipeInstance, Vertex

__all__ = [
    "FORMAT_VERSION",
    "KINDS",
    "Document",
    "parse_document",
    "load_document",
    "serialize_document",
    "group_to_json",
    "matrix_to_json",
    "instance_to_json",
    "category_to_json",
    "coefficients_to_json",
]

FORMAT_VERSION = "hecke-k/1"
KINDS = ("cell-complex", "recipe", "central-ext", "poset", "exact-sequence")


@dataclass(frozen=True, eq=False)
class Document:
    raw: dict
    kind: str
    category: Optional[FinCategory]
    coefficients: Optional[CoeffSystem]
    graded: Optional[GradedCoeffSystem]
    structure: Any
    assertions: dict

    @property
    def version(self) -> str:
        return self.raw["format"]


def _need(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise DocumentError(f"{where}: missing key {key!r}")
    return d[key]


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(f"{where}: expected an integer, got {x!r}")
    return x


def parse_group(desc, where: str = "group") -> FgAbGroup:
    if isinstance(desc, str):
        try:
            rank, torsion = parse_group_string(desc)
        except ValueError as exc:
            raise DocumentError(f"{where}: {exc}") from None
        return FgAbGroup.from_invariants(rank, torsion)
    if isinstance(desc, dict) and "generators" in desc:
        n = _int(desc["generators"], where)
        cols = desc.get("relations", [])
        if not isinstance(cols, list) or any(not isinstance(c, list) or len(c) != n for c in cols):
            raise DocumentError(f"{where}: relations must be columns of length {n}")
        return FgAbGroup(n, [[_int(x, where) for x in c] for c in cols])
    if isinstance(desc, dict) and "rank" in desc:
        torsion = desc.get("torsion", [])
        if not isinstance(torsion, list):
            raise DocumentError(f"{where}: torsion must be a list")
        ts = [_int(d, where) for d in torsion]
        if any(d < 1 for d in ts):
            raise DocumentError(f"{where}: torsion orders must be positive")
        return FgAbGroup.from_invariants(_int(desc["rank"], where), ts)
    raise DocumentError(f"{where}: unrecognised group description {desc!r}")


def group_to_json(G: FgAbGroup) -> dict:
    out = {"generators": G.generators}
    if G.relations.cols:
        out["relations"] = [list(c) for c in G.relations.columns()]
    return out


def parse_matrix(rows, source: FgAbGroup, target: FgAbGroup, where: str) -> AbHom:
    if not isinstance(rows, list) or len(rows) != target.generators:
        raise DocumentError(f"{where}: expected {target.generators} rows")
    for r in rows:
        if not isinstance(r, list) or len(r) != source.generators:
            raise DocumentError(f"{where}: expected rows of length {source.generators}")
    M = IntMatrix.from_rows([[_int(x, where) for x in r] for r in rows], cols=source.generators)
    return AbHom(source, target, M)


def matrix_to_json(M: IntMatrix) -> list:
    return [list(r) for r in M.to_rows()]


def _check(report):
    if not report:
        raise HeckeKError(report.message, code=report.code)


def _parse_category(block) -> FinCategory:
    objects = _need(block, "objects", "category")
    if not isinstance(objects, list) or not all(isinstance(o, str) for o in objects):
        raise DocumentError("category: objects must be a list of strings")
    mors = []
    for i, m in enumerate(block.get("morphisms", [])):
        where = f"category.morphisms[{i}]"
        mors.append(Morphism(str(_need(m, "id", where)), str(_need(m, "source", where)),
                             str(_need(m, "target", where)), str(m.get("label", ""))))
    comp = {}
    for i, entry in enumerate(block.get("composition", [])):
        if not isinstance(entry, list) or len(entry) != 3:
            raise DocumentError(f"category.composition[{i}]: expected [g, f, g o f]")
        g, f, h = (str(x) for x in entry)
        if (g, f) in comp:
            raise DocumentError(f"category.composition[{i}]: {g} o {f} given twice")
        comp[(g, f)] = h
    cat = FinCategory.build(objects, mors, comp, [str(c) for c in block.get("central", [])])
    _check(validate_category(cat))
    return cat


def _parse_system(cat: FinCategory, block, where: str) -> CoeffSystem:
    if block == "zero":
        return CoeffSystem.zero(cat)
    groups = _need(block, "groups", where)
    values = {}
    for o in cat.objects:
        if o not in groups:
            raise HeckeKError(f"{where}: no group for object {o!r}", code="REFERENCE")
        values[o] = parse_group(groups[o], f"{where}.groups.{o}")
    extra = set(groups) - set(cat.objects)
    if extra:
        raise HeckeKError(f"{where}: group given for unknown object {sorted(extra)[0]!r}",
                          code="REFERENCE")
    maps_in = block.get("maps", {})
    for mid in maps_in:
        if not cat.has_morphism(mid):
            raise HeckeKError(f"{where}: matrix given for unknown morphism {mid!r}", code="REFERENCE")
    maps = {}
    for m in cat.morphisms:
        if m.id in maps_in:
            maps[m.id] = parse_matrix(maps_in[m.id], values[m.source], values[m.target],
                                      f"{where}.maps.{m.id}")
        elif m.id == cat.identities[m.source]:
            maps[m.id] = AbHom.identity(values[m.source])
        else:
            raise HeckeKError(f"{where}: no matrix for morphism {m.id!r}", code="REFERENCE")
    F = CoeffSystem(cat, values, maps)
    _check(validate_functor(F))
    return F


def _parse_coefficients(cat: FinCategory, block) -> tuple:
    """``(F_0, graded or None)``."""
    if isinstance(block, dict) and "graded" in block:
        graded = block["graded"]
        if not isinstance(graded, dict) or not graded:
            raise DocumentError("coefficients.graded must be a non-empty object")
        systems = {}
        for key, sub in graded.items():
            try:
                q = int(key)
            except ValueError:
                raise DocumentError(f"coefficients.graded: bad degree {key!r}") from None
            systems[q] = _parse_system(cat, sub, f"coefficients.graded.{key}")
        G = GradedCoeffSystem(cat, systems, bool(block.get("connective", False)))
        return G.at(0), G
    return _parse_system(cat, block, "coefficients"), None


# -- structures -----------------------------------------------------------


def _build_cell_complex(cat: FinCategory, s: dict) -> CellOrbitComplex:
    """``{"simplices": [[0, 1, 2], ...]}`` on a one-object category, or
    ``{"cells": [[{"name", "stabilizer"}, ...], ...],
    "boundary": {"n": [{"cell": i, "face": j, "terms": [[coef, morphism], ...]}]}}``.
    """
    if "simplices" in s:
        if len(cat.objects) != 1:
            raise DocumentError("structure.simplices needs a category with one object")
        simplices = [tuple(_int(v, "structure.simplices") for v in sim) for sim in s["simplices"]]
        X = simplicial_complex(simplices, cat)
    else:
        cells = []
        for n, level in enumerate(_need(s, "cells", "structure")):
            cells.append(tuple(Cell(str(_need(c, "name", f"structure.cells[{n}]")),
                                    str(_need(c, "stabilizer", f"structure.cells[{n}]")))
                               for c in level))
        boundary = {}
        for key, entries in s.get("boundary", {}).items():
            n = int(key)
            bd = {}
            for e in entries:
                where = f"structure.boundary.{key}"
                ij = (_int(_need(e, "cell", where), where), _int(_need(e, "face", where), where))
                terms = tuple((_int(a, where), str(mid)) for a, mid in _need(e, "terms", where))
                bd[ij] = bd.get(ij, ()) + terms
            boundary[n] = bd
        X = CellOrbitComplex(cat, tuple(cells), boundary)
    X.validate()
    return X


def _recipe_parts(s: dict, central: bool) -> tuple:
    verts = tuple(Vertex(str(_need(v, "name", "structure.vertices")),
                         str(_need(v, "stabilizer", "structure.vertices")))
                  for v in _need(s, "vertices", "structure"))
    edges, mu = [], []
    for i, e in enumerate(s.get("edges", [])):
        where = f"structure.edges[{i}]"
        edges.append(EdgeLabel(str(_need(e, "v", where)), str(_need(e, "w", where)),
                               str(e.get("label", "e")), str(_need(e, "intersection", where)),
                               str(_need(e, "inclusion", where)), str(_need(e, "conjugation", where))))
        if central:
            mu.append(_int(e.get("mu", 0), where))
    return verts, tuple(edges), mu


def _build_recipe(F: CoeffSystem, s: dict) -> RecipeInstance:
    verts, edges, _ = _recipe_parts(s, False)
    inst = RecipeInstance(F, verts, edges)
    inst.validate()
    return inst


def _build_central(F: CoeffSystem, s: dict) -> CentralExtInstance:
    verts, edges, mu = _recipe_parts(s, True)
    m = _int(_need(s, "m", "structure"), "structure.m")
    if m < 1:
        raise DocumentError("structure.m must be at least 1")
    inst = CentralExtInstance.reduced(RecipeInstance(F, verts, edges), m, mu)
    inst.validate()
    return inst


def _build_exact_sequence(s: dict) -> ExactSequenceInstance:
    """``{"groups": [{"name", "group"}, ...], "maps": [matrix, ...]}``."""
    groups, names = [], []
    for i, g in enumerate(_need(s, "groups", "structure")):
        names.append(str(g.get("name", i)))
        groups.append(parse_group(_need(g, "group", f"structure.groups[{i}]"),
                                  f"structure.groups[{i}]"))
    raw_maps = _need(s, "maps", "structure")
    if len(raw_maps) != len(groups) - 1:
        raise DocumentError("structure.maps needs one matrix between consecutive groups")
    maps = tuple(parse_matrix(M, groups[i], groups[i + 1], f"structure.maps[{i}]")
                 for i, M in enumerate(raw_maps))
    seq = ExactSequenceInstance(tuple(groups), maps, tuple(names))
    seq.validate()
    return seq


def _build_poset(s: dict, coeffs) -> tuple:
    """``structure = {"simplices": [...]}``; coefficients keyed by face names
    (``"0,1"``) with maps keyed ``"0,1>0"`` for codimension-one faces, or
    ``{"constant": group}``. Graded input nests either form under ``graded``.
    """
    simplices = [tuple(_int(v, "structure.simplices") for v in sim)
                 for sim in _need(s, "simplices", "structure")]

    def one(block, where):
        if block == "zero":
            block = {"constant": "0"}
        if "constant" in block:
            return face_poset_model(simplices, constant=parse_group(block["constant"], where))
        groups = _need(block, "groups", where)
        faces = {}
        for f in close_simplices(simplices):
            if face_name(f) not in groups:
                raise HeckeKError(f"{where}: no group for face {face_name(f)!r}", code="REFERENCE")
            faces[f] = parse_group(groups[face_name(f)], f"{where}.groups.{face_name(f)}")
        maps = {}
        raw = block.get("maps", {})
        for f in faces:
            for k in range(len(f) if len(f) > 1 else 0):
                t = f[:k] + f[k + 1:]
                key = f"{face_name(f)}>{face_name(t)}"
                if key not in raw:
                    raise HeckeKError(f"{where}: no matrix for {key!r}", code="REFERENCE")
                maps[(f, t)] = parse_matrix(raw[key], faces[f], faces[t], f"{where}.maps.{key}")
        return face_poset_model(simplices, values=faces, maps=maps)

    if isinstance(coeffs, dict) and "graded" in coeffs:
        models = {int(q): one(b, f"coefficients.graded.{q}") for q, b in coeffs["graded"].items()}
        first = models[min(models)]
        cat = first.category
        systems = {q: CoeffSystem(cat, m.coefficients.values, m.coefficients.maps)
                   for q, m in models.items()}
        G = GradedCoeffSystem(cat, systems, bool(coeffs.get("connective", False)))
        base = models.get(0)
        model = base if base is not None else type(first)(first.faces, first.stabilizer,
                                                         first.face_maps, G.at(0))
        return model, G
    return one(coeffs, "coefficients"), None


# -- entry points ---------------------------------------------------------


def parse_document(data) -> Document:
    """Parse a JSON string or an already-decoded object, running every validation."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    version = data.get("format")
    if version != FORMAT_VERSION:
        raise DocumentError(f"unrecognised format version {version!r}")
    kind = data.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"unknown kind {kind!r}")
    s = _need(data, "structure", "document")
    assertions = data.get("assertions", {})
    if not isinstance(assertions, dict):
        raise DocumentError("assertions must be an object")
    cat = F = graded = None
    if kind == "exact-sequence":
        structure = _build_exact_sequence(s)
    elif kind == "poset":
        if "category" in data:
            raise DocumentError("poset documents generate their own category")
        structure, graded = _build_poset(s, _need(data, "coefficients", "document"))
        cat, F = structure.category, structure.coefficients
    else:
        cat = _parse_category(_need(data, "category", "document"))
        F, graded = _parse_coefficients(cat, _need(data, "coefficients", "document"))
        if kind == "cell-complex":
            structure = _build_cell_complex(cat, s)
        elif kind == "recipe":
            structure = _build_recipe(F, s)
        else:
            structure = _build_central(F, s)
    return Document(data, kind, cat, F, graded, structure, dict(assertions))


def serialize_document(doc: Document) -> str:
    return json.dumps(doc.raw, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_document(path) -> Document:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise HeckeKError(f"cannot read {path}: {exc}", code="IO") from None
    return parse_document(text)


# -- writing instances built in code --------------------------------------


def category_to_json(cat: FinCategory) -> dict:
    ids = set(cat.identities.values())
    out = {
        "objects": list(cat.objects),
        "morphisms": [
            dict({"id": m.id, "source": m.source, "target": m.target},
                 **({"label": m.label} if m.label else {}))
            for m in cat.morphisms if m.id not in ids],
    }
    comp = [[g, f, h] for (g, f), h in cat.composition.items() if g not in ids and f not in ids]
    if comp:
        out["composition"] = sorted(comp)
    if cat.central:
        out["central"] = sorted(cat.central)
    return out


def coefficients_to_json(F: CoeffSystem) -> dict:
    ids = set(F.category.identities.values())
    return {
        "groups": {o: group_to_json(F.value(o)) for o in F.category.objects},
        "maps": {m.id: matrix_to_json(F.map(m.id).matrix)
                 for m in F.category.morphisms if m.id not in ids},
    }


def instance_to_json(inst, assertions: Optional[dict] = None) -> dict:
    """Document object for a RecipeInstance or CentralExtInstance."""
    central = isinstance(inst, CentralExtInstance)
    base = inst.base if central else inst
    edges = []
    for k, e in enumerate(base.edges):
        row = {"v": e.v, "w": e.w, "label": e.label, "intersection": e.intersection,
               "inclusion": e.inclusion, "conjugation": e.conjugation}
        if central:
            row["mu"] = inst.mu_bar[k]
        edges.append(row)
    structure = {"vertices": [{"name": v.name, "stabilizer": v.stabilizer} for v in base.vertices],
                 "edges": edges}
    if central:
        structure["m"] = inst.m
    return {
        "format": FORMAT_VERSION,
        "kind": "central-ext" if central else "recipe",
        "category": category_to_json(base.category),
        "coefficients": coefficients_to_json(base.coefficients),
        "structure": structure,
        "assertions": dict(assertions or {}),
    }
