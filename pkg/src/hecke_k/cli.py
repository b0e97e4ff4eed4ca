"""Command line entry point: ``hecke-k <command> FILE``.

Exit codes: 0 success, 2 validation failure, 3 wrong structure kind,
4 unreadable input or unwritable output, 5 internal cross-check failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from .ahss import GradedCoeffSystem, assemble_k_groups, e2_page, render_page
from .bredon import Edge, OneSkeletonData, apply_coefficients, first_differential
from .errors import CrossCheckError, HeckeKError, WrongKindError
from .exactla import FgAbGroup, cokernel, format_group, is_isomorphic
from .fincat import colimit
from .document import Document, instance_to_json, load_document
from .mvcube import check_exactness
from .recipe import skeleton_instance, build_delta_epsilon, build_gamma, k0_central, k0_general, sh0_of_instance

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_KIND = 3
EXIT_IO = 4
EXIT_CROSS_CHECK = 5


def exit_code_for(err: HeckeKError) -> int:
    if err.code == "IO":
        return EXIT_IO
    if err.code == "WRONG_KIND":
        return EXIT_KIND
    if err.code == "CROSS_CHECK":
        return EXIT_CROSS_CHECK
    return EXIT_VALIDATION


def _need_kind(doc: Document, *kinds):
    if doc.kind not in kinds:
        raise WrongKindError(f"this command needs a {' or '.join(kinds)} document, "
                             f"got {doc.kind}")


def _complex(doc: Document):
    _need_kind(doc, "cell-complex", "poset")
    return doc.structure.to_complex() if doc.kind == "poset" else doc.structure


def _header(doc: Document) -> list:
    return [f"# assert {k} = {json.dumps(doc.assertions[k], sort_keys=True)}"
            for k in sorted(doc.assertions)]


def cmd_validate(doc: Document, args) -> list:
    return [f"ok: {doc.kind} document ({doc.version})"]


def cmd_homology(doc: Document, args) -> list:
    X = _complex(doc)
    F = doc.graded.at(args.q) if doc.graded is not None else doc.coefficients
    if args.degree is not None:
        degrees = [args.degree]
    else:
        degrees = list(range(X.dimension + 1))
    C = apply_coefficients(X, F)
    return [f"H_{n} = {format_group(C.homology(n))}" for n in degrees]


def cmd_e2(doc: Document, args) -> list:
    X = _complex(doc)
    G = doc.graded or GradedCoeffSystem(X.category, {0: doc.coefficients})
    page = e2_page(X, G)
    lines = render_page(page).splitlines()
    if X.dimension <= 1:
        for n, (a, b) in assemble_k_groups(page):
            lines.append(f"K_{n}: E2_(0,{n}) = {format_group(a)}, E2_(1,{n - 1}) = {format_group(b)}")
    else:
        lines.append("K-groups not assembled: dimension above 1")
    return lines


def _check_pair(name_a: str, a: FgAbGroup, name_b: str, b: FgAbGroup):
    if not is_isomorphic(a, b):
        raise CrossCheckError(f"{name_a} = {a} but {name_b} = {b}")


def cmd_k0(doc: Document, args) -> list:
    if args.variation:
        _need_kind(doc, "central-ext")
        g = cokernel(build_gamma(doc.structure))[0]
        de = cokernel(build_delta_epsilon(doc.structure))[0]
        _check_pair("coker(gamma)", g, "coker(delta+epsilon)", de)
        lines = [f"coker(gamma) = {g}", f"coker(delta+epsilon) = {de}"]
        result = k0_central(doc.structure)
    elif doc.kind in ("recipe", "central-ext"):
        inst = doc.structure if doc.kind == "recipe" else doc.structure.base
        b, sh = k0_general(inst), sh0_of_instance(inst)
        _check_pair("coker(beta)", b, "SH_0", sh)
        lines = [f"coker(beta) = {b}", f"SH_0 = {sh}"]
        result = b
    elif doc.kind in ("cell-complex", "poset"):
        X = _complex(doc)
        h0 = apply_coefficients(X, doc.coefficients).homology(0)
        lines = [f"SH_0 = {h0}"]
        if X.dimension <= 1:
            data = _one_skeleton(X)
            d1 = cokernel(first_differential(data, doc.coefficients))[0]
            _check_pair("coker(d_1)", d1, "SH_0", h0)
            lines.insert(0, f"coker(d_1) = {d1}")
        result = h0
    else:
        raise WrongKindError(f"k0 does not apply to {doc.kind} documents")
    if args.quiet:
        return [f"K_0 = {result}"]
    return lines + [f"K_0 = {result}"]


def _one_skeleton(X):
    """Read a 1-dimensional complex back as endpoint data."""
    edges = []
    bd = X.boundary.get(1, {})
    for i, cell in enumerate(X.cells_in(1)):
        ends = [(j, terms) for (ii, j), terms in bd.items() if ii == i]
        if len(ends) == 2 and all(len(t) == 1 for _, t in ends):
            (j0, t0), (j1, t1) = sorted(ends)
            (a0, m0), (a1, m1) = t0[0], t1[0]
            if (a0, a1) == (-1, 1):
                edges.append(Edge(cell.name, cell.stabilizer, j0, j1, m0, m1))
                continue
            if (a0, a1) == (1, -1):
                edges.append(Edge(cell.name, cell.stabilizer, j1, j0, m1, m0))
                continue
        raise WrongKindError(f"edge {cell.name!r} is not in endpoint form; use homology instead")
    return OneSkeletonData(X.category, tuple(X.cells_in(0)), tuple(edges))


def cmd_colimit(doc: Document, args) -> list:
    if doc.coefficients is None:
        raise WrongKindError(f"{doc.kind} documents carry no coefficient system")
    return [f"colim = {colimit(doc.coefficients)}"]


def cmd_mv(doc: Document, args) -> list:
    _need_kind(doc, "exact-sequence")
    reports = check_exactness(doc.structure)
    lines = [str(r) for r in reports]
    verdict = "exact" if all(r.exact for r in reports) else "not exact"
    return ([] if args.quiet else lines) + [f"sequence: {verdict}"]


def cmd_instance(args) -> list:
    if args.n < 1 or args.rank < 0:
        raise HeckeKError("need --n >= 1 and --rank >= 0", code="INVALID_INSTANCE")
    inst = skeleton_instance(args.family, args.n, args.rank)
    doc = instance_to_json(inst, {"placeholder_coefficients": True})
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False).splitlines()


COMMANDS = {
    "validate": cmd_validate,
    "homology": cmd_homology,
    "e2": cmd_e2,
    "k0": cmd_k0,
    "colimit": cmd_colimit,
    "mv": cmd_mv,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hecke-k", description="Bredon homology and K0 cokernel recipes "
                                "for finite equivariant models")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("path")
        sp.add_argument("--output", "-o", help="write output to this file")
        sp.add_argument("--quiet", "-q", action="store_true", help="print only the result")
        return sp

    add("validate", "parse and validate an instance file")
    sp = add("homology", "Bredon homology of a cell-complex or poset file")
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--degree", type=int)
    grp.add_argument("--all", action="store_true", help="every degree up to the dimension (default)")
    sp.add_argument("--q", type=int, default=0, help="coefficient degree for graded files")
    add("e2", "E2 page, plus K-group pieces in dimension <= 1")
    sp = add("k0", "K0 through both pipelines")
    sp.add_argument("--variation", action="store_true", help="central-extension cross-check")
    add("colimit", "colimit of the coefficient system")
    add("mv", "exactness report for an exact-sequence file")
    sp = sub.add_parser("instance", help="emit a skeleton instance file")
    sp.add_argument("family", choices=["sl", "pgl", "gl"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--rank", type=int, default=1, help="rank of every placeholder group")
    sp.add_argument("--output", "-o")
    sp.add_argument("--quiet", "-q", action="store_true")
    return p


def _emit(lines: list, args) -> int:
    text = "\n".join(lines) + "\n"
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error [IO]: cannot write {args.output}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "instance":
            return _emit(cmd_instance(args), args)
        try:
            doc = load_document(args.path)
        except HeckeKError:
            raise
        except (TypeError, ValueError, KeyError, AttributeError) as exc:
            raise HeckeKError(f"malformed document: {exc}", code="PARSE") from None
        lines = COMMANDS[args.command](doc, args)
        if not args.quiet and args.command != "validate":
            lines = _header(doc) + lines
    except HeckeKError as err:
        print(f"error [{err.code}]: {err}", file=sys.stderr)
        return exit_code_for(err)
    return _emit(lines, args)


if __name__ == "__main__":
    sys.exit(main())
