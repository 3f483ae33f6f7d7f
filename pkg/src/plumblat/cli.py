"""Command line interface.

Subcommands: ``info``, ``homology``, ``hplus``, ``classify``, ``triad``,
``blowdown`` take a plumbing file in the DSL of :mod:`plumblat.dsl`;
``sfs`` takes Seifert data as ``--sfs "e0; a1/b1 a2/b2 ..."`` and runs one of
the actions on the converted star.  ``--json`` switches to a stable,
versioned machine format (keys sorted, no floats, so identical inputs give
byte-identical output).

Exit codes: 0 success, 1 usage, 2 parse/validation, 3 budget exceeded,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .charlattice import DEFAULT_BOX_CAP
from .classify import DEFAULT_NMAX, full_report, is_rational
from .dsl import parse_plumbing, serialize_dsl
from .errors import EXIT_USAGE, PlumblatError
from .homology import HomologyResult, compute_homology, derived_dimensions
from .hplus import DEFAULT_POINT_CAP, compute_hplus, ker_u_cross_check
from .moves import blow_down, check_exactness, surgery_triple
from .plumbing import (
    PlumbingForest,
    bad_vertices,
    canonical_class,
    intersection_form,
    semidefinite_classify,
)
from .seifert import parse_sfs, seifert_to_plumbing

SCHEMA_VERSION = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; the contract says 1
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _load(path: str) -> PlumbingForest:
    return parse_plumbing(Path(path).read_text(encoding="utf-8"))


def _frac(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)


def _forest_json(forest: PlumbingForest) -> dict:
    return {
        "vertices": [
            {"id": vid, "framing": m} for vid, m in zip(forest.ids, forest.framings)
        ],
        "edges": [[forest.ids[a], forest.ids[b]] for a, b in forest.edges],
        "convention": "minus_one" if forest.edge_sign.value == -1 else "plus_one",
    }


def _certified_almost_rational(forest: PlumbingForest, point_cap: int) -> bool:
    """Cheap certificate: at most one bad vertex, or outright rational.

    The full decrement search lives in the classify command; this is enough
    to stamp most outputs non-conjectural without paying for it.
    """
    if len(bad_vertices(forest)) <= 1:
        return True
    form = intersection_form(forest)
    if not form.is_negative_definite:
        return False
    return is_rational(forest, point_cap=point_cap).rational


def _homology_json(result: HomologyResult, certified: bool) -> dict:
    dims = derived_dimensions(result, almost_rational_certified=certified)
    return {
        "total_dim": result.total_dim,
        "det": result.form.determinant,
        "per_orbit": [
            {
                "orbit": oh.orbit.index,
                "representative": list(oh.orbit.representative.evals),
                "dim": oh.dim,
                "class_representatives": [list(r.evals) for r in oh.representatives],
            }
            for oh in result.per_orbit
        ],
        "derived": {
            "dim_isharp_even": dims.dim_isharp_even,
            "dim_isharp_odd": dims.dim_isharp_odd,
            "dim_isharp": dims.dim_isharp,
            "dim_hfhat": dims.dim_hfhat,
            "is_instanton_lspace": dims.is_instanton_lspace,
            "conjectural": dims.conjectural,
        },
    }


def _emit(args, payload: dict, human: list[str]) -> None:
    if args.json:
        payload = {"schema_version": SCHEMA_VERSION, **payload}
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(human) + "\n")


def _cmd_info(args) -> int:
    forest = _load(args.file)
    form = intersection_form(forest)
    bad = bad_vertices(forest)
    payload = {
        "command": "info",
        **_forest_json(forest),
        "determinant": form.determinant,
        "definiteness": form.definiteness.value,
        "bad_vertices": bad,
        "canonical_class": list(canonical_class(forest).evals),
    }
    human = [
        f"vertices: {len(forest)}, edges: {len(forest.edges)}, convention: {payload['convention']}",
        f"determinant: {form.determinant}  definiteness: {form.definiteness.value}",
        f"bad vertices ({len(bad)}): {', '.join(bad) if bad else '-'}",
    ]
    if not bad:
        verdict = semidefinite_classify(forest)
        payload["semidefinite"] = {
            "kind": verdict.kind,
            "component": list(verdict.component),
        }
        human.append(
            f"zero-bad-vertex classification: {verdict.kind}"
            + (f" on component {list(verdict.component)}" if verdict.component else "")
        )
    _emit(args, payload, human)
    return 0


def _cmd_homology(args) -> int:
    forest = _load(args.file)
    result = compute_homology(forest, box_cap=args.box_cap)
    certified = _certified_almost_rational(forest, args.point_cap)
    payload = {
        "command": "homology",
        **_forest_json(forest),
        **_homology_json(result, certified),
        "certified_almost_rational": certified,
    }
    human = [
        f"total_dim: {result.total_dim}   |det|: {result.det_abs}",
    ]
    for oh in result.per_orbit:
        human.append(
            f"orbit {oh.orbit.index} rep {list(oh.orbit.representative.evals)}: dim {oh.dim}"
        )
    dims = payload["derived"]
    tag = "  [conjectural]" if dims["conjectural"] else ""
    human.append(
        f"dim I# = {dims['dim_isharp']}  (even {dims['dim_isharp_even']}, odd {dims['dim_isharp_odd']})"
        f"  dim HF-hat = {dims['dim_hfhat']}  L-space: {dims['is_instanton_lspace']}{tag}"
    )
    _emit(args, payload, human)
    return 0


def _cmd_hplus(args) -> int:
    forest = _load(args.file)
    report = ker_u_cross_check(
        forest, point_cap=args.point_cap, box_cap=args.box_cap
    )
    per_orbit = []
    human = []
    for row in report.rows:
        graded = compute_hplus(
            forest, row.orbit, point_cap=args.point_cap, box_cap=args.box_cap
        )
        per_orbit.append(
            {
                "orbit": row.orbit.index,
                "representative": list(row.orbit.representative.evals),
                "ker_u_rank": graded.ker_u_rank,
                "stabilized_at": graded.stabilized_at,
                "homology_dim": row.homology_dim,
                "levels": [[l.level, l.rank, l.births] for l in graded.levels],
            }
        )
        human.append(
            f"orbit {row.orbit.index}: ker U rank {graded.ker_u_rank}"
            f" (homology dim {row.homology_dim}), stabilized at n = {graded.stabilized_at}"
        )
        for lvl in graded.levels:
            human.append(f"  n = {lvl.level}: rank H0 = {lvl.rank}, births = {lvl.births}")
    payload = {
        "command": "hplus",
        **_forest_json(forest),
        "per_orbit": per_orbit,
        "cross_check_ok": report.ok,
    }
    human.append(f"cross-check vs homology engine: {'OK' if report.ok else 'MISMATCH'}")
    _emit(args, payload, human)
    return 0


def _cmd_classify(args) -> int:
    forest = _load(args.file)
    report = full_report(
        forest, nmax=args.nmax, box_cap=args.box_cap, point_cap=args.point_cap
    )
    payload = {
        "command": "classify",
        **_forest_json(forest),
        "negdef": report.negdef,
        "bad_vertex_count": report.bad_vertex_count,
        "bad_vertices": list(report.bad_vertices),
        "determinant": report.det,
    }
    human = [
        f"negative definite: {report.negdef}",
        f"bad vertices ({report.bad_vertex_count}): "
        f"{', '.join(report.bad_vertices) if report.bad_vertices else '-'}",
        f"determinant: {report.det}",
    ]
    if report.negdef:
        ar = report.almost_rational
        payload.update(
            {
                "rational": report.rational.rational,
                "rational_witness": (
                    list(report.rational.witness.coords)
                    if report.rational.witness
                    else None
                ),
                "almost_rational": {
                    "status": ar.status,
                    "vertex": ar.vertex,
                    "decrement": ar.decrement,
                    "cutoff": ar.cutoff,
                },
                "dim_h": report.dim_h,
                "derived": {
                    "dim_isharp_even": report.dims.dim_isharp_even,
                    "dim_isharp_odd": report.dims.dim_isharp_odd,
                    "dim_isharp": report.dims.dim_isharp,
                    "dim_hfhat": report.dims.dim_hfhat,
                    "is_instanton_lspace": report.dims.is_instanton_lspace,
                    "conjectural": report.dims.conjectural,
                },
                "theorems_applicable": {
                    "floer_equivalence": report.floer_equivalence_certified
                },
            }
        )
        human.append(
            f"rational: {report.rational.rational}"
            + (
                f"  (witness {list(report.rational.witness.coords)})"
                if report.rational.witness
                else ""
            )
        )
        if ar.status == "yes":
            human.append(f"almost-rational: yes (vertex {ar.vertex}, decrement {ar.decrement})")
        else:
            human.append(f"almost-rational: unknown (searched decrements up to {ar.cutoff})")
        tag = " [conjectural]" if report.dims.conjectural else ""
        human.append(
            f"dim H = {report.dim_h}, dim I# = {report.dims.dim_isharp}, "
            f"L-space: {report.dims.is_instanton_lspace}{tag}"
        )
    else:
        human.append("not negative definite: homology fields omitted")
    _emit(args, payload, human)
    return 0


def _cmd_triad(args) -> int:
    forest = _load(args.file)
    triple = surgery_triple(forest, args.vertex)
    report = check_exactness(triple, box_cap=args.box_cap)
    payload = {
        "command": "triad",
        **_forest_json(forest),
        "vertex": args.vertex,
        "valid": triple.valid,
        "dims": list(report.dims),
        "b_surjective": report.b_surjective,
        "ba_zero": report.ba_zero,
        "ker_b_equals_im_a": report.ker_b_equals_im_a,
        "section_inverts_b": report.section_inverts_b,
        "exact": report.exact,
    }
    human = [
        f"triple at {args.vertex!r}: dims {report.dims}",
        f"composite vanishes: {report.ba_zero}",
        f"second map surjective: {report.b_surjective}",
        f"kernel equals image: {report.ker_b_equals_im_a}",
        f"section inverts: {report.section_inverts_b}",
        f"exact: {report.exact}",
    ]
    _emit(args, payload, human)
    return 0


def _cmd_blowdown(args) -> int:
    forest = _load(args.file)
    result = blow_down(forest, args.vertex, box_cap=args.box_cap)
    payload = {
        "command": "blowdown",
        **_forest_json(forest),
        "vertex": args.vertex,
        "result": _forest_json(result.forest),
        "dim_before": result.source.total_dim,
        "dim_after": result.target.total_dim,
        "class_map": [list(entry) for entry in result.class_map],
    }
    human = [
        f"blew down {args.vertex!r}: {len(forest)} -> {len(result.forest)} vertices",
        f"dimension {result.source.total_dim} preserved: "
        f"{result.source.total_dim == result.target.total_dim}",
        "result:",
        serialize_dsl(result.forest).rstrip(),
    ]
    _emit(args, payload, human)
    return 0


def _cmd_sfs(args) -> int:
    data = parse_sfs(args.sfs)
    conversion = seifert_to_plumbing(data)
    forest = conversion.forest
    seifert_payload = {
        "e0": data.e0,
        "legs": [list(leg) for leg in data.legs],
        "normalized_e0": conversion.used.e0,
        "normalized_legs": [list(leg) for leg in conversion.used.legs],
        "reversed_orientation": conversion.reversed_orientation,
        "euler_number": _frac(conversion.euler),
        "h1_order": conversion.h1_order,
        "plumbing": _forest_json(forest),
    }
    human = [
        f"star plumbing with {len(forest)} vertices"
        + (" (orientation reversed)" if conversion.reversed_orientation else ""),
        f"euler number {_frac(conversion.euler)}, |H1| = {conversion.h1_order}",
    ]
    if args.action == "info":
        payload = {"command": "sfs", "seifert": seifert_payload, **_forest_json(forest)}
        human.append(serialize_dsl(forest).rstrip())
        _emit(args, payload, human)
        return 0
    if args.action == "homology":
        result = compute_homology(forest, box_cap=args.box_cap)
        certified = _certified_almost_rational(forest, args.point_cap)
        payload = {
            "command": "sfs",
            "seifert": seifert_payload,
            **_homology_json(result, certified),
            "certified_almost_rational": certified,
        }
        dims = payload["derived"]
        human.append(
            f"total_dim: {result.total_dim}  |det|: {result.det_abs}  "
            f"dim I# = {dims['dim_isharp']}"
            + ("  [conjectural]" if dims["conjectural"] else "")
        )
        _emit(args, payload, human)
        return 0
    if args.action == "hplus":
        report = ker_u_cross_check(forest, point_cap=args.point_cap, box_cap=args.box_cap)
        payload = {
            "command": "sfs",
            "seifert": seifert_payload,
            "cross_check_ok": report.ok,
            "per_orbit": [
                {
                    "orbit": row.orbit.index,
                    "homology_dim": row.homology_dim,
                    "ker_u_rank": row.ker_u_rank,
                }
                for row in report.rows
            ],
        }
        human.append(f"cross-check: {'OK' if report.ok else 'MISMATCH'}")
        _emit(args, payload, human)
        return 0
    # classify
    report = full_report(
        forest, nmax=args.nmax, box_cap=args.box_cap, point_cap=args.point_cap
    )
    payload = {
        "command": "sfs",
        "seifert": seifert_payload,
        "negdef": report.negdef,
        "bad_vertex_count": report.bad_vertex_count,
        "rational": report.rational.rational if report.rational else None,
        "dim_h": report.dim_h,
        "dim_isharp": report.dims.dim_isharp if report.dims else None,
        "is_instanton_lspace": (
            report.dims.is_instanton_lspace if report.dims else None
        ),
    }
    human.append(
        f"rational: {report.rational.rational if report.rational else None}, "
        f"dim H = {report.dim_h}, dim I# = {report.dims.dim_isharp if report.dims else None}"
    )
    _emit(args, payload, human)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="plumblat", description=__doc__)
    parser.add_argument("--version", action="version", version=f"plumblat {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine output")
    common.add_argument(
        "--box-cap", type=int, default=DEFAULT_BOX_CAP, help="box size budget"
    )
    common.add_argument(
        "--point-cap", type=int, default=DEFAULT_POINT_CAP, help="sweep point budget"
    )
    common.add_argument(
        "--nmax", type=int, default=DEFAULT_NMAX, help="framing decrement cutoff"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, handler, needs_vertex in (
        ("info", _cmd_info, False),
        ("homology", _cmd_homology, False),
        ("hplus", _cmd_hplus, False),
        ("classify", _cmd_classify, False),
        ("triad", _cmd_triad, True),
        ("blowdown", _cmd_blowdown, True),
    ):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("file", help="plumbing DSL file")
        if needs_vertex:
            p.add_argument("--vertex", required=True, help="vertex id")
        p.set_defaults(handler=handler)

    p = sub.add_parser("sfs", parents=[common])
    p.add_argument("--sfs", required=True, help='Seifert data "e0; a1/b1 a2/b2 ..."')
    p.add_argument(
        "action",
        nargs="?",
        default="homology",
        choices=["info", "homology", "hplus", "classify"],
    )
    p.set_defaults(handler=_cmd_sfs)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except PlumblatError as exc:
        sys.stderr.write(f"plumblat: error: {exc}\n")
        return exc.exit_code
    except FileNotFoundError as exc:
        sys.stderr.write(f"plumblat: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
