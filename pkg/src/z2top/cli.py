"""Command-line entry point.

Subcommands ingest JSON scenes, families, complexes or correspondence
instances, dispatch to the library, and emit JSON reports (plus optional
SVG figures).  Reports embed the configuration, tool version and the
hypothesis checks of the module that produced them; runs are deterministic
for a fixed config and seed.

Exit codes: 0 success, 2 parse error, 3 inconclusive resolution,
4 hypothesis violated.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .bu import family_from_csv, family_from_json, solve_bu, spanning_check
from .chords import chord_span_check, scene_from_json
from .corrlab import gamma_close, gamma_far, instance_from_json, spanning_empirical
from .homology import fundamental_class, homology, is_h_essential
from .simplicial import InvalidComplexError, SimplicialMap, SimplicialPair
from .symsq import diagonal_neighborhood, sym_square_class, sym_square_space

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INCONCLUSIVE = 3
EXIT_HYPOTHESIS = 4

COMMANDS = ("homology", "essential", "symsquare", "bu-solve", "chords", "corr")

KNOWN_KEYS = {
    "homology": {"vertices", "simplices", "sub"},
    "essential": {"source", "target", "vertex_map", "degree"},
    "symsquare": {"vertices", "simplices", "sub", "level", "rings"},
    "bu-solve": {
        "type", "w_model", "w_res", "sphere_res", "values", "boxes", "tol",
        "closure_cells", "family", "res",
    },
    "chords": {"polygons", "boundary_values", "grid", "dir_res", "tol"},
    "corr": {"K", "script_L", "payoff_box", "F", "U", "grid_res", "mode"},
}


class ConfigError(ValueError):
    pass


def _load_json(path: str, command: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ConfigError(str(exc)) from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    unknown = set(doc) - KNOWN_KEYS[command]
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    return doc


def _emit(report: dict, out: Optional[str]) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _base_report(args, command: str) -> dict:
    return {
        "tool": "z2top",
        "version": __version__,
        "command": command,
        "config": {
            "input": args.input,
            "res": args.res,
            "eps": args.eps,
            "seed": args.seed,
            "feature_n2": bool(args.feature == "n2"),
        },
    }


def cmd_homology(args) -> int:
    doc = _load_json(args.input, "homology")
    pair = SimplicialPair.from_json_dict(doc)
    flat = pair.all_simplices()
    pos = {s: i for i, s in enumerate(flat)}
    degrees = {}
    for k in range(pair.dim + 1):
        basis = homology(pair, k)
        degrees[str(k)] = {
            "rank": basis.rank,
            "representatives": [
                sorted(pos[s] for s in rep.simplices) for rep in basis.representatives
            ],
        }
    report = _base_report(args, "homology")
    report["homology"] = degrees
    report["hypothesis"] = {
        "valid_complex": True,
        "detail": "simplex list face-closed, sub a face-closed subcomplex",
    }
    _emit(report, args.out)
    return EXIT_OK


def cmd_essential(args) -> int:
    doc = _load_json(args.input, "essential")
    source = SimplicialPair.from_json_dict(doc["source"])
    target = SimplicialPair.from_json_dict(doc["target"])
    f = SimplicialMap(source, target, doc["vertex_map"])
    res = is_h_essential(f, doc.get("degree"))
    report = _base_report(args, "essential")
    report["essential"] = {
        "verdict": res.essential,
        "degree": res.degree,
        "reason": res.reason,
        "witness": sorted(sorted(s) for s in res.witness.simplices) if res.witness else None,
    }
    report["hypothesis"] = {
        "pair_map": True,
        "detail": "source subcomplex equals the preimage of the target subcomplex",
    }
    _emit(report, args.out)
    return EXIT_OK


def cmd_symsquare(args) -> int:
    doc = _load_json(args.input, "symsquare")
    pair = SimplicialPair.from_json_dict(
        {k: doc[k] for k in ("vertices", "simplices", "sub") if k in doc}
    )
    alpha = fundamental_class(pair)
    kwargs = {}
    if "rings" in doc:
        kwargs["rings"] = int(doc["rings"])
    if "level" in doc:
        model = sym_square_space(pair, int(doc["level"]))
        nbhd = diagonal_neighborhood(model, kwargs.get("rings", 4))
        sq = sym_square_class(alpha, neighborhood=nbhd)
    else:
        sq = sym_square_class(alpha, **kwargs)
    home = sq.cls.home
    basis = homology(home, sq.cls.degree)
    coords = basis.coordinates(sq.cls)
    report = _base_report(args, "symsquare")
    report["symsquare"] = {
        "level": sq.model.level,
        "quotient": sq.model.quotient.to_json_dict(),
        "proj": sq.model.proj_table(),
        "degree": sq.cls.degree,
        "squared_cycle": sorted(sorted(s) for s in sq.cls.simplices),
        "group_rank": basis.rank,
        "nonzero": bool(coords and not coords.is_zero()),
        "hypothesis": {"smallness": True, "neighborhood_rings": sq.neighborhood.rings},
    }
    _emit(report, args.out)
    return EXIT_OK


def cmd_bu_solve(args) -> int:
    if args.feature == "n2":
        doc = _load_json(args.input, "bu-solve")
        doc = doc.get("family", doc)
        if doc.get("type") != "s2_function_samples":
            raise ConfigError("--feature n2 expects type 's2_function_samples'")
        from .bu import solve_bu_s2_values

        flags = solve_bu_s2_values(doc["values"])
        report = _base_report(args, "bu-solve")
        report["bu"] = {
            "fibers": "S^2 (cubical)",
            "flagged": len(flags),
            "cells": [list(c) for c in flags[:200]],
            "nonempty": bool(flags),
            "hypothesis": {"kind": "graph_family", "satisfied": True},
        }
        _emit(report, args.out)
        return EXIT_OK
    if args.input.endswith(".csv"):
        if args.res is None:
            raise ConfigError("CSV families need --res W_RES,SPHERE_RES and --w-model")
        w_res, sphere_res = (int(x) for x in args.res.split(","))
        fam = family_from_csv(
            Path(args.input).read_text(), args.w_model, w_res, sphere_res, args.eps
        )
    else:
        doc = _load_json(args.input, "bu-solve")
        doc = doc.get("family", doc)
        if args.eps is not None:
            doc["tol"] = args.eps
        fam = family_from_json(doc)
    sol = solve_bu(fam)
    rep = spanning_check(sol, fam)
    report = _base_report(args, "bu-solve")
    report["bu"] = rep.to_json_dict()
    report["bu"]["flagged"] = len(sol.cells)
    report["bu"]["components"] = len(sol.components())
    if args.svg:
        from .svgplot import solution_slice_svg

        Path(args.svg).write_text(solution_slice_svg(sol))
    _emit(report, args.out)
    if rep.status == "inconclusive_refine":
        return EXIT_INCONCLUSIVE
    if not rep.hypothesis.get("satisfied", True):
        return EXIT_HYPOTHESIS
    return EXIT_OK


def cmd_chords(args) -> int:
    doc = _load_json(args.input, "chords")
    if args.res is not None:
        n = int(args.res)
        doc["grid"] = {"nx": n, "ny": n}
    if args.eps is not None:
        doc["tol"] = args.eps
    scene = scene_from_json(doc)
    rep = chord_span_check(scene)
    report = _base_report(args, "chords")
    report["chords"] = rep.to_json_dict()
    if args.svg:
        from .svgplot import chord_overlay_svg

        Path(args.svg).write_text(chord_overlay_svg(scene, rep))
    _emit(report, args.out)
    if rep.status == "hypothesis_violated":
        return EXIT_HYPOTHESIS
    return EXIT_OK


def cmd_corr(args) -> int:
    doc = _load_json(args.input, "corr")
    inst = instance_from_json(doc)
    if inst["mode"] == "far":
        gamma = gamma_far(inst["F"], inst["U"], inst["K"], inst["script_L"], inst["grid_res"])
    elif inst["mode"] == "close":
        gamma = gamma_close(inst["F"], inst["K"], inst["script_L"], inst["grid_res"])
    else:
        raise ConfigError(f"unknown corr mode {inst['mode']!r}")
    verdict = spanning_empirical(gamma)
    report = _base_report(args, "corr")
    report["corr"] = {
        "mode": inst["mode"],
        "flags": gamma.flags,
        "fibers": {
            ",".join(str(v) for v in y): [
                [[str(c) for c in p] for p in hull.points] for hull in hulls
            ]
            for y, hulls in sorted(gamma.fibers.items())
        },
        "verdict": {
            "spans": verdict.spans,
            "label": verdict.label,
            "detail": verdict.detail,
        },
    }
    _emit(report, args.out)
    if verdict.spans is None:
        return EXIT_INCONCLUSIVE
    if gamma.flags:
        return EXIT_HYPOTHESIS
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="z2top",
        description="mod-2 topology toolkit: homology, symmetric squaring, "
        "antipodal solution sets and spanning certification",
    )
    parser.add_argument("--version", action="version", version=f"z2top {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("homology", cmd_homology),
        ("essential", cmd_essential),
        ("symsquare", cmd_symsquare),
        ("bu-solve", cmd_bu_solve),
        ("chords", cmd_chords),
        ("corr", cmd_corr),
    ):
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="input JSON (or CSV for bu-solve)")
        p.add_argument("--out", default=None, help="write the JSON report here")
        p.add_argument("--res", default=None, help="resolution override")
        p.add_argument("--eps", type=float, default=None, help="tolerance override")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized corpora")
        p.add_argument("--feature", default=None, choices=["n2"], help="feature flags")
        p.add_argument("--svg", default=None, help="write an SVG figure here")
        p.add_argument("--w-model", default="interval", choices=["point", "interval", "circle"])
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvalidComplexError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
