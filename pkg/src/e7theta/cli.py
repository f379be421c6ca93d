"""Command-line entry point: ``e7theta <command> <action> [options]``.

Every run builds a JSON certificate; the plain-text output is printed from it.
Exit codes: 0 pass, 1 a check failed, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from . import acceptance
from . import invariants as inv
from . import kernels
from . import lattice as lat
from . import symplectic as sym
from . import torus
from . import weyl
from .errors import BudgetError, E7ThetaError, RetryBudgetExceeded

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def _form_cap() -> int:
    return int(os.environ.get("E7THETA_MAX_FORM_GENUS", sym.MAX_FORM_GENUS))


def _group_cap() -> int:
    return int(os.environ.get("E7THETA_MAX_GROUP_GENUS", sym.MAX_GROUP_GENUS))


# -- sympl -------------------------------------------------------------------------------


def cmd_sympl(args) -> tuple[dict, bool]:
    g = args.g
    if args.action == "enum":
        c = sym.enumerate_forms(g, cap=_form_cap())
        return {"g": g, "forms": len(c.forms), "odd": c.odd, "even": c.even}, True
    if args.action == "order":
        res = {"g": g, "formula": sym.sp_order(g)}
        if g <= _group_cap():
            res["enumerated"] = len(sym.symplectic_bases_array(g, cap=_group_cap()))
        return res, res.get("enumerated", res["formula"]) == res["formula"]
    if args.action == "aronhold":
        std = sym.standard_aronhold_basis(g)
        res = {"g": g, "arf": sym.aronhold_arf(g), "standard_basis": [q.to_hex() for q in std.forms]}
        ok = True
        if args.verify:
            if g <= 2:
                t = acceptance._torsor_exhaustive(g)
                res["torsor"] = t
                ok = t["free"] and t["transitive"]
            else:
                if g > _group_cap():
                    raise BudgetError(f"verification enumerates Sp_{2 * g}(2); capped at g <= {_group_cap()}")
                count = kernels.count_aronhold_tuples(g)
                res["aronhold_tuples"] = count
                res["sp_order"] = sym.sp_order(g)
                ok = count == sym.sp_order(g)
        return res, ok
    if args.action == "convert":
        bases = sym.symplectic_bases_array(g, cap=_group_cap())
        diags, nfound = kernels.aronhold_lift(bases, g)
        back = kernels.symplectic_from_aronhold(diags, g)
        res = {
            "g": g,
            "bases": len(bases),
            "unique_lifts": bool(np.all(nfound == 1)),
            "round_trip": bool(np.array_equal(back, bases)),
        }
        return res, res["unique_lifts"] and res["round_trip"]
    raise ConfigError(f"unknown action {args.action!r}")


# -- lattice -----------------------------------------------------------------------------


def _check_degree(d: int):
    if not 1 <= d <= 7:
        raise ConfigError(f"degree must lie in 1..7, got {d}")


def cmd_lattice(args) -> tuple[dict, bool]:
    d = args.degree
    _check_degree(d)
    if args.action == "roots":
        r = lat.roots(d)
        blind = {x.coords for x in lat.roots_blind(d)}
        res = {
            "degree": d,
            "roots": len(r),
            "template_equals_blind": {x.coords for x in r} == blind,
            "simple_roots": [list(a.coords) for a in lat.simple_roots(d)],
            "list": lat.tag_records(r, lat.root_labels(d)),
        }
        return res, res["template_equals_blind"]
    if args.action == "exceptional":
        if d == 1:
            raise ConfigError("exceptional classes are provided for degrees 2..7")
        e = lat.exceptional_classes(d)
        res = {"degree": d, "exceptional": len(e), "list": lat.tag_records(e, lat.exceptional_labels(d))}
        if d == 2:
            res["pairs"] = len(lat.bitangent_pairs())
            res["bitangent_pairs"] = [list(p) for p in lat.bitangent_pairs()]
        return res, True
    if args.action == "quotient":
        if d != 2:
            raise ConfigError("the mod-2 quotient is provided for degree 2")
        q = lat.orthogonal_complement_mod2(2)
        res = {
            "dimension": q.space.dim,
            "radical": [list(v.coords) for v in q.radical],
            "e_lifts": [list(v.coords) for v in q.e_lifts],
            "f_lifts": [list(v.coords) for v in q.f_lifts],
            "root_images_nonzero": all(q.reduce(r) for r in lat.roots(2)),
            "identification": weyl.identification_table(),
        }
        return res, res["root_images_nonzero"] and len(q.radical) == 1
    raise ConfigError(f"unknown action {args.action!r}")


# -- weyl --------------------------------------------------------------------------------


def cmd_weyl(args) -> tuple[dict, bool]:
    a = args.action
    if a == "order":
        res = {"orbit_stabilizer": weyl.weyl_order_schreier_sims(2)}
        if args.full:
            res["full_closure"] = weyl.enumerate_group(budget=args.budget).order
        vals = set(res.values())
        return res, vals == {weyl.W_E7_ORDER}
    if a == "split-check":
        fast = weyl.split_check_orbit_stabilizer()
        res = {"orbit_stabilizer": fast}
        ok = fast["kernel_size"] == 2 and fast["mod2_image_order"] == 1451520 and fast["iota_central"]
        if args.full:
            r = weyl.split_check(weyl.enumerate_group(budget=args.budget))
            res["full_closure"] = {k: v for k, v in r._asdict().items() if k != "kernel"}
            ok &= r.kernel_is_identity_and_iota and r.image_order == 1451520 and r.splitting_injective
        return res, ok
    if a == "bitangents":
        cyc = [weyl.bitangent_action(weyl.reflection(r)).cycle_type() for r in lat.roots(2)]
        els = weyl.random_elements(args.trials, args.seed)
        agree = sum(weyl.bitangent_action(w) == weyl.bitangent_action_via_forms(w) for w in els)
        res = {
            "reflection_cycle_types": sorted({json.dumps(c) for c in cyc}),
            "agreement": f"{agree}/{len(els)}",
            "identification": weyl.identification_table(),
        }
        return res, agree == len(els) and all(c == {1: 16, 2: 6} for c in cyc)
    if a == "frame":
        f = weyl.find_orthogonal_frame()
        res = {**f.to_json(), "product_is_iota": f.product() == weyl.geiser_involution()}
        return res, res["product_is_iota"]
    if a == "abelian-report":
        rep = weyl.abelian_action_report()
        res = {
            "frame": weyl.find_orthogonal_frame().to_json(),
            "conjugacy_type": rep.conjugacy_type,
            "orbit_sizes": rep.orbit_sizes,
            "transposition_matrix": rep.transposition_matrix,
            "report": rep.to_json(),
        }
        return res, rep.verify()
    if a == "hyperelliptic":
        if not 1 <= args.g <= 3:
            raise ConfigError(f"g must lie in 1..3, got {args.g}")
        c = weyl.hyperelliptic_census(args.g)
        rep = weyl.hyperelliptic_abelian_report(args.g)
        res = {**c, "report": rep.to_json(), "transposition_matrix": rep.transposition_matrix}
        return res, c["homomorphism_on_generators"] and rep.verify()
    raise ConfigError(f"unknown action {a!r}")


# -- inv ---------------------------------------------------------------------------------


def _check_inv_degree(d: int, cap: int):
    if not 0 <= cap <= inv.DEGREE_CAP:
        raise ConfigError(f"--degree-cap must lie in 0..{inv.DEGREE_CAP}, got {cap}")
    if not 0 <= d <= cap:
        raise ConfigError(f"degree must lie in 0..{cap}, got {d}")


def cmd_inv(args) -> tuple[dict, bool]:
    a = args.action
    if a == "tables":
        return {"tables": [inv.SP6_TABLE.to_json(), inv.WE7_TABLE.to_json()], "mode": inv.COEFFICIENT_MODE}, True
    if a == "perm-sw":
        d = args.degree
        _check_inv_degree(d, args.degree_cap)
        if args.source == "weyl":
            rep = weyl.abelian_action_report()
        else:
            if not 1 <= args.g <= 3:
                raise ConfigError(f"g must lie in 1..3, got {args.g}")
            rep = weyl.hyperelliptic_abelian_report(args.g)
        pieces = inv.sw_total_of_perm_rep(rep, cap=inv.DEGREE_CAP)
        forms = [inv.ExteriorPolynomial.linear(r) for r in rep.flattened_matrix]
        if forms and d <= len(forms):
            sigma = inv.elementary_symmetric(d, forms)
        else:
            sigma = inv.ExteriorPolynomial.one(rep.n_generators) if d == 0 else inv.ExteriorPolynomial.zero(rep.n_generators)
        res = {
            "source": args.source,
            "degree": d,
            "generators": rep.n_generators,
            "class": pieces[d].to_json(),
            "text": str(pieces[d]),
            "matches_sigma_of_rows": pieces[d] == sigma,
            "mode": inv.COEFFICIENT_MODE,
        }
        return res, res["matches_sigma_of_rows"]
    if a == "pullback":
        d = args.degree
        _check_inv_degree(d, args.degree_cap)
        if not args.matrix:
            raise ConfigError("--matrix is required")
        try:
            rows = json.loads(Path(args.matrix).read_text())
            c = inv._as_matrix(rows)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read matrix: {exc}") from exc
        forms = [inv.ExteriorPolynomial.linear(r) for r in c.tolist()]
        if d > len(forms):
            poly = inv.ExteriorPolynomial.zero(c.shape[1])
        else:
            poly = inv.elementary_symmetric(d, forms)
            if poly != inv.elementary_symmetric(d, forms, method="subsets"):
                return {"degree": d, "error": "expansion paths disagree"}, False
        return {"degree": d, "class": poly.to_json(), "text": str(poly), "mode": inv.COEFFICIENT_MODE}, True
    if a == "certificate":
        return inv.sp6_pullback_certificate(), True
    raise ConfigError(f"unknown action {a!r}")


# -- torus -------------------------------------------------------------------------------


def cmd_torus(args) -> tuple[dict, bool]:
    a = args.action
    p = args.prime
    try:
        torus.check_prime(p, need_cube_roots=a != "sample")
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if a == "sample":
        chi, stats = torus.sample_torus_point(p, args.seed, args.max_retries)
        return {**chi.to_json(), "seed": args.seed, "stats": stats.to_json()}, True
    if a == "verify":
        chi, stats = torus.sample_torus_point(p, args.seed, args.max_retries)
        cfg = torus.points_from_torus(chi)
        cert = torus.general_position_check(cfg)
        return {"chi": chi.to_json(), "configuration": cfg.to_json(cert)}, cert["passed"]
    if a == "experiment":
        if args.trials < 0:
            raise ConfigError("trials must be nonnegative")
        res = torus.torus_equivalence_experiment(p, args.trials, args.seed)
        return res, not res["failures"]
    raise ConfigError(f"unknown action {a!r}")


# -- report-all --------------------------------------------------------------------------


def cmd_report_all(args) -> tuple[dict, bool]:
    results = acceptance.run_all(inject_fault=args.inject_fault)
    failing = [r.number for r in results if not r.passed]
    return {
        "criteria": [r.to_json() for r in results],
        "failing": failing,
        "failing_names": [r.name for r in results if not r.passed],
    }, not failing


COMMANDS = {
    "sympl": (cmd_sympl, ["enum", "order", "aronhold", "convert"]),
    "lattice": (cmd_lattice, ["roots", "exceptional", "quotient"]),
    "weyl": (cmd_weyl, ["order", "split-check", "bitangents", "frame", "abelian-report", "hyperelliptic"]),
    "inv": (cmd_inv, ["perm-sw", "pullback", "tables", "certificate"]),
    "torus": (cmd_torus, ["sample", "verify", "experiment"]),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the certificate as JSON")
    common.add_argument("--out", help="also write the certificate to this file")
    common.add_argument("--g", type=int, default=3, help="genus")
    common.add_argument("--degree", type=int, default=2, help="del Pezzo degree, or polynomial degree for inv")
    common.add_argument("--prime", type=int, default=101)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--trials", type=int, default=200)
    common.add_argument("--degree-cap", type=int, default=inv.DEGREE_CAP)
    common.add_argument("--budget", type=int, default=weyl.DEFAULT_GROUP_BUDGET, help="element budget for group closure")
    common.add_argument("--max-retries", type=int, default=torus.DEFAULT_MAX_RETRIES)

    parser = argparse.ArgumentParser(prog="e7theta", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, actions) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("action", choices=actions)
        if name == "sympl":
            sp.add_argument("--verify", action="store_true")
        if name == "weyl":
            sp.add_argument("--full", action="store_true", help="also run the full group closure")
        if name == "inv":
            sp.add_argument("--source", choices=["weyl", "hyperelliptic"], default="weyl")
            sp.add_argument("--matrix", help="JSON file with an F2 matrix (list of rows)")
    ra = sub.add_parser("report-all", parents=[common])
    ra.add_argument("--inject-fault", type=int, default=None, metavar="N", help="test hook: force criterion N to fail")
    return parser


def _to_jsonable(x):
    if isinstance(x, dict):
        return {str(k): _to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_to_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return _to_jsonable(x.tolist())
    return x


def make_certificate(argv: list[str], command: str, results: dict, passed: bool, seconds: float) -> dict:
    frame = weyl.find_orthogonal_frame() if command in ("weyl", "inv", "report-all") else None
    return {
        "version": __version__,
        "command": argv,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "results": _to_jsonable(results),
        "provenance": {
            "coefficient_mode": inv.COEFFICIENT_MODE,
            "frame": frame.to_json()["root_indices"] if frame else None,
            "identification": "odd form q_E(x) = x.x/2 + x.E mod 2 on the K-orthogonal lattice mod 2",
            "numba": kernels.use_numba(),
            "seconds": round(seconds, 3),
        },
        "summary": {"passed": bool(passed), "exit_code": EXIT_PASS if passed else EXIT_FAIL},
    }


def _render_items(d: dict, lines: list[str], indent: str):
    for k, v in d.items():
        if isinstance(v, dict) and not indent and len(json.dumps(v)) > 120:
            lines.append(f"{k}:")
            _render_items(v, lines, "  ")
            continue
        if isinstance(v, (list, dict)) and len(json.dumps(v)) > 120:
            v = f"<{type(v).__name__} of {len(v)} entries; use --json>"
        lines.append(f"{indent}{k}: {v}")


def render_text(cert: dict) -> str:
    lines = [f"e7theta {cert['version']}: {' '.join(cert['command'])}"]
    res = cert["results"]
    if "criteria" in res:
        for c in res["criteria"]:
            mark = "PASS" if c["passed"] else "FAIL"
            lines.append(f"[{mark}] {c['number']:2d} {c['name']} ({c['seconds']:.2f}s)")
    else:
        _render_items(res, lines, "")
    lines.append("result: " + ("pass" if cert["summary"]["passed"] else "FAIL"))
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    t = time.perf_counter()
    try:
        if args.command == "report-all":
            results, passed = cmd_report_all(args)
        else:
            results, passed = COMMANDS[args.command][0](args)
    except (ConfigError, BudgetError, RetryBudgetExceeded, E7ThetaError, ValueError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        if isinstance(exc, RetryBudgetExceeded):
            err["error"]["stats"] = exc.stats
        print(json.dumps(err, indent=2) if args.json else f"error: {exc}", file=sys.stdout if args.json else sys.stderr)
        return EXIT_CONFIG
    cert = make_certificate(argv, args.command, results, passed, time.perf_counter() - t)
    text = json.dumps(cert, indent=2, sort_keys=False)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text if args.json else render_text(cert))
    return EXIT_PASS if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
