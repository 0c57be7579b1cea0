"""Command-line front end.

Exit codes: 0 success, 1 schema error, 2 hypothesis violated, 3 the closed
formula disagrees with the oracle.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .bsd import BSDError, assumption_check, predict_coprime, predict_main
from .engine import EngineError, HypothesisError, euler_char, projective_multiplicities
from .io import COMMANDS, SchemaError, check_version, load_json, parse_arithmetic, parse_cover, \
    parse_divisor, parse_lambda, parse_psi, shipped
from .oracle import bundle_from_divisor, verify_cover
from .psi import m_psi_w, ra, ra_closed_tame, rho_psi_valuation, rho_psi_valuation_from_class, \
    theta_multiplicities
from .suite import run_suite

EXIT_OK, EXIT_SCHEMA, EXIT_HYPOTHESIS, EXIT_MISMATCH = 0, 1, 2, 3

ANCHORS = {
    "euler-char": ["chi(E) = -rk[N(pi)] + [W_G(E)] + chi_k(E^G)[kG]",
                   "[N(pi)] = 1/|G| sum_w |P_w| sum_j j Ind M_w(j)",
                   "[W_G(E)] = sum_w |I_w|/|G| sum_i sum_{j<=l} Ind M_w(-j)"],
    "ra": ["m_psi,w(j) = sum_a dim T_psi[theta^(j p^a)]",
           "ra = 1/|G| sum_w sum_i (-|P_w| sum_j j m(-j) + |I_w| sum_{j<=l} m(j))",
           "-v = v(p) (s deg psi chi_k(E^G) + ra)"],
    "predict": ["vol exponent = dimA (1 - g_K - deg Z_1) + deg Lie",
                "log_p lo = ra of Lie(A_L)(-Z_L)",
                "chi_BSD = v(Reg) - r_alg v(|G|) + len Sha"],
    "verify-cover": ["Brauer(H^0) - Brauer(H^1) = chi(E)", "degree identity", "Mackey congruence",
                     "projectivity of H^0 + H^1"],
    "suite": ["Brauer(H^0) - Brauer(H^1) = chi(E)", "local freeness iff n = -1 mod |P_w|",
              "ra closed forms", "Mackey congruence", "degree identity"],
    "check-assumptions": ["torsion-freeness of A(L), A^t(L)", "local component groups",
                          "j not in L^p"],
}


class Mismatch(Exception):
    def __init__(self, result):
        super().__init__("verification mismatch")
        self.result = result


# ------------------------------------------------------------ commands

def cmd_euler_char(data: dict, args) -> dict:
    cover = parse_cover(data.get("cover"), "/cover")
    D = parse_divisor(cover, data.get("divisor", []), "/divisor")
    bundle = bundle_from_divisor(cover, D)
    chi = euler_char(cover.cover, bundle)
    mult = projective_multiplicities(chi)
    out = {"class": chi.to_json(), "dimension": str(chi.at_identity()),
           "deg_E": bundle.deg_E, "deg_EG": bundle.deg_EG, "chi_EG": bundle.chi(cover.cover.genus),
           "projective_multiplicities": None if mult is None else [m.to_json() for m in mult]}
    wild = [pl.label for pl in cover.cover.places if pl.datum.wild]
    if wild:
        out["stalk_shape"] = {"assumed": wild}
    return out


def cmd_ra(data: dict, args) -> dict:
    cover = parse_cover(data.get("cover"), "/cover")
    cd = cover.cover
    D = parse_divisor(cover, data.get("divisor", []), "/divisor")
    psi = parse_psi(cd.group, data.get("psi", "trivial"), "/psi")
    lam = parse_lambda(data.get("lambda"), cd.p)
    bundle = bundle_from_divisor(cover, D)
    val = ra(cd, bundle, psi)
    out = {"ra": val, "rho_valuation": rho_psi_valuation(cd, bundle, psi, lam),
           "rho_valuation_from_class": rho_psi_valuation_from_class(euler_char(cd, bundle), psi, cd.s, lam),
           "psi": psi.to_json()}
    local = []
    for pl in cd.places:
        mult = theta_multiplicities(psi, pl.datum)
        local.append({"point": pl.label, "theta_multiplicities": [mult[s] for s in sorted(mult)],
                      "m": [m_psi_w(psi, pl.datum, j, mult) for j in range(pl.datum.e)]})
    out["local"] = local
    if cd.is_tame() and psi.degree == 1:
        try:
            out["closed_form"] = str(ra_closed_tame(cd, bundle, psi))
        except HypothesisError as exc:
            out["closed_form"] = f"not applicable: {exc.assumption}"
    if out["rho_valuation"] != out["rho_valuation_from_class"]:
        raise Mismatch(out)
    return out


def _verify_entries(data: dict):
    for i, ent in enumerate(data.get("divisors", [])):
        loc = f"/divisors/{i}"
        if isinstance(ent, dict):
            yield loc, ent.get("divisor"), ent.get("engine_divisor")
        else:
            yield loc, ent, None


def cmd_verify_cover(data: dict, args) -> dict:
    cover = parse_cover(data.get("cover"), "/cover")
    expect = bool(data.get("expect_ew", True))
    reports = []
    for loc, div, eng in _verify_entries(data):
        D = parse_divisor(cover, div, loc if eng is None else f"{loc}/divisor")
        E = None if eng is None else parse_divisor(cover, eng, f"{loc}/engine_divisor")
        rep = verify_cover(cover, D, expect_ew=expect, engine_divisor=E)
        reports.append(rep)
    if not reports:
        raise SchemaError("/divisors", "need at least one divisor")
    out = {"reports": reports, "ok": all(r.get("ok", r.get("match") is None) for r in reports)}
    if not out["ok"]:
        raise Mismatch(out)
    return out


def cmd_suite(data: dict, args) -> dict:
    if "covers" not in data:
        raise SchemaError("/covers", "missing required field")
    for i, c in enumerate(data["covers"]):
        for key in ("id", "q", "generators"):
            if key not in c:
                raise SchemaError(f"/covers/{i}/{key}", "missing required field")
    out = run_suite(data, seed=args.seed, jobs=args.jobs)
    if not out["ok"]:
        raise Mismatch(out)
    return out


def cmd_predict(data: dict, args) -> dict:
    inp = parse_arithmetic(data.get("arithmetic"), "/arithmetic")
    mode = data.get("mode", "main")
    if mode not in ("main", "coprime"):
        raise SchemaError("/mode", "mode is 'main' or 'coprime'")
    pred = predict_main(inp) if mode == "main" else predict_coprime(inp)
    return {"mode": mode, "prediction": pred.to_json()}


def cmd_check_assumptions(data: dict, args) -> dict:
    sheet = data.get("sheet")
    if not isinstance(sheet, dict):
        raise SchemaError("/sheet", "missing required field")
    for key in ("ell", "p"):
        if key not in sheet:
            raise SchemaError(f"/sheet/{key}", "missing required field")
    return {"report": assumption_check(sheet)}


HANDLERS = {
    "euler-char": cmd_euler_char,
    "ra": cmd_ra,
    "verify-cover": cmd_verify_cover,
    "suite": cmd_suite,
    "predict": cmd_predict,
    "check-assumptions": cmd_check_assumptions,
}


# ------------------------------------------------------------ output

def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_jsonable) + "\n"


def render_table(report: dict) -> str:
    lines = [f"command  {report['command']}", f"status   {report['status']}"]
    res = report.get("result") or {}
    if report["command"] == "suite" and "summary" in res:
        for cid, ok in sorted(res["summary"].items()):
            lines.append(f"  {cid:<14} {'pass' if ok else 'FAIL'}")
    elif isinstance(res, dict):
        for k in sorted(res):
            v = res[k]
            text = json.dumps(v, sort_keys=True, default=_jsonable)
            if len(text) > 70:
                text = text[:67] + "..."
            lines.append(f"  {k:<26} {text}")
    if "error" in report:
        lines.append(f"error    {report['error']}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="eqrr", description="Equivariant Riemann-Roch and psi-part tools.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("input", nargs="?", help="case file (JSON); optional for 'suite'")
    ap.add_argument("-o", "--output", help="write the report here instead of stdout")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=("json", "table"), default="json")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--manifest", help="corpus manifest for 'suite' (default: the shipped corpus)")
    return ap


def execute(args: argparse.Namespace) -> tuple[int, dict]:
    report: dict = {"command": args.command, "seed": args.seed, "anchors": ANCHORS[args.command]}
    code = EXIT_OK
    try:
        if args.command == "suite" and args.input is None:
            data = load_json(args.manifest) if args.manifest else shipped("corpus.json")
        else:
            if args.input is None:
                raise SchemaError("/", "an input file is required")
            data = load_json(args.input)
        check_version(data)
        if "command" in data and data["command"] != args.command:
            raise SchemaError("/command", f"file is a {data['command']!r} case, not {args.command!r}")
        report["input"] = data
        report["result"] = HANDLERS[args.command](data, args)
        report["status"] = "ok"
    except SchemaError as exc:
        code = EXIT_SCHEMA
        report.update(status="schema-error", error=str(exc), location=exc.location)
    except HypothesisError as exc:
        code = EXIT_HYPOTHESIS
        report.update(status="hypothesis-violation", error=str(exc), assumption=exc.assumption)
    except Mismatch as exc:
        code = EXIT_MISMATCH
        report.update(status="mismatch", result=exc.result)
    except (EngineError, BSDError, ValueError) as exc:
        code = EXIT_SCHEMA
        report.update(status="invalid-input", error=str(exc), location="/")
    return code, report


def run(argv=None) -> tuple[int, dict]:
    return execute(build_parser().parse_args(argv))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    code, report = execute(args)
    text = render_table(report) if args.format == "table" else dumps(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code in (EXIT_SCHEMA, EXIT_HYPOTHESIS):
        print(f"eqrr: {report.get('error')}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
