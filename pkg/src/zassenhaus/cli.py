"""Command-line driver: single computations in L_p and the verification suites.

Every flag can also be set from the environment as ZASSENHAUS_<FLAG>, e.g.
ZASSENHAUS_P=7.  Exit status is 0 when everything passes, 2 on usage or
parse errors and 3 when a verification check fails.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .autgrp import AutomorphismGroup
from .field import FieldError
from .normalform import BadHead, NormalForms, ReductionIncomplete, REGULAR
from .penv import PEnvelope
from .spectral import Spectral
from .textio import (ParseError, certificate_to_json, env_to_json, format_env,
                     format_scalar, parse_env)
from .verify import SCHEMA, SUITES, RunConfig, run

ENV_PREFIX = "ZASSENHAUS_"
EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 2, 3


def _env(name, default, cast=int):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    return default if raw is None else cast(raw)


def _common() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--p", type=int, default=_env("p", 5), help="characteristic (prime > 3)")
    parent.add_argument("--n", type=int, default=_env("n", 2), help="O(1;n) has dimension p^n")
    parent.add_argument("--m", type=int, default=_env("m", None), help="work over F_{p^m} (default m = n)")
    parent.add_argument("--seed", type=int, default=_env("seed", 0))
    parent.add_argument("--report", choices=["json", "text"], default=_env("report", "json", str))
    parent.add_argument("--jobs", type=int, default=_env("jobs", 1), help="worker processes")
    parent.add_argument("--timing", action="store_true", default=bool(_env("timing", 0)),
                        help="add wall-clock seconds to verify reports")
    parent.add_argument("--samples", type=int, default=_env("samples", None),
                        help="override the sample count of randomized suites")
    return parent


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="zassenhaus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    p = add("bracket", "Lie bracket [A, B]")
    p.add_argument("a")
    p.add_argument("b")
    p = add("ppow", "D^[p^k]")
    p.add_argument("d")
    p.add_argument("k", type=int)
    p = add("jacobson", "check (D1 + D2)^[p] = D1^[p] + D2^[p] + sum s_i")
    p.add_argument("d1")
    p.add_argument("d2")
    p = add("reduce", "reduce to canonical form with a certificate")
    p.add_argument("d")
    p = add("classify", "NotNilpotent / Regular / SingularDeep / SingularFiltered")
    p.add_argument("d")
    p = add("centralizer", "basis of the centralizer of D")
    p.add_argument("d")
    p.add_argument("--ambient", choices=["l", "lp"], default="lp")
    add("ebasis", "regular toral h and the e_alpha basis")
    add("sigma", "the automorphism sigma and its eigenvalue multiplicities")
    add("lieg", "the basis of Lie(G)")
    p = add("verify", "run verification suites")
    p.add_argument("suites", nargs="+", choices=list(SUITES) + ["all"], metavar="suite",
                   help="one or more of: " + ", ".join(list(SUITES) + ["all"]))
    return parser


def _config(args) -> RunConfig:
    if args.jobs < 1:
        raise ValueError("--jobs must be at least 1")
    return RunConfig(p=args.p, n=args.n, m=args.m, seed=args.seed, jobs=args.jobs,
                     timing=args.timing, samples=args.samples)


# commands -----------------------------------------------------------------

def cmd_bracket(L, args):
    a, b = parse_env(L, args.a), parse_env(L, args.b)
    return {"result": env_to_json(L, L.bracket(a, b))}


def cmd_ppow(L, args):
    if args.k < 0:
        raise ValueError("k must be non-negative")
    D = parse_env(L, args.d)
    return {"k": args.k, "result": env_to_json(L, L.p_power(D, args.k))}


def cmd_jacobson(L, args):
    D1, D2 = parse_env(L, args.d1), parse_env(L, args.d2)
    s = L.jacobson_si(D1, D2)
    lhs = L.p_power(L.add(D1, D2))
    rhs = L.add(L.p_power(D1), L.p_power(D2))
    for si in s:
        rhs = L.add(rhs, si)
    return {"lhs": env_to_json(L, lhs), "rhs": env_to_json(L, rhs),
            "s": [format_env(L, si) for si in s], "holds": lhs == rhs}


def cmd_reduce(L, args):
    NF = NormalForms(L)
    D = parse_env(L, args.d)
    scale, cert = NF.canonical_form(D)
    out = {"scale": format_scalar(L.F, int(scale.y[1])), "certificate": certificate_to_json(L, cert)}
    if NF.classify(D).verdict == REGULAR:
        try:
            red = NF.reduce_regular(D)
            out["tail_form"] = env_to_json(L, red.output)
            out["levels"] = [list(level) for level in red.levels]
        except ReductionIncomplete as exc:
            out["tail_form_error"] = str(exc)
    return out


def cmd_classify(L, args):
    c = NormalForms(L).classify(parse_env(L, args.d))
    return {"verdict": c.verdict, "witness": env_to_json(L, c.witness)}


def cmd_centralizer(L, args):
    z = L.centralizer(parse_env(L, args.d), args.ambient)
    return {"ambient": args.ambient, "dimension": len(z), "basis": [format_env(L, b) for b in z]}


def _spectral(L):
    S = Spectral(L)
    return S, S.build_e_basis(S.find_regular_toral())


def cmd_ebasis(L, args):
    S, eb = _spectral(L)
    F = L.F
    return {"h": format_env(L, L.element(eb.h)), "xi": format_scalar(F, eb.xi),
            "valid": S.check_e_basis(eb),
            "e": {format_scalar(F, a): format_env(L, L.element(eb.e[a])) for a in eb.elements}}


def cmd_sigma(L, args):
    S, eb = _spectral(L)
    sd = S.sigma(eb)
    return {"xi": format_scalar(L.F, sd.xi),
            "multiplicities": {str(k): v for k, v in sorted(sd.multiplicities.items())},
            "automorphism": S.sigma_is_automorphism(sd), "order_ok": S.sigma_order_ok(sd),
            "filtration_scalars": S.sigma_filtration_scalars(sd)}


def cmd_lieg(L, args):
    G = AutomorphismGroup(L)
    idx = G.lieG_indices()
    return {"size": len(idx), "indices": idx,
            "basis": [format_env(L, b) for b in G.lieG_basis()],
            "tangent": all(G.tangent_check(i) for i in idx)}


COMMANDS = {
    "bracket": cmd_bracket, "ppow": cmd_ppow, "jacobson": cmd_jacobson,
    "reduce": cmd_reduce, "classify": cmd_classify, "centralizer": cmd_centralizer,
    "ebasis": cmd_ebasis, "sigma": cmd_sigma, "lieg": cmd_lieg,
}


# output -------------------------------------------------------------------

def _text_verify(report) -> str:
    lines = [f"config {json.dumps(report['config'], sort_keys=True)}"]
    for s in report["suites"]:
        secs = f" ({s['seconds']}s)" if "seconds" in s else ""
        lines.append(f"{s['suite']}: {s['status'].upper()}{secs}")
        for c in s["checks"]:
            lines.append(f"  {c['status']:4} {c['name']} {json.dumps(c['detail'], sort_keys=True)}")
    lines.append(f"overall: {report['status'].upper()}")
    return "\n".join(lines)


def _text_result(result, indent="") -> list[str]:
    lines = []
    for k, v in result.items():
        if isinstance(v, dict) and "text" in v:
            lines.append(f"{indent}{k}: {v['text']}")
        elif isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines += _text_result(v, indent + "  ")
        elif isinstance(v, list) and v and isinstance(v[0], str):
            lines.append(f"{indent}{k}:")
            lines += [f"{indent}  {x}" for x in v]
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{indent}{k}:")
            for x in v:
                lines.append(f"{indent}  - " + ", ".join(
                    f"{kk}={vv['text'] if isinstance(vv, dict) and 'text' in vv else vv}"
                    for kk, vv in x.items()))
        else:
            lines.append(f"{indent}{k}: {v}")
    return lines


_FLAT = re.compile(r"\[\s*(-?\d+(?:,\s*-?\d+)*)\s*\]")


def dumps(obj) -> str:
    """Indented JSON with innermost integer lists kept on one line."""
    text = json.dumps(obj, indent=2)
    while True:
        new = _FLAT.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",")) + "]", text)
        if new == text:
            return text
        text = new


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "verify":
            report = run(args.suites, cfg)
            text = _text_verify(report) if args.report == "text" else dumps(report)
            print(text)
            return EXIT_OK if report["status"] == "pass" else EXIT_VIOLATION
        L = PEnvelope(cfg.p, cfg.n, cfg.m)
        result = COMMANDS[args.command](L, args)
    except (ParseError, FieldError, BadHead, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.report == "text":
        print("\n".join(_text_result(result)))
    else:
        print(dumps({"schema": SCHEMA, "command": args.command,
                     "config": cfg.echo(), "result": result}))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
