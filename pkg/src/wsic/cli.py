"""Command-line front end.

Machine-readable JSON goes to stdout and is deterministic for fixed inputs,
budgets and flags (no timestamps, no absolute paths beyond what the caller
typed); human summaries and timings go to stderr.  Exit status: 0 on
success, 1 when --strict is set and a domain verdict fails (a leak, an
infeasible search, a failed construction, an inconclusive certificate),
2 on usage, parse, or budget errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from .codec import (
    LinearCode,
    SymbolicCodeword,
    check_sender_support,
    lift_codeword,
    verify_decodability,
    verify_weak_security,
)
from .construct import (
    SubCodeBundle,
    best_construction,
    bundle_from_search,
    construct_general,
    construct_iib,
    construct_iicd,
    construct_iie,
    construct_naive,
    make_bundle,
    search_tilde_codes,
)
from .errors import ConstructionFailure, ParseError, PreconditionError, WsicError
from .interaction import classify, interaction_digraph
from .model import TwoSenderInstance, canonical_obj, parse_instance, sub_instance
from .search import (
    DEFAULT_COMPLETION_BUDGET,
    DEFAULT_PAIR_BUDGET,
    SearchResult,
    certify_optimality,
    optimal_suicp,
    two_sender_bruteforce,
)

BUDGET_ENV = "WSIC_BUDGET"


def _env_budget(default: int) -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _load_instance(path: str) -> TwoSenderInstance:
    return parse_instance(_read_text(path))


def _load_code(path: str) -> LinearCode:
    try:
        obj = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"code document {path} is not valid JSON: {exc}") from exc
    return LinearCode.from_doc(obj)


def _load_codeword(path: Path, inst: TwoSenderInstance) -> SymbolicCodeword:
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"codeword document {path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or set(obj) - {"q", "m", "symbols"}:
        raise ParseError(f"{path}: codeword documents carry exactly q, m and symbols")
    if obj.get("q") != int(inst.q) or obj.get("m") != inst.m:
        raise ParseError(f"{path}: codeword document does not match the instance's q and m")
    symbols = obj.get("symbols")
    if not isinstance(symbols, list) or not all(isinstance(s, list) for s in symbols):
        raise ParseError(f"{path}: symbols must be an array of coefficient arrays")
    try:
        return SymbolicCodeword.from_vectors(inst.q, inst.m, symbols)
    except (ValueError, WsicError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _parse_part1(raw: str) -> frozenset[int]:
    raw = raw.strip()
    if not raw:
        return frozenset()
    try:
        return frozenset(int(tok) for tok in raw.split(","))
    except ValueError:
        raise ParseError(f"--part1 expects comma-separated integers, got {raw!r}") from None


def _instance_digest(inst: TwoSenderInstance) -> dict:
    canon = json.dumps(canonical_obj(inst), sort_keys=True, separators=(",", ":"))
    return {
        "m": inst.m,
        "q": int(inst.q),
        "sha256": hashlib.sha256(canon.encode("utf-8")).hexdigest(),
    }


def _interaction_dict(inst: TwoSenderInstance) -> dict:
    h = interaction_digraph(inst)
    return {
        "edges": [
            {"from": e.src, "to": e.dst, "participation": e.participation}
            for e in h.edges
        ]
    }


def _case_dict(inst: TwoSenderInstance) -> dict:
    label = classify(inst)
    return {
        "major": label.major,
        "subcase": label.subcase,
        "applicable": dict(sorted(label.applicable.items())),
    }


def _search_result_dict(res: SearchResult, inst, sub=None) -> dict:
    out = res.as_dict()
    if sub is not None:
        out["block"] = list(sub.label_map)
        if res.status == "OPTIMAL" and res.code is not None:
            lifted = lift_codeword(res.code, sub.label_map, inst.m)
            out["code"] = {
                "q": int(inst.q),
                "m": inst.m,
                "symbols": [list(s) for s in lifted.symbols],
            }
    return out


def _construction_dict(inst: TwoSenderInstance, code: LinearCode) -> dict:
    decode = verify_decodability(code, inst)
    security = verify_weak_security(code, inst.eaves)
    return {
        "status": "OK",
        "scheme": code.provenance,
        "length": code.length,
        "code": code.to_doc(),
        "verification": {"decodable": decode.all_decode, "secure": security.secure},
    }


def _bundle_from_dir(inst: TwoSenderInstance, dirpath: str) -> SubCodeBundle:
    base = Path(dirpath)
    parts = {}
    for name in ("c1", "c2", "c12"):
        path = base / f"{name}.json"
        if path.exists():
            parts[name] = _load_codeword(path, inst)
        else:
            parts[name] = SymbolicCodeword.empty(inst.q, inst.m)
    return make_bundle(inst, parts["c1"], parts["c2"], parts["c12"])


def _tilde_from_dir(inst: TwoSenderInstance, dirpath: str):
    base = Path(dirpath)
    out = []
    for name in ("ct1", "ct2"):
        path = base / f"{name}.json"
        if path.exists():
            out.append(_load_codeword(path, inst))
        else:
            out.append(SymbolicCodeword.empty(inst.q, inst.m))
    return out[0], out[1]


def _emit(report: dict, code_out: str | None = None) -> None:
    print(json.dumps(report, indent=2, sort_keys=True))
    if code_out:
        code = report.get("result", {}).get("construction", {}).get("code") or report.get(
            "result", {}
        ).get("code")
        if code is not None:
            Path(code_out).write_text(
                json.dumps(code, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# Subcommand bodies.  Each returns (result_dict, strict_failure).


def _cmd_classify(inst, args):
    case = _case_dict(inst)
    schemes = sorted(s for s, ok in case["applicable"].items() if ok)
    _say(f"classify: case {case['major']}"
         + (f"-{case['subcase']}" if case["subcase"] else "")
         + f", applicable schemes: {', '.join(schemes)}")
    return {"interaction": _interaction_dict(inst), "case": case}, False


def _cmd_verify(inst, args):
    code = _load_code(args.code)
    check_sender_support(code, inst)
    decode = verify_decodability(code, inst)
    security = verify_weak_security(code, inst.eaves)
    ok = decode.all_decode and security.secure
    _say(
        f"verify: {'all receivers decode' if decode.all_decode else 'some receivers cannot decode'}, "
        f"{'weakly secure' if security.secure else 'NOT weakly secure'}"
    )
    return (
        {
            "ok": ok,
            "decodable": decode.as_dict(),
            "security": security.as_dict(),
        },
        not ok,
    )


def _cmd_search(inst, args):
    if args.two_sender:
        budget = args.budget if args.budget is not None else _env_budget(DEFAULT_PAIR_BUDGET)
        res = two_sender_bruteforce(inst, l_max=args.lmax, budget=budget)
        _say(f"two-sender search: {res.status}"
             + (f", length {res.length}" if res.status == "OPTIMAL" else ""))
        payload = res.as_dict()
        if res.status == "OPTIMAL" and res.code is not None:
            split = res.s1_count
            payload["code"] = {
                "q": int(inst.q),
                "m": inst.m,
                "s1_rows": [list(s) for s in res.code.symbols[:split]],
                "s2_rows": [list(s) for s in res.code.symbols[split:]],
            }
        return {"two_sender": payload}, res.status != "OPTIMAL"

    budget = args.budget if args.budget is not None else _env_budget(DEFAULT_COMPLETION_BUDGET)
    wanted = ("1", "2", "12") if args.sub == "all" else (args.sub,)
    out = {}
    bad = False
    for name in wanted:
        sub = sub_instance(inst, name)
        res = optimal_suicp(sub, budget=budget, workers=args.workers)
        out[name] = _search_result_dict(res, inst, sub)
        bad = bad or res.status != "OPTIMAL"
        _say(f"sub-problem {name}: {res.status}"
             + (f", optimal length {res.length}" if res.status == "OPTIMAL" else ""))
    return {"subproblems": out}, bad


def _cmd_construct(inst, args):
    budget = args.budget if args.budget is not None else _env_budget(DEFAULT_COMPLETION_BUDGET)
    part1 = _parse_part1(args.part1) if args.part1 is not None else None

    try:
        if args.scheme == "general":
            chosen = part1 if part1 is not None else frozenset()
            if args.subcodes:
                ct1, ct2 = _tilde_from_dir(inst, args.subcodes)
            else:
                ct1, ct2 = search_tilde_codes(inst, chosen, budget, args.workers)
            code = construct_general(inst, chosen, ct1, ct2)
        else:
            if args.subcodes:
                bundle = _bundle_from_dir(inst, args.subcodes)
            else:
                bundle, _, diags = bundle_from_search(
                    inst, budget=budget, workers=args.workers
                )
                if bundle is None:
                    raise ConstructionFailure(
                        "no sub-codes exist for this instance", diags
                    )
            if args.scheme == "auto":
                options = (part1,) if part1 is not None else ()
                code = best_construction(
                    inst, bundle, part1_options=options, budget=budget, workers=args.workers
                )
            elif args.scheme == "naive":
                code = construct_naive(inst, bundle)
            elif args.scheme == "iib":
                code = construct_iib(inst, bundle)
            elif args.scheme == "iic":
                code = construct_iicd(inst, bundle, "C")
            elif args.scheme == "iid":
                code = construct_iicd(inst, bundle, "D")
            else:
                code = construct_iie(inst, bundle)
    except (ConstructionFailure, PreconditionError) as exc:
        _say(f"construct: FAILED ({exc})")
        payload = {"status": "FAILED", "error": str(exc)}
        if isinstance(exc, ConstructionFailure) and exc.diagnostics:
            payload["diagnostics"] = exc.diagnostics
        return {"construction": payload}, True
    _say(f"construct: scheme {code.provenance}, length {code.length}")
    return {"construction": _construction_dict(inst, code)}, False


def _cmd_certify(inst, args):
    code = _load_code(args.code)
    check_sender_support(code, inst)
    budget = args.budget if args.budget is not None else _env_budget(DEFAULT_COMPLETION_BUDGET)
    subresults = {}
    sub_payload = {}
    for name in ("1", "2", "12"):
        sub = sub_instance(inst, name)
        res = optimal_suicp(sub, budget=budget, workers=args.workers)
        subresults[name] = res
        sub_payload[name] = _search_result_dict(res, inst, sub)
    cert = certify_optimality(inst, code, subresults)
    _say(f"certify: {cert.verdict} (lower {cert.lower_bound}, upper {cert.upper_bound})")
    return (
        {"certificate": cert.as_dict(), "subproblems": sub_payload},
        cert.verdict != "OPTIMAL",
    )


def _cmd_pipeline(inst, args):
    budget = args.budget if args.budget is not None else _env_budget(DEFAULT_COMPLETION_BUDGET)
    part1 = _parse_part1(args.part1) if args.part1 is not None else None

    bundle, subresults, diags = bundle_from_search(inst, budget=budget, workers=args.workers)
    sub_payload = {
        name: _search_result_dict(subresults[name], inst, sub_instance(inst, name))
        for name in ("1", "2", "12")
    }
    result: dict = {
        "subproblems": sub_payload,
        "classification": {
            "interaction": _interaction_dict(inst),
            "case": _case_dict(inst),
        },
    }
    if bundle is None:
        result["construction"] = {"status": "FAILED", "diagnostics": diags}
        _say("pipeline: construction failed (infeasible sub-problem)")
        return result, True

    options = (part1,) if part1 is not None else ()
    try:
        code = best_construction(
            inst, bundle, part1_options=options, budget=budget, workers=args.workers
        )
    except ConstructionFailure as exc:
        result["construction"] = {"status": "FAILED", "diagnostics": exc.diagnostics}
        _say("pipeline: construction failed")
        return result, True
    result["construction"] = _construction_dict(inst, code)

    cert = certify_optimality(inst, code, subresults)
    result["certificate"] = cert.as_dict()
    _say(
        f"pipeline: scheme {code.provenance}, length {code.length}, verdict {cert.verdict}"
    )
    return result, cert.verdict != "OPTIMAL"


# ---------------------------------------------------------------------------
# Argument parsing and dispatch.


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsic",
        description="Weakly secure linear index codes for two-sender broadcast problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, workers=True, budget=True):
        p.add_argument("file", help="instance document (JSON)")
        p.add_argument("--strict", action="store_true",
                       help="exit 1 on insecure/infeasible/inconclusive verdicts")
        if budget:
            p.add_argument("--budget", type=int, default=None,
                           help=f"search budget (default from ${BUDGET_ENV} or built-in)")
        if workers:
            p.add_argument("--workers", type=int, default=1,
                           help="enumeration partitions; results are identical for any count")

    p = sub.add_parser("classify", help="interaction digraph and case label")
    common(p, workers=False, budget=False)

    p = sub.add_parser("verify", help="decodability and weak-security report for a code")
    common(p, workers=False, budget=False)
    p.add_argument("--code", required=True, help="code document (JSON)")

    p = sub.add_parser("search", help="exhaustive optimal-code searches")
    common(p)
    p.add_argument("--sub", choices=["1", "2", "12", "all"], default="all",
                   help="which sub-problem to search (default all)")
    p.add_argument("--two-sender", action="store_true",
                   help="structured brute force over two-sender codes instead")
    p.add_argument("--lmax", type=int, default=None,
                   help="largest codelength the two-sender search tries (default m)")

    p = sub.add_parser("construct", help="compose a two-sender code from sub-codes")
    common(p)
    p.add_argument("--scheme", choices=["auto", "general", "naive", "iib", "iic", "iid", "iie"],
                   default="auto")
    p.add_argument("--part1", default=None,
                   help="comma-separated common messages handed to sender 1 (general scheme)")
    p.add_argument("--subcodes", default=None,
                   help="directory of codeword documents (c1/c2/c12.json or ct1/ct2.json); "
                        "searched when absent")
    p.add_argument("--code-out", default=None, help="also write the bare code document here")

    p = sub.add_parser("certify", help="optimality certificate for a code")
    common(p)
    p.add_argument("--code", required=True, help="code document (JSON)")

    p = sub.add_parser("pipeline", help="search, classify, construct, certify in one run")
    common(p)
    p.add_argument("--part1", default=None,
                   help="extra common-block split for the general scheme")
    p.add_argument("--code-out", default=None, help="also write the bare code document here")

    return parser


_COMMANDS = {
    "classify": _cmd_classify,
    "verify": _cmd_verify,
    "search": _cmd_search,
    "construct": _cmd_construct,
    "certify": _cmd_certify,
    "pipeline": _cmd_pipeline,
}

# Arguments echoed into the report: the ones that select what is computed.
# Tuning knobs (--workers, --budget, --strict, --code-out) stay out so that
# reruns with different resource settings stay byte-identical.
_ECHO_ARGS = {
    "classify": (),
    "verify": ("code",),
    "search": ("sub", "two_sender", "lmax"),
    "construct": ("scheme", "part1", "subcodes"),
    "certify": ("code",),
    "pipeline": ("part1",),
}


def _command_echo(args) -> dict:
    echo = {"name": args.command, "file": args.file}
    for attr in _ECHO_ARGS[args.command]:
        value = getattr(args, attr)
        if value not in (None, False):
            echo[attr.replace("_", "-")] = value
    return echo


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.monotonic()
    try:
        inst = _load_instance(args.file)
        result, strict_failure = _COMMANDS[args.command](inst, args)
    except WsicError as exc:
        _say(f"error: {exc}")
        return 2
    report = {
        "command": _command_echo(args),
        "instance": _instance_digest(inst),
        "result": result,
    }
    _emit(report, getattr(args, "code_out", None))
    _say(f"{args.command} finished in {time.monotonic() - started:.3f}s")
    if strict_failure and args.strict:
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    return run(list(sys.argv[1:]) if argv is None else list(argv))


if __name__ == "__main__":
    sys.exit(main())
