"""Command-line interface.

Exit codes: 0 success, 1 a checked property failed (a witness is
reported), 2 usage or input error, 3 budget or limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .congr import (
    DEFAULT_CONGRUENCE_LIMIT,
    DEFAULT_SUBALGEBRA_LIMIT,
    cep_check,
    cg,
    con_lattice,
    minimal_generators,
)
from .errors import (
    BudgetExceeded,
    InputError,
    NotInVariety,
    PreconditionFailed,
    ResidualMissing,
    UnifintError,
    UnsupportedCase,
)
from .finalg import DEFAULT_BUDGET, free_algebra, load_algebra
from .interp import (
    VarietyEngine,
    dip_square_check,
    left_uniform_interpolant,
    maehara_residual_interpolant,
    right_uniform_interpolant,
    verify_left,
    verify_right,
)
from .terms import parse_equation_set

SCHEMA = "unifint/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("unifint")


@dataclass(frozen=True)
class RunConfig:
    budget: int
    limit: int
    seed: int
    format: str
    verbosity: int

    def __post_init__(self):
        if self.budget <= 0 or self.limit <= 0:
            raise InputError("budget and limit must be positive")


def resolve_budget(flag: int | None) -> int:
    """``--budget`` wins over ``UNIFINT_BUDGET``, which wins over the default."""
    if flag is not None:
        return flag
    env = os.environ.get("UNIFINT_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"UNIFINT_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


@dataclass
class Outcome:
    command: str
    payload: dict
    lines: list
    code: int = EXIT_OK


def emit_report(result: Outcome, config: RunConfig) -> str:
    """Render an outcome; JSON keys keep insertion order so reports are byte-stable."""
    if config.format == "json":
        doc = {"schema": SCHEMA, "command": result.command, "seed": config.seed, "exitCode": result.code}
        doc.update(result.payload)
        return json.dumps(doc, indent=2) + "\n"
    return "\n".join(result.lines) + "\n"


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str, allow_no_constants=False):
    try:
        return load_algebra(path, allow_no_constants)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _names(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()] if text else []


def _pass(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# --- alg ----------------------------------------------------------------------------


def cmd_alg_validate(args, cfg):
    A = _load(args.algebra, args.allow_no_constants)
    payload = {
        "name": A.name,
        "size": A.size,
        "signature": A.sig.to_json(),
        "valid": True,
    }
    return Outcome("alg validate", payload, [f"{A.name}: valid, size {A.size}", "signature: " + ", ".join(f"{s}/{k}" for s, k in A.sig.operations)])


def cmd_alg_free(args, cfg):
    G = _load(args.generator)
    F = free_algebra(G, _names(args.vars), cfg.budget)
    payload = {"vars": list(F.vars), "size": F.size, "witnesses": [str(w) for w in F.witnesses]}
    lines = [f"size {F.size}"] + [f"{i}: {w}" for i, w in enumerate(F.witnesses)]
    return Outcome("alg free", payload, lines)


def _parse_pairs(specs):
    out = []
    for s in specs or []:
        try:
            a, b = (int(t) for t in s.split(","))
        except ValueError:
            raise InputError(f"bad pair {s!r}; expected a,b") from None
        out.append((a, b))
    return out


def cmd_alg_cong(args, cfg):
    A = _load(args.algebra)
    pairs = _parse_pairs(args.pair)
    if pairs:
        for a, b in pairs:
            if not (0 <= a < A.size and 0 <= b < A.size):
                raise InputError(f"pair ({a},{b}) is outside 0..{A.size - 1}")
        theta = cg(A, pairs)
        gens = minimal_generators(A, theta)
        payload = {"blocks": theta.blocks(), "generators": [list(p) for p in gens]}
        return Outcome("alg cong", payload, [str(theta), "generators: " + " ".join(f"({a},{b})" for a, b in gens)])
    L = con_lattice(A, cfg.limit)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(L.to_dot())
    payload = L.to_json()
    flags = payload["flags"]
    lines = [f"{len(L)} congruences"] + [str(c) for c in L]
    lines.append(f"distributive: {flags['distributive']}")
    lines.append(f"dually Brouwerian: {flags['duallyBrouwerian']}")
    return Outcome("alg cong", payload, lines)


def cmd_alg_cep(args, cfg):
    A = _load(args.algebra)
    v = cep_check(A, limit=args.subalgebra_limit, exhaustive=args.exhaustive, congruence_limit=cfg.limit)
    payload = {"pass": v.ok, "exhaustive": args.exhaustive, "witness": None if v.ok else v.witness.to_json()}
    lines = [f"congruence extension: {_pass(v.ok)}"]
    if not v.ok:
        w = v.witness
        lines.append(f"subalgebra {list(w.subuniverse)}: {w.congruence} extends only to {w.extension}")
    return Outcome("alg cep", payload, lines, EXIT_OK if v.ok else EXIT_FAIL)


# --- interp ----------------------------------------------------------------------------


def _engine(args, cfg):
    return VarietyEngine(_load(args.variety), cfg.budget)


def _eqs(path, V):
    return parse_equation_set(_read(path), V.sig)


def _interp_outcome(name, res, lines, ver):
    payload = res.to_json()
    code = EXIT_OK
    if ver is not None:
        payload["verified"] = ver.to_json()
        lines.append(f"verification: {_pass(ver.passed)} ({ver.checked} checks)")
        if not ver.passed:
            lines.append(f"witness: {json.dumps(ver.witness)}")
            code = EXIT_FAIL
    return Outcome(name, payload, lines, code)


def cmd_interp_right(args, cfg):
    V = _engine(args, cfg)
    sigma = _eqs(args.sigma, V)
    res = right_uniform_interpolant(V, sigma, _names(args.eliminate))
    ver = None
    if args.verify:
        method = "free" if args.method == "auto" else args.method
        try:
            ver = verify_right(V, sigma, res, args.fresh, method=method)
        except BudgetExceeded:
            if args.method != "auto":
                raise
            log.info("free-algebra verification exceeds the budget; evaluating in the generator")
            ver = verify_right(V, sigma, res, args.fresh, method="semantic")
    lines = [f"Pi over {', '.join(res.pi.vars) or '(none)'}:"] + [f"  {e}" for e in res.pi]
    if not res.pi.equations:
        lines.append("  (empty)")
    return _interp_outcome("interp right", res, lines, ver)


def cmd_interp_left(args, cfg):
    V = _engine(args, cfg)
    delta = _eqs(args.delta, V)
    res = left_uniform_interpolant(V, delta, _names(args.eliminate))
    if not res:
        payload = res.to_json()
        lines = ["no left uniform interpolant at Delta", "candidate:"] + [f"  {e}" for e in res.candidate]
        return Outcome("interp left", payload, lines, EXIT_FAIL)
    ver = verify_left(V, delta, res, args.fresh, samples=args.samples, seed=cfg.seed) if args.verify else None
    lines = [f"Pi over {', '.join(res.pi.vars) or '(none)'}:"] + [f"  {e}" for e in res.pi]
    if not res.pi.equations:
        lines.append("  (empty)")
    return _interp_outcome("interp left", res, lines, ver)


def cmd_interp_maehara(args, cfg):
    V = _engine(args, cfg)
    sigma, delta = _eqs(args.sigma, V), _eqs(args.delta, V)
    res = maehara_residual_interpolant(V, sigma, delta, use_ideal=args.ideal)
    lines = ["Pi:"] + [f"  {e}" for e in res.pi]
    if not res.pi.equations:
        lines.append("  (empty)")
    return _interp_outcome("interp maehara", res, lines, res.verified)


def cmd_interp_dip(args, cfg):
    V = _engine(args, cfg)
    v = dip_square_check(V, _names(args.x), _names(args.y), _names(args.z))
    payload = {"pass": v.ok, "witness": None}
    lines = [f"interpolation square commutes: {_pass(v.ok)}"]
    if not v.ok:
        w = v.witness
        payload["witness"] = {"theta": w.theta, "viaJ": w.via_j, "viaI": w.via_i}
        lines.append(f"theta = {w.theta}")
    return Outcome("interp dip-check", payload, lines, EXIT_OK if v.ok else EXIT_FAIL)


# --- lgroup ----------------------------------------------------------------------------


def cmd_lgroup_eliminate(args, cfg):
    from .lgroup import eliminate_with_certificate, parse_inequation_system, verify_certificate

    S = parse_inequation_system(_read(args.input))
    out, certs = eliminate_with_certificate(S, args.var)
    payload = {"var": args.var, "vars": list(out.variables), "pi": [q.format(out.variables) for q in out]}
    lines = [q.format(out.variables) for q in out] or ["(empty)"]
    code = EXIT_OK
    if args.certify:
        ok = verify_certificate(S, out, certs)
        payload["certificates"] = [c.to_json() for c in certs]
        payload["certified"] = ok
        for q, c in zip(out, certs):
            terms = " + ".join(f"{m}*[{k}]" for k, m in c.multipliers)
            lines.append(f"# {c.divisor} * ({q.rhs.format(out.variables)}) = {terms}")
        lines.append(f"certificates: {_pass(ok)}")
        code = EXIT_OK if ok else EXIT_FAIL
    return Outcome("lgroup eliminate", payload, lines, code)


def _point(text):
    out = {}
    for item in _names(text):
        name, _, val = item.partition("=")
        try:
            out[name.strip()] = Fraction(val.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad point coordinate {item!r}") from None
    return out


def cmd_lgroup_check(args, cfg):
    from .lgroup import eliminate, fuzz_elimination, parse_inequation_system, point_satisfies, witness_interval

    if args.input:
        S = parse_inequation_system(_read(args.input))
        p = _point(args.point)
        inter = witness_interval(S, args.var, p)
        sat = point_satisfies(eliminate(S, args.var), p)
        ok = bool(inter) == sat
        payload = {"point": {k: str(v) for k, v in p.items()}, "interval": str(inter), "eliminatedHolds": sat, "pass": ok}
        lines = [f"interval for {args.var}: {inter}", f"eliminated system holds: {sat}", _pass(ok)]
        return Outcome("lgroup check", payload, lines, EXIT_OK if ok else EXIT_FAIL)
    t0 = time.perf_counter()
    rep = fuzz_elimination(cfg.seed, args.systems, args.points)
    log.info("fuzz finished in %.2fs", time.perf_counter() - t0)
    payload = rep.to_json()
    lines = [
        f"seed {rep.seed}: {rep.systems} systems x {rep.points} points",
        f"discrepancies: {len(rep.discrepancies)}",
        f"certificate failures: {len(rep.certificate_failures)}",
        _pass(rep.passed),
    ]
    return Outcome("lgroup check", payload, lines, EXIT_OK if rep.passed else EXIT_FAIL)


# --- mc ----------------------------------------------------------------------------------


def cmd_mc_axiom(args, cfg):
    from .mc import build_axiom_datum, emit_axiom, verify_cotheory_instance, verify_quantelim_direction

    V = _engine(args, cfg)
    gamma = _eqs(args.gamma, V)
    deltas = [_eqs(p, V) for p in args.delta or []]
    d = build_axiom_datum(V, gamma, deltas, args.eliminate)
    _, text = emit_axiom(d)
    payload = {"datum": d.to_json(), "axiom": text}
    lines = [text]
    code = EXIT_OK
    if args.verify:
        v = verify_quantelim_direction(V, d)
        payload["quantelim"] = {"pass": v.ok, "witness": v.witness}
        lines.append(f"quantifier elimination direction: {_pass(v.ok)}")
        if not v.ok:
            lines.append(f"witness: {json.dumps(v.witness)}")
            code = EXIT_FAIL
        G = V.G
        # the cotheory construction on G itself at every generating, admissible assignment
        import itertools

        built = skipped = 0
        for vals in itertools.product(range(G.size), repeat=len(d.zs)):
            try:
                verify_cotheory_instance(V, d, G, dict(zip(d.zs, vals)))
                built += 1
            except (PreconditionFailed, UnsupportedCase):
                skipped += 1
        payload["cotheory"] = {"model": G.name, "built": built, "skipped": skipped}
        lines.append(f"embedding construction on {G.name}: {built} built, {skipped} outside the preconditions")
        lines.append("note: only assignments that generate the model are handled")
    return Outcome("mc axiom", payload, lines, code)


# --- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS, help=f"element budget (default {DEFAULT_BUDGET}, or UNIFINT_BUDGET)")
    common.add_argument("--limit", type=int, default=argparse.SUPPRESS, help=f"congruence limit (default {DEFAULT_CONGRUENCE_LIMIT})")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    common.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="unifint", description=__doc__.splitlines()[0], parents=[common])
    p.add_argument("--version", action="version", version=f"unifint {__version__}")
    top = p.add_subparsers(dest="group", required=True)

    alg = top.add_parser("alg", help="finite algebras").add_subparsers(dest="cmd", required=True)
    s = alg.add_parser("validate", parents=[common], help="check an algebra file")
    s.add_argument("--algebra", required=True)
    s.add_argument("--allow-no-constants", action="store_true")
    s.set_defaults(func=cmd_alg_validate)
    s = alg.add_parser("free", parents=[common], help="free algebra of HSP(G)")
    s.add_argument("--generator", required=True)
    s.add_argument("--vars", required=True, help="comma-separated variables")
    s.set_defaults(func=cmd_alg_free)
    s = alg.add_parser("cong", parents=[common], help="congruence generation or the congruence lattice")
    s.add_argument("--algebra", required=True)
    s.add_argument("--pair", action="append", help="generating pair a,b (repeatable)")
    s.add_argument("--dot", help="write the Hasse diagram of Con A as DOT")
    s.set_defaults(func=cmd_alg_cong)
    s = alg.add_parser("cep", parents=[common], help="congruence extension check")
    s.add_argument("--algebra", required=True)
    s.add_argument("--exhaustive", action="store_true", help="test all congruences of each subalgebra")
    s.add_argument("--subalgebra-limit", type=int, default=DEFAULT_SUBALGEBRA_LIMIT)
    s.set_defaults(func=cmd_alg_cep)

    ip = top.add_parser("interp", help="uniform interpolants").add_subparsers(dest="cmd", required=True)
    s = ip.add_parser("right", parents=[common], help="right uniform interpolant")
    s.add_argument("--variety", required=True)
    s.add_argument("--sigma", required=True)
    s.add_argument("--eliminate", required=True)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--fresh", type=int, default=1)
    s.add_argument("--method", choices=["auto", "free", "semantic"], default="auto",
                   help="auto tries free-algebra closure, then falls back to evaluation in G")
    s.set_defaults(func=cmd_interp_right)
    s = ip.add_parser("left", parents=[common], help="left uniform interpolant")
    s.add_argument("--variety", required=True)
    s.add_argument("--delta", required=True)
    s.add_argument("--eliminate", required=True)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--fresh", type=int, default=1)
    s.add_argument("--samples", type=int, default=200)
    s.set_defaults(func=cmd_interp_left)
    s = ip.add_parser("maehara", parents=[common], help="residual interpolant with side premises")
    s.add_argument("--variety", required=True)
    s.add_argument("--sigma", required=True)
    s.add_argument("--delta", required=True)
    s.add_argument("--ideal", action="store_true", help="search only below cg(Delta)")
    s.set_defaults(func=cmd_interp_maehara)
    s = ip.add_parser("dip-check", parents=[common], help="commuting square of inclusions")
    s.add_argument("--variety", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--z", required=True)
    s.set_defaults(func=cmd_interp_dip)

    lg = top.add_parser("lgroup", help="lattice-ordered abelian groups").add_subparsers(dest="cmd", required=True)
    s = lg.add_parser("eliminate", parents=[common], help="eliminate one variable")
    s.add_argument("--var", required=True)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--certify", action="store_true")
    s.set_defaults(func=cmd_lgroup_eliminate)
    s = lg.add_parser("check", parents=[common], help="fuzz the elimination, or check one point")
    s.add_argument("--in", dest="input")
    s.add_argument("--var", default="x")
    s.add_argument("--point", default="", help="y1=1,y2=-1/2")
    s.add_argument("--systems", type=int, default=1000)
    s.add_argument("--points", type=int, default=1000)
    s.set_defaults(func=cmd_lgroup_check)

    mc = top.add_parser("mc", help="model-completion axioms").add_subparsers(dest="cmd", required=True)
    s = mc.add_parser("axiom", parents=[common], help="build and print one axiom")
    s.add_argument("--variety", required=True)
    s.add_argument("--gamma", required=True)
    s.add_argument("--delta", action="append")
    s.add_argument("--eliminate", required=True)
    s.add_argument("--verify", action="store_true")
    s.set_defaults(func=cmd_mc_axiom)
    return p


def _config(args) -> RunConfig:
    return RunConfig(
        budget=resolve_budget(getattr(args, "budget", None)),
        limit=getattr(args, "limit", DEFAULT_CONGRUENCE_LIMIT),
        seed=getattr(args, "seed", 0),
        format=getattr(args, "format", "text"),
        verbosity=getattr(args, "verbose", 0),
    )


def _error(cfg, command, code, kind, message, witness=None):
    if cfg is not None and cfg.format == "json":
        doc = {"schema": SCHEMA, "command": command, "seed": cfg.seed, "exitCode": code,
               "error": {"kind": kind, "message": message, "witness": witness}}
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    print(f"unifint: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = None
    command = f"{args.group} {args.cmd}"
    try:
        cfg = _config(args)
        logging.basicConfig(level=logging.WARNING - 10 * min(cfg.verbosity, 2), format="%(levelname)s %(message)s")
        outcome = args.func(args, cfg)
    except BudgetExceeded as exc:
        witness = {"budget": cfg.budget, "limit": cfg.limit} if cfg is not None else None
        return _error(cfg, command, EXIT_BUDGET, type(exc).__name__, str(exc), witness)
    except (InputError, PreconditionFailed, UnsupportedCase) as exc:
        return _error(cfg, command, EXIT_USAGE, type(exc).__name__, str(exc), {"input": str(exc)})
    except ResidualMissing as exc:
        return _error(cfg, command, EXIT_FAIL, "ResidualMissing", str(exc), exc.witness)
    except (NotInVariety, UnifintError) as exc:
        return _error(cfg, command, EXIT_FAIL, type(exc).__name__, str(exc), {"message": str(exc)})
    sys.stdout.write(emit_report(outcome, cfg))
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
