"""Command-line front end.

Every subcommand reads schema-validated JSON (``-`` or omitted paths
mean stdin), writes canonical JSON to stdout and uses the exit codes:
0 success, 1 structured error (schema or invariant violation,
infeasible query), 2 unknown subcommand or unreadable file.  Output is
byte-identical across runs for identical input.

``FLOERBOUND_MAX_DEGREE`` caps every degree range (default 64).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bounds, conley, morse, steenrod, stmod
from .schemas import (
    SchemaError,
    algebra_from_json,
    algebra_to_json,
    cap_action_from_json,
    certificate_from_json,
    check_degree_cap,
    complex_from_json,
    dumps_canonical,
    graded_map_to_json,
    module_from_json,
    module_to_json,
)

DEFAULT_MAX_DEGREE = 64


class CliError(Exception):
    def __init__(self, code: str, message: str, witness=None, exit_code: int = 1):
        super().__init__(message)
        self.code = code
        self.witness = witness
        self.exit_code = exit_code

    def to_json(self) -> dict:
        err = {"code": self.code, "message": str(self)}
        if self.witness is not None:
            err["witness"] = self.witness
        return {"error": err}


def _max_degree() -> int:
    raw = os.environ.get("FLOERBOUND_MAX_DEGREE")
    if raw is None:
        return DEFAULT_MAX_DEGREE
    try:
        cap = int(raw)
    except ValueError:
        raise CliError("bad-env", f"FLOERBOUND_MAX_DEGREE={raw!r} is not an integer")
    if cap < 1:
        raise CliError("bad-env", "FLOERBOUND_MAX_DEGREE must be positive")
    return cap


def _read_json(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        raise CliError("unreadable", f"cannot read {path}: {e}", exit_code=2)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise CliError("bad-json", f"{path}: {e}")


def _check_cap(n: int, what: str, cap: int) -> None:
    if abs(n) > cap:
        raise CliError("degree-cap",
                       f"{what} {n} exceeds the cap {cap} "
                       f"(set FLOERBOUND_MAX_DEGREE to raise it)")


# --- sq ----------------------------------------------------------------------


def _cmd_sq(args, cap: int) -> dict:
    if args.op == "reduce":
        try:
            return {"result": steenrod.render(steenrod.parse(args.expr))}
        except (ValueError, steenrod.MixedDegreeError) as e:
            raise CliError("bad-expression", str(e))
    if args.op == "conjugate":
        _check_cap(args.j, "conjugate exponent", cap)
        if args.j < 0:
            raise CliError("bad-argument", "j must be non-negative")
        return {"result": steenrod.render(steenrod.conjugate(args.j))}
    if args.op == "multiply":
        try:
            a = steenrod.parse(args.left)
            b = steenrod.parse(args.right)
        except ValueError as e:
            raise CliError("bad-expression", str(e))
        return {"result": steenrod.render(steenrod.multiply(a, b))}
    raise AssertionError(args.op)


# --- conley ------------------------------------------------------------------


def _cmd_conley(args, cap: int) -> dict:
    if args.op == "must-vanish":
        _check_cap(args.n, "dimension", cap)
        _check_cap(args.j, "exponent", cap)
        if args.n < 1 or args.j < 1:
            raise CliError("bad-argument", "need n >= 1 and j >= 1")
        fact = conley.must_vanish(args.n, args.m, args.j)
        out = {"n": fact.n, "m": fact.m, "j": fact.j, "forced": fact.forced}
        if args.trace:
            out["trace"] = [dict(t) for t in fact.trace]
        return out
    if args.op == "admissible":
        _check_cap(args.n, "dimension", cap)
        _check_cap(args.jmax, "exponent", cap)
        if args.n < 1 or args.jmax < 1:
            raise CliError("bad-argument", "need n >= 1 and jmax >= 1")
        squares = sorted(conley.admissible_squares(args.n, args.jmax))
        return {"n": args.n, "jmax": args.jmax, "squares": squares}
    raise AssertionError(args.op)


def _load_module(path: str, cap: int) -> stmod.UnstableModule:
    m = module_from_json(_read_json(path), cap)
    bad = stmod.validate(m)
    if bad:
        raise CliError("invalid-module",
                       "module violates the unstable-module axioms", witness=bad)
    return m


# --- morse -------------------------------------------------------------------


def _load_complex(path: str, cap: int) -> morse.MorseComplex:
    generators, incidence = complex_from_json(_read_json(path), cap)
    try:
        return morse.build_complex(generators, incidence)
    except morse.ComplexError as e:
        raise CliError("invalid-complex", "complex violates chain invariants",
                       witness=e.violations)


def _homology_json(h: morse.HomologyBasis) -> dict:
    return {
        "dims": {str(m): d for m, d in sorted(h.dims.items())},
        "representatives": {
            str(m): h.representative_names(m) for m in sorted(h.dims)
        },
    }


def _cmd_morse(args, cap: int) -> dict:
    if args.op == "validate":
        generators, incidence = complex_from_json(_read_json(args.complex), cap)
        violations = morse.validate_data(generators, incidence)
        return {"valid": not violations, "violations": violations}
    cx = _load_complex(args.complex, cap)
    if args.op == "homology":
        return _homology_json(morse.homology(cx))
    if args.op == "les":
        try:
            thresholds = [float(t) for t in args.thresholds.split(",") if t.strip()]
        except ValueError:
            raise CliError("bad-argument", f"cannot parse thresholds {args.thresholds!r}")
        if not thresholds:
            raise CliError("bad-argument", "need at least one threshold")
        try:
            levels = morse.les(cx, thresholds)
        except ValueError as e:
            raise CliError("bad-thresholds", str(e))
        out = []
        for lv in levels:
            out.append(
                {
                    "threshold": lv["threshold"],
                    "dims": {
                        part: {str(m): d for m, d in sorted(dims.items())}
                        for part, dims in lv["dims"].items()
                    },
                    "maps": {k: graded_map_to_json(v) for k, v in lv["maps"].items()},
                    "exact": lv["exact"],
                    "reports": lv["reports"],
                    "convention": lv["convention"],
                }
            )
        return {"levels": out}
    raise AssertionError(args.op)


# --- bound -------------------------------------------------------------------


def _cmd_bound(args, cap: int) -> dict:
    if args.op == "steenrod":
        m = _load_module(args.module, cap)
        if args.n < 1:
            raise CliError("bad-argument", "n must be positive")
        if args.auto:
            allowed: set[int] | str = "auto"
        else:
            try:
                allowed = {int(t) for t in args.allowed.split(",") if t.strip()}
            except ValueError:
                raise CliError("bad-argument", f"cannot parse --allowed {args.allowed!r}")
            if any(r < 1 for r in allowed):
                raise CliError("bad-argument", "allowed exponents must be positive")
        cert = bounds.steenrod_bound(m, args.n, allowed, exhaustive=args.exhaustive)
        return {"bound": cert.bound, "certificate": cert.to_json()}
    if args.op == "cup":
        a = algebra_from_json(_read_json(args.algebra), cap)
        bad = stmod.validate_algebra(a)
        if bad:
            raise CliError("invalid-algebra", "algebra violates its axioms", witness=bad)
        return {"cup_length": bounds.cup_length(a)}
    if args.op == "cap":
        action = cap_action_from_json(_read_json(args.action), cap)
        bad = bounds.validate_cap(action)
        if bad:
            raise CliError("invalid-cap-action", "cap action violates its axioms",
                           witness=bad)
        k, bound, witness = bounds.cap_length(action)
        return {"k": k, "bound": bound, "witness": witness}
    if args.op == "verify":
        m = _load_module(args.module, cap)
        cert = certificate_from_json(_read_json(args.certificate))
        ok, failures = bounds.verify_certificate(m, args.n, cert)
        return {"valid": ok, "failures": failures}
    raise AssertionError(args.op)


# --- build -------------------------------------------------------------------


def _cmd_build(args, cap: int) -> dict:
    name = args.example
    if name == "cp2-algebra":
        return algebra_to_json(stmod.projective_plane_algebra())
    if name == "cp2-thom-r7":
        return module_to_json(stmod.cp2_thom_r7())
    if name in ("application", "application-module"):
        if args.k is None or args.k < 1:
            raise CliError("bad-argument", "application needs --k >= 1")
        _check_cap(8 * (args.k - 1) + 4, "top degree", cap)
        return module_to_json(stmod.application_module(args.k))
    if name == "sphere":
        if args.r is None or args.r < 0:
            raise CliError("bad-argument", "sphere needs --r >= 0")
        _check_cap(args.r, "degree", cap)
        return module_to_json(stmod.sphere_module(args.r))
    if name in ("suspend", "suspension"):
        if args.module is None or args.d is None:
            raise CliError("bad-argument", "suspend needs --module and --d")
        m = _load_module(args.module, cap)
        check_degree_cap(m.lo + args.d, m.hi + args.d, cap)
        try:
            return module_to_json(stmod.suspend(m, args.d))
        except stmod.InvariantViolation as e:
            raise CliError("invalid-module", str(e), witness=e.violations)
    if name == "wedge":
        if not args.modules:
            raise CliError("bad-argument", "wedge needs --modules")
        parts = [_load_module(p, cap) for p in args.modules]
        return module_to_json(stmod.wedge(parts))
    raise CliError("unknown-example", f"no example named {name!r}")


# --- wiring ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="floerbound")
    sub = top.add_subparsers(dest="command", required=True)

    sq = sub.add_parser("sq", help="Steenrod algebra arithmetic")
    sqs = sq.add_subparsers(dest="op", required=True)
    p = sqs.add_parser("reduce")
    p.add_argument("expr")
    p = sqs.add_parser("conjugate")
    p.add_argument("--j", type=int, required=True)
    p = sqs.add_parser("multiply")
    p.add_argument("left")
    p.add_argument("right")

    cn = sub.add_parser("conley", help="forced vanishing on Conley indices")
    cns = cn.add_subparsers(dest="op", required=True)
    p = cns.add_parser("must-vanish")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--trace", action="store_true")
    p = cns.add_parser("admissible")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--jmax", type=int, required=True)

    mo = sub.add_parser("morse", help="filtered chain complexes")
    mos = mo.add_subparsers(dest="op", required=True)
    for op in ("homology", "les", "validate"):
        p = mos.add_parser(op)
        p.add_argument("--complex", default="-")
        if op == "les":
            p.add_argument("--thresholds", required=True)

    bd = sub.add_parser("bound", help="certified intersection lower bounds")
    bds = bd.add_subparsers(dest="op", required=True)
    p = bds.add_parser("steenrod")
    p.add_argument("--module", default="-")
    p.add_argument("--n", type=int, required=True)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--auto", action="store_true")
    grp.add_argument("--allowed")
    p.add_argument("--exhaustive", action="store_true")
    p = bds.add_parser("cup")
    p.add_argument("--algebra", default="-")
    p = bds.add_parser("cap")
    p.add_argument("--action", default="-")
    p = bds.add_parser("verify")
    p.add_argument("--module", default="-")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--certificate", required=True)

    bu = sub.add_parser("build", help="emit built-in example artifacts")
    bu.add_argument("example")
    bu.add_argument("--k", type=int)
    bu.add_argument("--r", type=int)
    bu.add_argument("--d", type=int)
    bu.add_argument("--module")
    bu.add_argument("--modules", nargs="+")
    return top


_DISPATCH = {
    "sq": _cmd_sq,
    "conley": _cmd_conley,
    "morse": _cmd_morse,
    "bound": _cmd_bound,
    "build": _cmd_build,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cap = _max_degree()
        result = _DISPATCH[args.command](args, cap)
    except CliError as e:
        sys.stdout.write(dumps_canonical(e.to_json()))
        return e.exit_code
    except SchemaError as e:
        sys.stdout.write(dumps_canonical({"error": e.to_json()}))
        return 1
    sys.stdout.write(dumps_canonical(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
