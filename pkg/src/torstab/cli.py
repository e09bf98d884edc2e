"""Command-line interface: JSON in, exact JSON reports out.

Usage::

    torstab <command> <file> [--nu i,j,...] [--radius R] [--kmax K] [--verbose]
    torstab examples <name|list>

Exit codes: 0 on success, 1 for malformed input, 2 when the input is valid
but mathematically rejected (e.g. a divisor that is not ample).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__, gallery
from .exact import primitivize
from .fan import Fan, FanError, minimal_cone_containing
from .invariants import (
    TORIC_DELTA_CAVEAT,
    barycentres,
    beta_barycentre,
    beta_integral,
    beta_with_discrepancy_shift,
    default_radius,
    delta_toric,
    delta_toric_brute,
    destabilizer_search,
    futaki,
    futaki_vanishes,
    futaki_vector,
    slope_mu,
    sufficient_criterion,
    tau_S_j,
)
from .oracle import verify_df_equals_beta, df_from_counts
from .polytope import PolytopeError, ToricDivisor, measure, require_ample

COMMANDS = ("invariants", "beta", "futaki", "delta", "destabilize", "criterion", "oracle", "examples")
NEEDS_NU = ("beta", "oracle")
VERSION = f"torstab {__version__}"


class InputError(ValueError):
    """Malformed input document or flags."""


def _rational(text, field: str) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (int, str)):
        raise InputError(f"{field}: expected an integer or a 'p/q' string, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    num, slash, den = text.strip().partition("/")
    try:
        p, q = int(num), int(den) if slash else 1
    except ValueError:
        raise InputError(f"{field}: invalid rational literal {text!r}") from None
    if q == 0:
        raise InputError(f"{field}: zero denominator")
    return Fraction(p, q)


def _int_list(value, field: str) -> list[int]:
    if not isinstance(value, list) or any(isinstance(c, bool) or not isinstance(c, int) for c in value):
        raise InputError(f"{field}: expected a list of integers")
    return value


def parse_document(doc) -> tuple[Fan, ToricDivisor]:
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    for key in ("dim", "rays", "max_cones", "divisor"):
        if key not in doc:
            raise InputError(f"missing field {key!r}")
    dim = doc["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InputError("dim: expected a positive integer")
    if not isinstance(doc["rays"], list) or not isinstance(doc["max_cones"], list):
        raise InputError("rays and max_cones must be lists")
    rays = [_int_list(r, f"rays[{i}]") for i, r in enumerate(doc["rays"])]
    for i, r in enumerate(rays):
        if len(r) != dim:
            raise InputError(f"rays[{i}]: dimension mismatch ({len(r)} != dim {dim})")
    cones = [_int_list(c, f"max_cones[{i}]") for i, c in enumerate(doc["max_cones"])]
    for i, c in enumerate(cones):
        if any(not 0 <= j < len(rays) for j in c):
            raise InputError(f"max_cones[{i}]: invalid cone index")
    if not isinstance(doc["divisor"], list):
        raise InputError("divisor: expected a list of rationals")
    coeffs = [_rational(a, f"divisor[{i}]") for i, a in enumerate(doc["divisor"])]
    if len(coeffs) != len(rays):
        raise InputError(f"divisor: {len(coeffs)} coefficients for {len(rays)} rays")
    try:
        fan = Fan.build(rays, cones)
    except FanError as exc:
        raise InputError(f"fan: {exc}") from None
    return fan, ToricDivisor(fan, tuple(coeffs))


def parse_input(text: str) -> tuple[Fan, ToricDivisor]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
    return parse_document(doc)


def serialize(fan: Fan, L: ToricDivisor, name: str | None = None, labels=None) -> dict:
    doc = {
        "dim": fan.dim,
        "rays": [list(r) for r in fan.rays],
        "max_cones": [list(c) for c in fan.max_cones],
        "divisor": [str(a) for a in L.coeffs],
    }
    if name is not None:
        doc["name"] = name
    if labels:
        doc["labels"] = list(labels)
    return doc


def jsonable(value):
    """Fractions become canonical strings; integers (indices, vectors) stay integers."""
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    raise TypeError(f"cannot serialise {type(value).__name__}")


def parse_nu(text: str | None, dim: int, warnings: list[str]) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        nu = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise InputError(f"--nu: expected comma-separated integers, got {text!r}") from None
    if len(nu) != dim:
        raise InputError(f"--nu: dimension mismatch ({len(nu)} != dim {dim})")
    if not any(nu):
        raise InputError("--nu: zero vector has no direction")
    prim, g = primitivize(nu)
    if g != 1:
        warnings.append(f"nu {list(nu)} is not primitive; primitivized to {list(prim)}")
    return prim


def _valuation(L: ToricDivisor, nu) -> dict:
    data = minimal_cone_containing(L.fan, nu)
    return {
        "nu": list(nu),
        "minimal_cone": list(data.minimal_cone),
        "coefficients": list(data.coefficients),
        "log_discrepancy": data.log_discrepancy,
    }


def _invariants(L, nu, flags) -> dict:
    P = require_ample(L)
    vol, _ = measure(P)
    b_P, b_dP = barycentres(L)
    out = {
        "mu": slope_mu(L),
        "vol_M": vol,
        "vol": math.factorial(L.dim) * vol,
        "barycentre": b_P,
        "boundary_barycentre": b_dP,
        "futaki_vanishes": futaki_vanishes(L),
        "delta_toric": delta_toric(L).delta,
    }
    if nu is not None:
        tau, S, j = tau_S_j(L, nu)
        out.update(_valuation(L, nu))
        out.update({"tau": tau, "S": S, "j": j, "beta_hat": beta_integral(L, nu)})
    return out


def _beta(L, nu, flags) -> dict:
    n_fact = math.factorial(L.dim)
    b_int = beta_integral(L, nu)
    b_bar = beta_barycentre(L, nu)
    out = _valuation(L, nu)
    out.update({
        "beta": n_fact * b_int,
        "beta_hat": b_int,
        "beta_hat_barycentre": b_bar,
        "routes_agree": b_int == b_bar,
    })
    if flags.get("verbose"):
        out["discrepancy_shifted_formula"] = {
            "label": "barycentre value plus (A - 1) Vol_M; not the beta invariant",
            "beta_hat": beta_with_discrepancy_shift(L, nu),
            "beta": n_fact * beta_with_discrepancy_shift(L, nu),
        }
    return out


def _futaki(L, nu, flags) -> dict:
    out = {"futaki_vector": futaki_vector(L), "futaki_vanishes": futaki_vanishes(L)}
    if nu is not None:
        out["nu"] = list(nu)
        out["futaki"] = futaki(L, nu)
    return out


def _delta(L, nu, flags) -> dict:
    result = delta_toric(L)
    out = {"delta_toric": result.delta, "ray": result.ray, "ray_vector": list(L.fan.rays[result.ray])}
    if flags.get("radius") is not None:
        out["radius"] = flags["radius"]
        out["delta_brute"] = delta_toric_brute(L, flags["radius"])
    return out


def _destabilize(L, nu, flags) -> dict:
    radius = flags.get("radius") or default_radius(L.dim)
    r = destabilizer_search(L, radius)
    return {
        "radius": radius,
        "found": r.found,
        "nu": list(r.nu) if r.nu else None,
        "beta_hat": r.beta_hat,
        "ratio": r.ratio,
        "all_zero": r.all_zero,
        "searched": r.searched,
        "notes": list(r.notes),
    }


def _criterion(L, nu, flags) -> dict:
    v = sufficient_criterion(L)
    return {
        "verdict": v.verdict,
        "mu": v.mu,
        "delta_toric": v.delta_toric,
        "gamma": v.gamma,
        "threshold": v.threshold,
        "t_min": v.t_min,
    }


def _oracle(L, nu, flags) -> dict:
    k_max = flags.get("kmax") or 8
    result = df_from_counts(L, nu, k_max)
    report = verify_df_equals_beta(L, nu, k_max)
    c = result.coefficients
    return {
        "nu": list(nu),
        "kmax": k_max,
        "df": result.df,
        "donaldson_raw": result.donaldson_raw,
        "filtration_formula": result.filtration_formula,
        "df_times_volume": report.df_times_volume,
        "beta": report.beta,
        "coefficients": {"a0": c.a0, "a1": c.a1, "b0": c.b0, "b1": c.b1,
                         "f_top": c.f_top, "f_sub": c.f_sub},
        "lambda_max_ok": report.lambda_max_ok,
        "lambda_min_ok": report.lambda_min_ok,
        "verify": "pass" if report.passed else "fail",
        "details": list(report.details),
    }


HANDLERS = {
    "invariants": _invariants,
    "beta": _beta,
    "futaki": _futaki,
    "delta": _delta,
    "destabilize": _destabilize,
    "criterion": _criterion,
    "oracle": _oracle,
}


def run(command: str, document: dict, flags: dict | None = None) -> dict:
    """Evaluate ``command`` on a parsed JSON document and build the report."""
    flags = dict(flags or {})
    if command == "examples":
        raise InputError("examples takes a name, not a document")
    if command not in HANDLERS:
        raise InputError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    fan, L = parse_document(document)
    warnings: list[str] = []
    nu = parse_nu(flags.get("nu"), fan.dim, warnings)
    if command in NEEDS_NU and nu is None:
        raise InputError(f"{command} requires --nu")
    for key in ("radius", "kmax"):
        if flags.get(key) is not None and flags[key] < 1:
            raise InputError(f"--{key} must be positive")
    result = HANDLERS[command](L, nu, flags)
    caveats = [TORIC_DELTA_CAVEAT] if command in ("invariants", "delta", "criterion") else []
    echo = serialize(fan, L, document.get("name"), document.get("labels"))
    return jsonable({
        "command": command,
        "input": echo,
        "result": result,
        "caveats": caveats,
        "warnings": warnings,
        "version": VERSION,
    })


def examples(name: str) -> dict:
    if name == "list":
        return {"examples": list(gallery.DEFAULT_GALLERY), "builders": sorted(gallery.BUILDERS)}
    try:
        return gallery.example(name)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad parameters for {name!r}: {exc}") from None


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torstab", description="Exact stability invariants of polarised toric varieties.")
    parser.add_argument("command", help=", ".join(COMMANDS))
    parser.add_argument("file", help="input JSON document ('-' for stdin); for examples, a name or 'list'")
    parser.add_argument("--nu", help="valuation vector, comma separated")
    parser.add_argument("--radius", type=int, help="search radius (sup norm)")
    parser.add_argument("--kmax", type=int, help="largest multiple k for the counting oracle")
    parser.add_argument("--verbose", action="store_true")
    parser.add_argument("--version", action="version", version=VERSION)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "examples":
            print(dumps(examples(args.file)))
            return 0
        if args.command not in COMMANDS:
            raise InputError(f"unknown command {args.command!r}; expected one of {', '.join(COMMANDS)}")
        try:
            text = sys.stdin.read() if args.file == "-" else open(args.file, encoding="utf-8").read()
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON: {exc}") from None
        flags = {"nu": args.nu, "radius": args.radius, "kmax": args.kmax, "verbose": args.verbose}
        report = run(args.command, document, flags)
    except (PolytopeError, ArithmeticError) as exc:
        print(f"torstab: rejected: {exc}", file=sys.stderr)
        return 2
    except (InputError, FanError, ValueError) as exc:
        print(f"torstab: error: {exc}", file=sys.stderr)
        return 1
    print(dumps(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
