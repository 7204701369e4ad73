"""Command-line front end: parse parameters, dispatch, emit JSON reports.

Reports are deterministic: fields are emitted in sorted order, floats use
Python's shortest round-trip representation (exact to 17 significant
digits), and no timestamps or environment data enter the payload.  Exit
codes: 0 success, 2 validation/parse error, 3 numerical failure.  Errors
are also emitted as structured JSON on stderr.

Parameter files are flat ``key = value`` text, one pair per line, vectors
as comma lists, ``#`` comments allowed; duplicate keys are rejected and
values must be plain decimal numbers (no expressions).  ``-`` reads the
file from stdin.  The environment variable ``QHEUN_TOLERANCE`` overrides
the default vanishing tolerance; ``--tol name=value`` overrides individual
named tolerances.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from . import characterize as chz
from . import degeneration as dgn
from . import local, qes
from .errors import VALIDATION_ERRORS, InvalidParams, ParseError, QHeunError
from .laurent import LaurentPoly
from .operator import (
    apply_equation,
    build_equation,
    q_hypergeometric_series,
    reduce_to_q_hypergeometric,
    standard_q_hypergeometric_equation,
)
from .params import Family, ModelParams, VariantSkeleton

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

COMMANDS = ("exponents", "series", "apparency", "characterize", "qes", "limit", "hypergeom", "sweep")

_MODEL_KEYS = ("family", "q", "h", "l", "t", "alpha", "beta", "E")
_VECTOR_KEYS = ("h", "l", "t", "alpha")

DEFAULT_TOLERANCES = {
    "vanish": local.VANISH_TOL,
    "resonance": local.RESONANCE_TOL,
    "eigen": qes.EIGEN_TOL,
}


@dataclass
class RunConfig:
    command: str
    params: ModelParams | VariantSkeleton | None = None
    point: local.BasePoint | None = None
    order: int = 32
    tolerances: dict[str, float] = field(default_factory=dict)
    output_format: str = "json"
    output_path: str | None = None
    options: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidParams(f"unknown command {self.command!r}")
        if self.order < 0:
            raise InvalidParams("order must be nonnegative")
        for name, value in self.tolerances.items():
            if name not in DEFAULT_TOLERANCES:
                raise InvalidParams(f"unknown tolerance {name!r}")
            if not (value > 0):
                raise InvalidParams(f"tolerance {name!r} must be positive")
        if self.output_format not in ("json", "csv", "human"):
            raise InvalidParams(f"unknown output format {self.output_format!r}")

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])


# -- parameter parsing -------------------------------------------------------


def _parse_number(key: str, text: str) -> float:
    token = text.strip()
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"value for {key!r} is not a decimal number: {token!r}") from None
    if not math.isfinite(value):
        raise ParseError(f"value for {key!r} must be finite: {token!r}")
    return value


def _parse_vector(key: str, text: str) -> tuple[float, ...]:
    items = [piece for piece in str(text).split(",") if piece.strip()]
    if not items:
        raise ParseError(f"empty vector for {key!r}")
    return tuple(_parse_number(key, piece) for piece in items)


def read_param_file(path: str) -> dict[str, str]:
    """Key/value pairs from a flat parameter file; duplicate keys rejected."""
    if path == "-":
        text = sys.stdin.read()
        source = "<stdin>"
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read parameter file {path!r}: {exc}") from exc
        source = path
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in pairs:
            raise ParseError(f"{source}:{lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def parse_params(
    file_pairs: dict[str, str], inline: dict[str, str], kind: str = "model"
) -> ModelParams | VariantSkeleton:
    """Validated parameters from file pairs and/or inline flag strings.

    A key given both in the file and inline is a duplicate and rejected.
    """
    merged: dict[str, str] = {}
    for source in (file_pairs, inline):
        for key, value in source.items():
            if value is None:
                continue
            if key in merged:
                raise ParseError(f"duplicate key {key!r} (file and flags)")
            merged[key] = value
    unknown = set(merged) - set(_MODEL_KEYS)
    if unknown:
        raise ParseError(f"unknown parameter keys: {sorted(unknown)}")
    missing = [key for key in ("family", "q", "h", "l", "t") if key not in merged]
    if missing:
        raise InvalidParams(f"missing required parameter keys: {missing}")

    family = Family.parse(merged["family"])
    q = _parse_number("q", merged["q"])
    vectors = {key: _parse_vector(key, merged[key]) for key in ("h", "l", "t")}
    beta = _parse_number("beta", merged["beta"]) if "beta" in merged else None
    accessory = _parse_number("E", merged["E"]) if "E" in merged else 0.0

    if kind == "skeleton":
        if "alpha" in merged:
            raise InvalidParams("skeleton parameters take no alpha key")
        return VariantSkeleton(
            family=family, q=q, h=vectors["h"], l=vectors["l"], t=vectors["t"],
            beta=beta, E=accessory,
        )

    alpha1 = alpha2 = None
    if "alpha" in merged:
        alpha = _parse_vector("alpha", merged["alpha"])
        if len(alpha) != 2:
            raise InvalidParams("alpha must have exactly two entries")
        alpha1, alpha2 = alpha
    return ModelParams(
        family=family, q=q, h=vectors["h"], l=vectors["l"], t=vectors["t"],
        alpha1=alpha1, alpha2=alpha2, beta=beta, E=accessory,
    )


# -- JSON helpers ------------------------------------------------------------


def _jsonable(value):
    if isinstance(value, LaurentPoly):
        return {str(k): _jsonable(v) for k, v in value.terms()}
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, float):
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if hasattr(value, "tolist"):
        return _jsonable(value.tolist())
    if isinstance(value, (Family, local.BasePoint, dgn.LimitFamily, local.ExpansionStatus)):
        return value.value
    return value


def _params_payload(params) -> dict:
    payload = {
        "family": params.family.value,
        "q": params.q,
        "h": list(params.h),
        "l": list(params.l),
        "t": list(params.t),
        "E": params.E,
    }
    if getattr(params, "beta", None) is not None:
        payload["beta"] = params.beta
    if getattr(params, "alpha1", None) is not None:
        payload["alpha"] = [params.alpha1, params.alpha2]
    return payload


def _equation_payload(eq) -> dict:
    return {
        "u": _jsonable(eq.u),
        "v": _jsonable(eq.v),
        "w": _jsonable(eq.w),
        "q": eq.q,
        "power": eq.power,
    }


# -- command implementations -------------------------------------------------


def _exponent_payload(pair: local.ExponentPair, eq, point) -> dict:
    return {
        "lambda1": pair.lambda1,
        "lambda2": pair.lambda2,
        "difference": pair.difference,
        "resonant": pair.resonant,
        "char_residuals": [
            local.characteristic_residual(eq, point, pair.lambda1),
            local.characteristic_residual(eq, point, pair.lambda2),
        ],
    }


def _run_exponents(config: RunConfig) -> dict:
    eq = build_equation(config.params)
    point = config.point
    regular = local.classify(eq, point)
    results = {"point": point.value, "is_regular": regular}
    if regular:
        pair = local.exponents(eq, point, resonance_tol=config.tol("resonance"))
        results.update(_exponent_payload(pair, eq, point))
    return results


def _run_series(config: RunConfig) -> dict:
    eq = build_equation(config.params)
    point = config.point
    lam = config.options.get("lam")
    if lam is None:
        pair = local.exponents(eq, point, resonance_tol=config.tol("resonance"))
        lam = pair.lambda2 if config.options.get("branch") == "upper" else pair.lambda1
    expansion = local.frobenius_series(
        eq, point, lam, config.order,
        vanish_tol=config.tol("vanish"), resonance_tol=config.tol("resonance"),
    )
    profile = local.residual_profile_relative(eq, expansion)
    checked = profile[: expansion.order + 1]
    return {
        "point": point.value,
        "lambda": expansion.lam,
        "status": expansion.status.value,
        "order": expansion.order,
        "resonance_index": expansion.resonance_index,
        "coefficients": list(expansion.coeffs),
        "max_relative_residual": max(checked) if checked else 0.0,
    }


def _run_apparency(config: RunConfig) -> dict:
    eq = build_equation(config.params)
    point = config.point
    pair = local.exponents(eq, point, resonance_tol=config.tol("resonance"))
    residual = local.apparency_residual(eq, point, resonance_tol=config.tol("resonance"))
    apparent = None if residual is None else residual <= config.tol("vanish")
    return {
        "point": point.value,
        "lambda1": pair.lambda1,
        "lambda2": pair.lambda2,
        "resonant": pair.resonant,
        "apparent": apparent,
        "consistency_residual": residual,
    }


def _run_characterize(config: RunConfig) -> dict:
    sk = config.params
    if sk.family is Family.A3:
        derived = chz.derive_b_A3(sk)._asdict()
    else:
        derived = chz.derive_b_A2(sk)._asdict()
    report = chz.verify_characterization(sk)
    return {
        "family": sk.family.value,
        "derived": derived,
        "passed": report.passed,
        "conditions": [
            {"name": c.name, "passed": c.passed, "residual": c.residual}
            for c in report.conditions
        ],
        "exponents_zero": report.exponents_zero,
        "exponents_infinity": report.exponents_infinity,
    }


def _run_qes(config: RunConfig) -> dict:
    params = config.params
    subspaces = qes.find_subspaces(params, tol=config.tol("resonance"))
    payload = []
    for sub in subspaces:
        pairs = qes.solve_subspace(params, sub, tol=config.tol("eigen"))
        payload.append(
            {
                "branch": sub.branch,
                "lambda": sub.lam,
                "n": sub.n,
                "dimension": sub.dimension,
                "basis": list(sub.basis),
                "matrix": _jsonable(sub.matrix),
                "eigenpairs": [
                    {
                        "eigenvalue": _jsonable(complex(p.eigenvalue)),
                        "coefficients": [_jsonable(complex(c)) for c in p.coefficients],
                        "residual": p.residual,
                    }
                    for p in pairs
                ],
            }
        )
    return {"subspace_count": len(payload), "subspaces": payload}


def _run_hypergeom(config: RunConfig) -> dict:
    opts = config.options
    if opts.get("abc") is not None:
        a, b, c = opts["abc"]
        q = opts["q"]
        series = q_hypergeometric_series(a, b, c, q, config.order)
        eq = standard_q_hypergeometric_equation(a, b, c, q)
        return {
            "mode": "series",
            "a": a,
            "b": b,
            "c": c,
            "q": q,
            "order": config.order,
            "coefficients": [series.coefficient(n) for n in range(config.order)],
            "equation": _equation_payload(eq),
        }
    reduction = reduce_to_q_hypergeometric(config.params, tol=config.tol("vanish"))
    series = q_hypergeometric_series(reduction.a, reduction.b, reduction.c, config.params.q, 30)
    residual_poly = apply_equation(reduction.equation, series)
    norm = reduction.equation.max_abs() * series.max_abs()
    checked = [abs(residual_poly.coefficient(k)) for k in range(26)]
    return {
        "mode": "reduce",
        "a": reduction.a,
        "b": reduction.b,
        "c": reduction.c,
        "equation": _equation_payload(reduction.equation),
        "phi_residual_through_25": max(checked) / norm,
    }


def _run_limit(config: RunConfig) -> dict:
    opts = config.options
    report = dgn.verify_limit(
        opts["limit_family"], opts["h"], opts["l"], opts["t"], opts.get("beta"),
        opts["etilde"], opts["eps"], order=config.order,
    )
    ode = dgn.limit_ode(
        report.family, opts["h"], opts["l"], opts["t"], opts.get("beta"), report.btilde_star
    )
    heun = dgn.to_heun_form(ode)
    return {
        "family": report.family.value,
        "etilde": report.etilde,
        "eps": list(report.eps),
        "lambda_q": report.lambda_q,
        "lambda_ode": report.lambda_ode,
        "exponent_residuals": list(report.exponent_residuals),
        "const_fits": list(report.const_fits),
        "const_star": report.const_star,
        "btilde_star": report.btilde_star,
        "fit_index": report.fit_index,
        "coefficient_differences": {
            str(n): list(v) for n, v in report.coefficient_differences.items()
        },
        "exact_indices": list(report.exact_indices),
        "slopes": {str(n): v for n, v in report.slopes.items()},
        "heun_form": {
            "t": heun.t,
            "gamma": heun.gamma,
            "delta": heun.delta,
            "epsilon": heun.epsilon,
            "alpha_prime": heun.alphaP,
            "beta_prime": heun.betaP,
            "fuchs_residual": heun.fuchs_residual(),
            "accessory_offset_known": heun.accessory_offset_known,
        },
    }


_SWEEPABLE_TARGETS = ("exponents", "qes")


def _parse_sweep_spec(spec: str) -> tuple[str, list[float]]:
    try:
        key, rng = spec.split("=", 1)
        start_s, stop_s, step_s = rng.split(":")
        start, stop, step = float(start_s), float(stop_s), float(step_s)
    except ValueError:
        raise ParseError(f"bad sweep spec {spec!r}; expected key=start:stop:step") from None
    if step <= 0 or stop < start:
        raise ParseError(f"bad sweep range in {spec!r}: need step > 0 and stop >= start")
    values = []
    k = 0
    while True:
        value = start + k * step
        if value > stop + step * 1e-9:
            break
        values.append(value)
        k += 1
    return key.strip(), values


def _apply_sweep_value(params, key: str, value: float):
    scalar = {"q": "q", "beta": "beta", "E": "E", "alpha1": "alpha1", "alpha2": "alpha2"}
    if key in scalar:
        return dataclasses.replace(params, **{scalar[key]: value})
    if len(key) == 2 and key[0] in "hlt" and key[1].isdigit():
        index = int(key[1]) - 1
        vec = list(getattr(params, key[0]))
        if not 0 <= index < len(vec):
            raise InvalidParams(f"sweep key {key!r} out of range for this family")
        vec[index] = value
        return dataclasses.replace(params, **{key[0]: tuple(vec)})
    raise InvalidParams(f"cannot sweep over key {key!r}")


def _run_sweep(config: RunConfig) -> dict:
    opts = config.options
    target = opts["target"]
    if target not in _SWEEPABLE_TARGETS:
        raise InvalidParams(f"sweep target must be one of {_SWEEPABLE_TARGETS}")
    specs = [_parse_sweep_spec(s) for s in opts["vary"]]
    grids = [values for _, values in specs]
    keys = [key for key, _ in specs]

    def product(level: int, chosen: list[float]):
        if level == len(grids):
            yield list(chosen)
            return
        for value in grids[level]:
            chosen.append(value)
            yield from product(level + 1, chosen)
            chosen.pop()

    rows = []
    for index, values in enumerate(product(0, [])):
        entry = {"index": index, "values": dict(zip(keys, values))}
        try:
            swept = config.params
            for key, value in zip(keys, values):
                swept = _apply_sweep_value(swept, key, value)
            sub = RunConfig(
                command=target,
                params=swept,
                point=config.point,
                order=config.order,
                tolerances=dict(config.tolerances),
                output_format=config.output_format,
                options=dict(config.options),
            )
            result = _DISPATCH[target](sub)
            if target == "qes":
                result = {
                    "subspace_count": result["subspace_count"],
                    "hits": [
                        {"branch": s["branch"], "lambda": s["lambda"], "n": s["n"]}
                        for s in result["subspaces"]
                    ],
                }
            entry["result"] = result
        except QHeunError as exc:
            entry["error"] = {"type": type(exc).__name__, "message": str(exc)}
        rows.append(entry)
    return {"target": target, "vary": opts["vary"], "count": len(rows), "grid": rows}


_DISPATCH = {
    "exponents": _run_exponents,
    "series": _run_series,
    "apparency": _run_apparency,
    "characterize": _run_characterize,
    "qes": _run_qes,
    "hypergeom": _run_hypergeom,
    "limit": _run_limit,
    "sweep": _run_sweep,
}


def run(config: RunConfig) -> tuple[int, dict]:
    """Execute a validated config; returns (exit_code, report dict)."""
    results = _DISPATCH[config.command](config)
    report = {
        "command": config.command,
        "version": __version__,
        "inputs": _params_payload(config.params)
        if config.params is not None
        else _jsonable(config.options),
        "tolerances": {name: config.tol(name) for name in sorted(DEFAULT_TOLERANCES)},
        "results": _jsonable(results),
    }
    return EXIT_OK, report


# -- rendering ---------------------------------------------------------------


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _flatten(prefix: str, value, out: list[tuple[str, str]]):
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], out)
    elif isinstance(value, list):
        for i, item in enumerate(value):
            _flatten(f"{prefix}[{i}]", item, out)
    else:
        out.append((prefix, json.dumps(value)))


def render_csv(report: dict) -> str:
    rows: list[tuple[str, str]] = []
    _flatten("", report, rows)
    return "key,value\n" + "\n".join(f"{key},{value}" for key, value in rows) + "\n"


def _render_human(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for key in sorted(value):
            inner = value[key]
            if isinstance(inner, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.extend(_render_human(inner, indent + 1))
            else:
                lines.append(f"{pad}{key}: {inner}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_human(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{value}")
    return lines


def render_human(report: dict) -> str:
    return "\n".join(_render_human(report)) + "\n"


RENDERERS = {"json": render_json, "csv": render_csv, "human": render_human}


# -- argument parsing --------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--params", help="parameter file path, or - for stdin")
    parser.add_argument("--family", help="A4, A3 or A2")
    parser.add_argument("--q", help="base q (> 0, != 1)")
    parser.add_argument("--h", help="comma list of h parameters")
    parser.add_argument("--l", help="comma list of l parameters")
    parser.add_argument("--t", help="comma list of t parameters (nonzero)")
    parser.add_argument("--alpha", help="comma pair alpha1,alpha2 (A4 only)")
    parser.add_argument("--beta", help="beta (A4/A3)")
    parser.add_argument("--E", help="accessory parameter E")
    parser.add_argument("--order", type=int, default=32)
    parser.add_argument("--format", choices=("json", "csv", "human"), default="json")
    parser.add_argument("--output", help="write the report to this path instead of stdout")
    parser.add_argument(
        "--tol", action="append", default=[], metavar="NAME=VALUE",
        help="override a named tolerance (vanish, resonance, eigen)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qheun",
        description="q-Heun equation and variants: local analysis, QES, q->1 limits",
    )
    parser.add_argument("--version", action="version", version=f"qheun {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_exp = sub.add_parser("exponents", help="characteristic exponents at 0 or infinity")
    _add_common(p_exp)
    p_exp.add_argument("--point", required=True)

    p_ser = sub.add_parser("series", help="Frobenius series solution")
    _add_common(p_ser)
    p_ser.add_argument("--point", required=True)
    p_ser.add_argument("--branch", choices=("lower", "upper"), default="lower")
    p_ser.add_argument("--lam", type=float, help="explicit exponent (overrides --branch)")

    p_app = sub.add_parser("apparency", help="apparency of a resonant singularity")
    _add_common(p_app)
    p_app.add_argument("--point", required=True)

    p_chz = sub.add_parser("characterize", help="derive and verify the A3/A2 coefficients")
    _add_common(p_chz)

    p_qes = sub.add_parser("qes", help="invariant subspaces and exact eigenpairs")
    _add_common(p_qes)
    p_qes.add_argument(
        "--sweep", action="append", default=[], metavar="KEY=A:B:S",
        help="sweep a parameter over a grid (repeatable)",
    )

    p_hyp = sub.add_parser("hypergeom", help="q-hypergeometric reduction or series")
    _add_common(p_hyp)
    p_hyp.add_argument("--a", type=float)
    p_hyp.add_argument("--b", type=float)
    p_hyp.add_argument("--c", type=float)

    p_lim = sub.add_parser("limit", help="q->1 degeneration study")
    _add_common(p_lim)
    p_lim.add_argument("--limit-family", required=True, help="fromA3 or fromA2")
    p_lim.add_argument("--etilde", required=True, type=float)
    p_lim.add_argument("--eps", required=True, help="comma list of eps values, descending")

    p_sw = sub.add_parser("sweep", help="grid sweep over a target command")
    _add_common(p_sw)
    p_sw.add_argument("--target", required=True, choices=_SWEEPABLE_TARGETS)
    p_sw.add_argument("--vary", action="append", required=True, metavar="KEY=A:B:S")
    p_sw.add_argument("--point")

    return parser


def _collect_tolerances(pairs: list[str]) -> dict[str, float]:
    out: dict[str, float] = {}
    env = os.environ.get("QHEUN_TOLERANCE")
    if env is not None:
        out["vanish"] = _parse_number("QHEUN_TOLERANCE", env)
    for pair in pairs:
        if "=" not in pair:
            raise ParseError(f"bad --tol {pair!r}; expected NAME=VALUE")
        name, value = pair.split("=", 1)
        out[name.strip()] = _parse_number(name, value)
    return out


def _inline_params(args) -> dict[str, str]:
    inline = {}
    for key in _MODEL_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            inline[key] = value
    return inline


def config_from_args(args: argparse.Namespace) -> RunConfig:
    file_pairs = read_param_file(args.params) if getattr(args, "params", None) else {}
    inline = _inline_params(args)
    tolerances = _collect_tolerances(getattr(args, "tol", []))
    options: dict[str, Any] = {}
    params = None
    point = None

    command = args.command
    if command in ("exponents", "series", "apparency", "qes"):
        params = parse_params(file_pairs, inline, kind="model")
    elif command == "characterize":
        params = parse_params(file_pairs, inline, kind="skeleton")
    elif command == "hypergeom":
        if args.a is not None or args.b is not None or args.c is not None:
            if None in (args.a, args.b, args.c) or args.q is None:
                raise InvalidParams("hypergeom series mode needs --a, --b, --c and --q")
            options["abc"] = (args.a, args.b, args.c)
            options["q"] = _parse_number("q", args.q)
        else:
            params = parse_params(file_pairs, inline, kind="model")
    elif command == "limit":
        options["limit_family"] = dgn.LimitFamily.parse(args.limit_family)
        size = 3 if options["limit_family"] is dgn.LimitFamily.FROM_A3 else 4
        merged = dict(file_pairs)
        for key, value in inline.items():
            if key in merged:
                raise ParseError(f"duplicate key {key!r} (file and flags)")
            merged[key] = value
        stray = set(merged) - {"h", "l", "t", "beta"}
        if stray:
            raise ParseError(f"limit takes only h, l, t and beta; got {sorted(stray)}")
        for key in ("h", "l", "t"):
            if key not in merged:
                raise InvalidParams(f"limit requires {key!r}")
            vec = _parse_vector(key, merged[key])
            if len(vec) != size:
                raise InvalidParams(f"{key} must have length {size} for {args.limit_family}")
            options[key] = vec
        if options["limit_family"] is dgn.LimitFamily.FROM_A3:
            if "beta" not in merged:
                raise InvalidParams("fromA3 requires beta")
            options["beta"] = _parse_number("beta", merged["beta"])
        elif "beta" in merged:
            raise InvalidParams("fromA2 takes no beta")
        options["etilde"] = args.etilde
        options["eps"] = list(_parse_vector("eps", args.eps))
    elif command == "sweep":
        options["target"] = args.target
        options["vary"] = list(args.vary)
        params = parse_params(file_pairs, inline, kind="model")

    if command in ("exponents", "series", "apparency"):
        point = local.BasePoint.parse(args.point)
    elif command == "sweep" and args.target == "exponents":
        if not args.point:
            raise InvalidParams("sweep over exponents requires --point")
        point = local.BasePoint.parse(args.point)

    if command == "series":
        options["branch"] = args.branch
        options["lam"] = args.lam
    if command == "qes" and args.sweep:
        options["target"] = "qes"
        options["vary"] = list(args.sweep)
        command = "sweep"

    return RunConfig(
        command=command,
        params=params,
        point=point,
        order=args.order,
        tolerances=tolerances,
        output_format=args.format,
        output_path=args.output,
        options=options,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        code, report = run(config)
    except QHeunError as exc:
        code = EXIT_VALIDATION if isinstance(exc, VALIDATION_ERRORS) else EXIT_NUMERICAL
        payload = {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}
        sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
        return code
    text = RENDERERS[config.output_format](report)
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
