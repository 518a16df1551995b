"""``cvwitness`` command line: analyze one state, sweep a grid, verify oracles.

Exit status is 0 on success, 1 when a verification check fails and 2 on
usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import epr_criterion as ec
from . import gaussian_moments as gm
from . import oracles
from .errors import CvWitnessError, DomainError
from .fock_engine import TruncationPolicy, extract_moments
from .state_library import (
    EcsSign,
    coherent_product,
    entangled_coherent,
    random_separable,
    two_mode_squeezed_vacuum,
)

SIG_DIGITS = 12

# family -> (ordered parameter names, engines allowed)
FAMILIES = {
    "tmsv": (("r",), ("fock", "gaussian")),
    "coherent_product": (("alpha1", "alpha2"), ("fock",)),
    "ecs_plus": (("R", "theta"), ("fock",)),
    "ecs_minus": (("R", "theta"), ("fock",)),
    "santos": (("n", "x"), ("gaussian",)),
    "mincorr": (("r", "d"), ("gaussian",)),
    "separable_mixture": (("seed", "branches"), ("fock",)),
}
DEFAULTS = {"theta": 0.0, "alpha1": 0j, "alpha2": 0j, "branches": 3, "seed": 0}

CSV_HEADER = [
    "family", "param1", "param2", "n1", "n2", "delta", "c", "t", "du2", "dv2",
    "tau", "is_gees", "u_squeezed", "v_squeezed", "valid",
]


@dataclass
class StateSpec:
    family: str
    params: dict
    engine: str = "auto"
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)
    cutoff: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        names, engines = FAMILIES[self.family]
        if self.engine == "auto":
            self.engine = engines[0]
        if self.engine not in engines:
            raise DomainError(f"engine {self.engine!r} is not available for family {self.family!r}")
        params = dict(self.params)
        if self.family.startswith("ecs") and "alpha" in params:
            alpha = complex(params.pop("alpha"))
            params["R"], params["theta"] = abs(alpha), math.atan2(alpha.imag, alpha.real)
        for name in names:
            if name not in params or params[name] is None:
                if name not in DEFAULTS:
                    raise DomainError(f"family {self.family!r} needs parameter {name!r}")
                params[name] = DEFAULTS[name]
        self.params = {name: params[name] for name in names}


@dataclass
class Evaluation:
    spec: StateSpec
    moments: ec.MomentSet
    report: ec.CriterionReport
    cutoff: int | None
    tail_mass: float
    valid: bool


def evaluate(spec: StateSpec) -> Evaluation:
    """Build the state named by ``spec``, extract moments and run the witness."""
    p = spec.params
    policy = spec.truncation
    cutoff, tail, valid = None, 0.0, True
    if spec.engine == "gaussian":
        if spec.family == "santos":
            form = gm.santos_form(p["n"], p["x"])
        elif spec.family == "mincorr":
            form = gm.minimum_correlation_form(p["r"], p["d"])
        else:
            form = gm.tmsv_form(p["r"])
        moments = gm.to_moment_set(form)
        valid = form.physical
    else:
        if spec.family == "tmsv":
            state = two_mode_squeezed_vacuum(p["r"], policy, cutoff=spec.cutoff)
        elif spec.family == "coherent_product":
            state = coherent_product(p["alpha1"], p["alpha2"], policy, cutoff=spec.cutoff)
        elif spec.family.startswith("ecs"):
            sign = EcsSign.PLUS if spec.family == "ecs_plus" else EcsSign.MINUS
            alpha = p["R"] * complex(math.cos(p["theta"]), math.sin(p["theta"]))
            state = entangled_coherent(sign, alpha, policy, cutoff=spec.cutoff)
        else:
            state = random_separable(int(p["seed"]), spec.cutoff or 24, int(p["branches"]))
        moments = extract_moments(state)
        cutoff, tail, valid = state.cutoff, state.tail_mass, state.converged
    report = ec.assess(moments)
    valid = valid and not report.physical_warnings
    return Evaluation(spec, moments, report, cutoff, tail, valid)


# --- serialization -----------------------------------------------------------

def _num(x):
    if x is None:
        return None
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_num(x.real), _num(x.imag)]
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.{SIG_DIGITS}g}")


def report_document(ev: Evaluation) -> dict:
    m, r = ev.moments, ev.report
    return {
        "family": ev.spec.family,
        "params": {k: _num(v) for k, v in ev.spec.params.items()},
        "engine": {"name": ev.spec.engine, "cutoff": ev.cutoff, "tail_mass": _num(ev.tail_mass)},
        "moments": {
            "mean1": _num(m.mean1), "mean2": _num(m.mean2),
            "n1": _num(m.n1), "n2": _num(m.n2),
            "sq1": _num(m.sq1), "sq2": _num(m.sq2),
            "cross": _num(m.cross), "crossc": _num(m.crossc),
        },
        "report": {
            "c": _num(r.c), "delta": _num(r.delta), "du2": _num(r.du2), "dv2": _num(r.dv2),
            "bound": _num(r.bound), "t": _num(r.t_expectation), "is_gees": r.is_gees,
            "u_squeezed": r.u_squeezed, "v_squeezed": r.v_squeezed, "tau": _num(r.tau),
            "degree_literal": _num(r.degree_literal), "degree_monotone": _num(r.degree_monotone),
            "warnings": list(r.physical_warnings),
        },
    }


def dumps(doc) -> str:
    """Canonical JSON: insertion key order, floats already cut to 12 digits."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def canonicalize(text: str) -> str:
    def fix(obj):
        if isinstance(obj, float):
            return _num(obj)
        if isinstance(obj, list):
            return [fix(v) for v in obj]
        if isinstance(obj, dict):
            return {k: fix(v) for k, v in obj.items()}
        return obj

    return dumps(fix(json.loads(text)))


# --- commands ----------------------------------------------------------------

def cmd_analyze(spec: StateSpec) -> dict:
    return report_document(evaluate(spec))


def parse_grid(text: str):
    """``"min:max:steps"`` to an array, or a single number to a 1-element list."""
    parts = text.split(":")
    if len(parts) == 1:
        return [_parse_value(parts[0])]
    if len(parts) != 3:
        raise DomainError(f"malformed grid {text!r}; expected min:max:steps")
    lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if steps < 1:
        raise DomainError("grid needs at least one step")
    return list(np.linspace(lo, hi, steps)) if steps > 1 else [lo]


def cmd_sweep(family: str, grids: dict, out, engine="auto", truncation=None, cutoff=None) -> int:
    """Evaluate every grid point in lexicographic order and write CSV rows to ``out``."""
    names, _ = FAMILIES[family]
    axes = [grids.get(name) or [DEFAULTS.get(name)] for name in names]
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    rows = 0
    for point in itertools.product(*axes):
        params = dict(zip(names, point))
        spec = StateSpec(family, params, engine, truncation or TruncationPolicy(), cutoff)
        try:
            ev = evaluate(spec)
        except CvWitnessError as exc:
            if isinstance(exc, DomainError):
                raise
            writer.writerow([family, *_param_cells(point)] + [""] * 11 + ["false"])
            rows += 1
            continue
        m, r = ev.moments, ev.report
        cells = [_num(v) for v in (m.n1, m.n2, r.delta, r.c, r.t_expectation, r.du2, r.dv2, r.tau)]
        flags = [str(b).lower() for b in (r.is_gees, r.u_squeezed, r.v_squeezed, ev.valid)]
        writer.writerow([family, *_param_cells(point), *cells, *flags])
        rows += 1
    return rows


def _param_cells(point):
    cells = [_cell(v) for v in point]
    return (cells + [""])[:2]


def _cell(v):
    if isinstance(v, complex):
        return f"{v.real:.{SIG_DIGITS}g}{v.imag:+.{SIG_DIGITS}g}j"
    return _num(v)


@dataclass
class Check:
    name: str
    source: str
    value: float
    expected: float
    tolerance: float
    kind: str = "value"
    caveat: str | None = None

    @property
    def diff(self) -> float:
        return abs(self.value - self.expected)

    @property
    def passed(self) -> bool:
        if self.kind == "sign":
            return np.sign(self.value) == np.sign(self.expected)
        return self.diff <= self.tolerance


def verification_checks(tolerance: float | None = None, policy: TruncationPolicy | None = None) -> list[Check]:
    """Every oracle-vs-engine comparison, with default or overridden tolerances."""
    policy = policy or TruncationPolicy()
    tol_g = tolerance if tolerance is not None else 1e-6
    tol_f = tolerance if tolerance is not None else 10 * policy.tail_tolerance
    checks = []

    for r in (0.2, 0.5, 1.0):
        o = oracles.tmsv_tau(r)
        tau = ec.assess(extract_moments(two_mode_squeezed_vacuum(r, policy))).tau
        checks.append(Check(f"tmsv tau r={r}", o.source, tau, o.value, tol_f))
        g = ec.assess(gm.to_moment_set(gm.tmsv_form(r))).tau
        checks.append(Check(f"tmsv tau r={r} (gaussian)", o.source, g, o.value, tol_g))

    for n, x in ((1.0, 0.6), (1.0, 0.5), (3.0, 0.8), (0.5, -0.5)):
        o = oracles.santos_t(n, x)
        t = ec.assess(gm.to_moment_set(gm.santos_form(n, x))).t_expectation
        checks.append(Check(f"santos <T> n={n} x={x}", o.source, t, o.value, tol_g))

    for n in (1.0, 3.0):
        lo, hi = oracles.santos_window(n)
        t_edge = ec.t_expectation(gm.to_moment_set(gm.santos_form(n, lo)), 1.0)
        checks.append(Check(f"santos window low edge n={n}", "santos.window", t_edge, 0.0, tol_g))

    for r, d in ((1.0, 0.3), (1.0, 0.0), (0.7, 0.45)):
        o = oracles.mincorr_t_c1(r, d)
        t = ec.t_expectation(gm.to_moment_set(gm.minimum_correlation_form(r, d)), 1.0)
        checks.append(Check(f"mincorr <T>(c=1) r={r} d={d}", o.source, t, o.value, tol_g))

    for r, d in ((1.0, 0.3), (0.7, 0.45)):
        o = oracles.mincorr_t_reported(r, d)
        t = ec.assess(gm.to_moment_set(gm.minimum_correlation_form(r, d))).t_expectation
        checks.append(Check(f"mincorr <T>(optimal) r={r} d={d}", o.source, t, o.value, tol_g,
                            kind="sign", caveat=o.caveat))

    for sign in EcsSign:
        for R, theta in ((1.0, math.pi / 2), (0.8, 0.0), (1.2, math.pi / 4)):
            o = oracles.ecs_t(sign, R, theta)
            alpha = R * complex(math.cos(theta), math.sin(theta))
            t = ec.assess(extract_moments(entangled_coherent(sign, alpha, policy))).t_expectation
            checks.append(Check(f"ecs {sign.value} <T> R={R} theta={theta:.6g}", o.source, t, o.value, tol_f))

    kernels = [gm.santos_form(1.0, 0.6), gm.minimum_correlation_form(1.0, 0.3), gm.tmsv_form(0.5)]
    for form in kernels:
        quad = oracles.q_quadrature_moments(form)
        exact = gm.to_moment_set(form)
        for key, val in (("norm", gm.q_normalization_check(form)), ("n1", exact.n1),
                         ("n2", exact.n2), ("delta", ec.delta(exact))):
            checks.append(Check(f"{form.label} quadrature {key}", "gaussian.q_integral",
                                val, quad[key], tol_g))
    return checks


def cmd_verify(tolerance: float | None = None, policy: TruncationPolicy | None = None):
    checks = verification_checks(tolerance, policy)
    summary = {
        "passed": all(c.passed for c in checks),
        "checks": [
            {
                "name": c.name, "source": c.source, "kind": c.kind,
                "value": _num(c.value), "expected": _num(c.expected),
                "abs_diff": _num(c.diff), "tolerance": _num(c.tolerance),
                "passed": bool(c.passed), "caveat": c.caveat,
            }
            for c in checks
        ],
    }
    return summary


def format_table(summary) -> str:
    lines = []
    for c in summary["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        if c["kind"] == "sign":
            detail = f"sign {c['value']:+.6g} vs {c['expected']:+.6g}"
        else:
            detail = f"|d|={c['abs_diff']:.3e} tol={c['tolerance']:.1e}"
        line = f"{status}  {c['name']:<44} {detail}  [{c['source']}]"
        if c["caveat"]:
            line += f"  ({c['caveat']})"
        lines.append(line)
    lines.append(f"{'ALL PASS' if summary['passed'] else 'FAILURES'}: "
                 f"{sum(c['passed'] for c in summary['checks'])}/{len(summary['checks'])}")
    return "\n".join(lines) + "\n"


# --- argument parsing --------------------------------------------------------

def _parse_value(text: str):
    text = text.strip()
    if text.endswith("i"):
        text = text[:-1] + "j"
    try:
        return float(text)
    except ValueError:
        try:
            return complex(text)
        except ValueError:
            raise DomainError(f"cannot parse number {text!r}") from None


PARAM_FLAGS = ("r", "alpha", "alpha1", "alpha2", "R", "theta", "n", "x", "d", "seed", "branches")


def _add_common(p):
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--engine", default="auto", choices=["auto", "fock", "gaussian"])
    p.add_argument("--tail-tol", type=float, default=1e-10)
    p.add_argument("--max-cutoff", type=int, default=120)
    p.add_argument("--cutoff", type=int, default=None)
    for name in PARAM_FLAGS:
        p.add_argument(f"--{name}", dest=f"p_{name}", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvwitness", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="assess a single state and print a JSON report")
    _add_common(p)
    p.add_argument("--json", dest="json_out", default=None, help="also write the report here")

    p = sub.add_parser("sweep", help="evaluate a parameter grid and write CSV")
    _add_common(p)
    p.add_argument("--out", default="-")

    p = sub.add_parser("verify", help="run every oracle-vs-engine check")
    p.add_argument("--json", action="store_true", help="emit the JSON summary")
    p.add_argument("--tolerance", type=float, default=None, help="override every tolerance")
    p.add_argument("--tail-tol", type=float, default=1e-10)
    return parser


def _error(exc: Exception) -> int:
    doc = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    sys.stdout.write(json.dumps(doc) + "\n")
    return 2


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            summary = cmd_verify(args.tolerance, TruncationPolicy(tail_tolerance=args.tail_tol))
            sys.stdout.write(dumps(summary) if args.json else format_table(summary))
            return 0 if summary["passed"] else 1

        policy = TruncationPolicy(tail_tolerance=args.tail_tol, max_cutoff=args.max_cutoff)
        raw = {name: getattr(args, f"p_{name}") for name in PARAM_FLAGS}
        raw = {k: v for k, v in raw.items() if v is not None}

        if args.command == "analyze":
            params = {k: _parse_value(v) for k, v in raw.items()}
            spec = StateSpec(args.family, params, args.engine, policy, args.cutoff)
            text = dumps(cmd_analyze(spec))
            if args.json_out:
                with open(args.json_out, "w") as fh:
                    fh.write(text)
            sys.stdout.write(text)
            return 0

        grids = {k: parse_grid(v) for k, v in raw.items()}
        if args.family.startswith("ecs") and "alpha" in grids:
            raise DomainError("sweep ecs families over --R and --theta")
        if args.out == "-":
            cmd_sweep(args.family, grids, sys.stdout, args.engine, policy, args.cutoff)
        else:
            buf = io.StringIO()
            cmd_sweep(args.family, grids, buf, args.engine, policy, args.cutoff)
            with open(args.out, "w", newline="") as fh:
                fh.write(buf.getvalue())
        return 0
    except (CvWitnessError, ValueError) as exc:
        return _error(exc)


if __name__ == "__main__":
    sys.exit(main())
