"""Command line front end: curve files, reports and corpus runs.

Curve files are flat ``key = value`` sections::

    [curve]
    name = cusp
    f = y^2 - x^3
    expected.tau = 2

    [branch]
    x = t^2
    y = t^3

``[branch]`` may repeat.  Other ``[curve]`` keys select and parametrize the
Saito basis construction (see ``_build_basis``).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .curve import lift_parametrization, semigroup_of, validate_branch
from .errors import (
    BadParams,
    CrossCheckFailed,
    ExprSyntaxError,
    IncidenceFailed,
    LiftFailed,
    MissingBranch,
    PrecisionExhausted,
    SaitoError,
)
from .forms import OneForm, exterior_d
from .invariants import invariant_report
from .saito import (
    basis_product,
    basis_times_y,
    closed_form_basis,
    make_basis,
    quasi_weights,
    saito_basis,
)
from .series import INF, BiSeries, format_bivariate, parse_biseries, parse_tseries
from .series.parse import polynomial_degree
from .stdbasis import lambda_gaps, standard_basis

COMMANDS = ("semigroup", "stdbasis", "saito", "invariants", "verify", "all")
PRECISION_CAP = 2 ** 12


@dataclass
class CurveFile:
    name: str
    f: str = None
    branches: list = field(default_factory=list)
    precision: int = None
    expected: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    path: str = None


# ---------------------------------------------------------------------------
# loading


def parse_curve_text(text, path=None):
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = (line[1:-1].strip().lower(), {})
            sections.append(current)
            continue
        if "=" not in line or current is None:
            raise ExprSyntaxError(f"line {lineno}: expected 'key = value' inside a section", 0, raw)
        key, value = (s.strip() for s in line.split("=", 1))
        current[1][key] = value
    curve = [s for name, s in sections if name == "curve"]
    if len(curve) != 1:
        raise BadParams("a curve file needs exactly one [curve] section")
    kv = curve[0]
    cf = CurveFile(name=kv.get("name", Path(path).stem if path else "curve"), path=path)
    cf.f = kv.get("f")
    if "precision" in kv:
        cf.precision = int(kv["precision"])
    for key, value in kv.items():
        if key.startswith("expected."):
            cf.expected[key[len("expected."):]] = value
        elif key not in ("name", "f", "precision"):
            cf.options[key] = value
    for name, s in sections:
        if name == "branch":
            if "x" not in s or "y" not in s:
                raise BadParams("[branch] needs both x and y")
            cf.branches.append((s["x"], s["y"]))
        elif name != "curve":
            raise BadParams(f"unknown section [{name}]")
    if cf.f is None and not cf.branches:
        raise BadParams("curve file needs f or a branch")
    return cf


def load_curve(path):
    """Parse and validate a curve file."""
    cf = parse_curve_text(Path(path).read_text(encoding="utf-8"), str(path))
    ctx = CurveContext(cf)
    for i in range(len(cf.branches)):
        ctx.branch_at(i, 32)
    return cf


class CurveContext:
    """Parsed data of a curve file plus lifted branches."""

    def __init__(self, cf: CurveFile, precision=None):
        self.cf = cf
        self.precision = precision if precision is not None else cf.precision
        self.degree = polynomial_degree(cf.f) if cf.f else None
        self._lifted = {}
        for x, y in cf.branches:
            validate_branch(parse_tseries(x, 64), parse_tseries(y, 64))

    @property
    def work_trunc(self):
        base = 4 * (self.degree or 1) + 40
        return max(base, 2 * (self.precision or 0) + 8)

    def f(self, trunc=None):
        if self.cf.f is None:
            raise BadParams("this command needs f")
        return parse_biseries(self.cf.f, trunc or self.work_trunc)

    def branch_at(self, idx, L):
        hit = self._lifted.get(idx)
        if hit is not None and hit.trunc >= L:
            return hit
        x, y = self.cf.branches[idx]
        # never lift below the working precision: short seeds lose their tail
        L = max(L, self.work_trunc)
        xs, ys = parse_tseries(x, L), parse_tseries(y, L)
        if self.cf.f is not None:
            f = parse_biseries(self.cf.f, max(self.degree + 1, L))
            try:
                ys = lift_parametrization(f, xs, ys, L)
            except LiftFailed as e:
                raise IncidenceFailed(f"branch {idx} does not lie on f: {e}") from None
        b = validate_branch(xs, ys)
        self._lifted[idx] = b
        return b

    def single_branch(self):
        if not self.cf.branches:
            raise MissingBranch("this command needs a [branch] section")
        return lambda L: self.branch_at(0, L)


def _escalate(fn, ctx: CurveContext):
    """Run ``fn``; on PrecisionExhausted double the precision up to the cap."""
    while True:
        try:
            return fn()
        except PrecisionExhausted:
            cur = ctx.precision or 16
            if cur * 2 > PRECISION_CAP:
                raise
            ctx.precision = cur * 2


# ---------------------------------------------------------------------------
# serialization


def _rat(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _series_machine(s: BiSeries):
    return [[i, j, _rat(c)] for (i, j), c in sorted(s.terms.items())]


def _form_machine(w: OneForm):
    return {"dx": _series_machine(w.A), "dy": _series_machine(w.B)}


def _value(v):
    return "inf" if v is INF else v


def _truncated(s: BiSeries, deg):
    return format_bivariate(s.truncate(min(deg, s.trunc)))


# ---------------------------------------------------------------------------
# basis constructions


def _opt(cf, key, trunc):
    val = cf.options.get(key)
    return None if val is None else parse_biseries(val, trunc)


def _base_basis(ctx, kind, g, trunc, branch_key=0):
    cf = ctx.cf
    if kind == "quasihomogeneous":
        return closed_form_basis("quasihomogeneous", {"f": g})
    if kind == "multiplicity2":
        A = _opt(cf, "A", trunc) or BiSeries.zero(trunc)
        B = _opt(cf, "B", trunc)
        if B is None:
            raise BadParams("multiplicity2 needs B")
        return closed_form_basis("multiplicity2", {"A": A, "B": B, "trunc": trunc})
    if kind == "regular":
        return closed_form_basis("regular", {"f": g})
    if kind == "algorithm2":
        return saito_basis(g, ctx.single_branch(), ctx.precision)
    raise BadParams(f"unknown construction {kind!r}")


def _check_equal(a: BiSeries, b: BiSeries, what):
    n = min(a.trunc, b.trunc)
    if not (a.truncate(n) - b.truncate(n)).is_zero():
        raise BadParams(f"{what} does not match f")


def _build_basis(ctx: CurveContext):
    """Saito basis of f by the construction named in the file.

    ``construction``: ``algorithm2`` | ``quasihomogeneous`` | ``multiplicity2``
    | ``regular`` | ``times_y`` | ``product``.  ``times_y`` reads ``g`` and
    ``base``; ``product`` reads ``f1``, ``f2``, ``omega1.dx``/``omega1.dy``,
    optional ``omega2.*`` (default ``df1``), ``S1``, ``S2``, ``G`` and
    optional ``R1``, ``R2``.
    """
    cf = ctx.cf
    trunc = ctx.work_trunc
    f = ctx.f(trunc)
    kind = cf.options.get("construction")
    if kind is None:
        if f.order() == 1:
            kind = "regular"
        elif cf.branches:
            kind = "algorithm2"
        else:
            try:
                quasi_weights(f)
                kind = "quasihomogeneous"
            except BadParams:
                raise BadParams("no construction given and f is not quasi-homogeneous") from None
    if kind == "times_y":
        g = _opt(cf, "g", trunc + 1)
        if g is None:
            raise BadParams("times_y needs g")
        _check_equal(g * BiSeries.y(trunc + 1), f, "y*g")
        basis = basis_times_y(_base_basis(ctx, cf.options.get("base", "multiplicity2"), g, trunc + 1))
    elif kind == "product":
        f1, f2 = _opt(cf, "f1", trunc), _opt(cf, "f2", trunc)
        if f1 is None or f2 is None:
            raise BadParams("product needs f1 and f2")
        _check_equal(f1 * f2, f, "f1*f2")
        w1 = OneForm(_opt(cf, "omega1.dx", trunc), _opt(cf, "omega1.dy", trunc))
        if "omega2.dx" in cf.options:
            w2 = OneForm(_opt(cf, "omega2.dx", trunc), _opt(cf, "omega2.dy", trunc))
        else:
            w2 = exterior_d(f1)
        b1 = make_basis(w1, w2, f1)
        R = None
        if "R1" in cf.options:
            R = (_opt(cf, "R1", trunc), _opt(cf, "R2", trunc))
        basis = basis_product(b1, f2, _opt(cf, "S1", trunc), _opt(cf, "S2", trunc), _opt(cf, "G", trunc), R)
    else:
        basis = _base_basis(ctx, kind, f, trunc)
    return kind, basis


# ---------------------------------------------------------------------------
# reports


def _semigroup_section(ctx):
    b = ctx.single_branch()(64)
    s, rb = semigroup_of(b)
    return {
        "generators": list(s.gens),
        "conductor": s.conductor,
        "gaps": list(s.gaps),
        "multiplicity": b.multiplicity,
        "representatives": [format_bivariate(r.truncate(min(r.trunc, 16))) for r in rb.reps],
    }, s


def _stdbasis_section(ctx):
    res = _escalate(lambda: standard_basis(ctx.f(), ctx.single_branch(), ctx.precision), ctx)
    gaps = lambda_gaps(res)
    return {
        "elements": [
            {"value": e.value, "origin": list(e.origin), "form": str(e.form.truncate(min(e.form.trunc, 12)))}
            for e in res.elements
        ],
        "values": res.values,
        "lambda_gaps": gaps,
        "s_processes": len(res.records),
        "trusted_degree": res.trusted,
        "t_precision": res.L,
    }, res, gaps


def _saito_section(ctx):
    kind, basis = _escalate(lambda: _build_basis(ctx), ctx)
    show = 12
    return {
        "construction": kind,
        "omega1": str(basis.omega1.truncate(min(show, basis.omega1.trunc))),
        "omega2": str(basis.omega2.truncate(min(show, basis.omega2.trunc))),
        "u": _truncated(basis.u, 6),
        "u0": _rat(basis.u.constant()),
        "normalization": _rat(basis.normalization),
        "u_normalized": _rat(basis.normalized_constant),
        "h1": _truncated(basis.h1, show),
        "h2": _truncated(basis.h2, show),
        "sources": [list(s) if isinstance(s, tuple) else s for s in basis.sources],
        "forms": {"omega1": _form_machine(basis.omega1.truncate(min(show, basis.omega1.trunc))),
                  "omega2": _form_machine(basis.omega2.truncate(min(show, basis.omega2.trunc)))},
    }, basis


def run_report(cf: CurveFile, command="all", precision=None):
    """Run the requested stages; returns the report as a plain dict."""
    if command not in COMMANDS:
        raise BadParams(f"unknown command {command!r}")
    ctx = CurveContext(cf, precision)
    report = {"name": cf.name, "command": command}
    timings = {}
    want = {
        "semigroup": {"semigroup"},
        "stdbasis": {"semigroup", "stdbasis"},
        "saito": {"saito"},
        "invariants": {"invariants"},
        "verify": {"semigroup", "stdbasis", "saito", "invariants"},
        "all": {"semigroup", "stdbasis", "saito", "invariants"},
    }[command]
    irreducible = bool(cf.branches) and cf.f is not None
    if command in ("verify", "all", "invariants") and not cf.branches:
        want.discard("semigroup")
        want.discard("stdbasis")
    if command in ("invariants",) and irreducible:
        want |= {"semigroup", "stdbasis", "saito"}
    if command in ("verify", "all", "invariants") and cf.f is not None:
        want.add("saito")
    s = gaps = basis = None
    if "semigroup" in want:
        t0 = time.perf_counter()
        report["semigroup"], s = _semigroup_section(ctx)
        timings["semigroup"] = time.perf_counter() - t0
    if "stdbasis" in want:
        t0 = time.perf_counter()
        report["stdbasis"], _, gaps = _stdbasis_section(ctx)
        timings["stdbasis"] = time.perf_counter() - t0
    if "saito" in want:
        t0 = time.perf_counter()
        report["saito"], basis = _saito_section(ctx)
        timings["saito"] = time.perf_counter() - t0
    if "invariants" in want:
        t0 = time.perf_counter()
        f = ctx.f()
        branch = ctx.branch_at(0, 64) if cf.branches and cf.f is not None else None
        inv = invariant_report(f, basis, gaps, branch if gaps is not None else None, s)
        report["invariants"] = {
            "mu": inv.mu,
            "tau": inv.tau,
            "tau_routes": inv.tau_routes,
            "lambda_gaps": inv.lambda_gaps,
            "gsv": None if inv.gsv is None else [_value(v) for v in inv.gsv],
            "min_delta": _value(inv.min_delta) if inv.min_delta is not None else None,
            "routes_agree": inv.routes_agree,
            "consistent": inv.consistent,
        }
        if inv.min_delta is not None and s is not None and s.gens[0] > 1:
            report["invariants"]["min_delta_bound"] = inv.min_delta <= -s.gens[0] + 1
        timings["invariants"] = time.perf_counter() - t0
    if command == "verify":
        report["checks"] = verify_report(report)
        bad = [k for k, v in report["checks"].items() if not v]
        if bad:
            report["timings"] = timings
            raise CrossCheckFailed(f"checks failed: {', '.join(sorted(bad))}")
    report["timings"] = timings
    return report


def verify_report(report):
    """Boolean cross-checks over a full report plus its expectations."""
    checks = {}
    inv = report.get("invariants")
    if inv:
        checks["tau_routes_agree"] = inv["routes_agree"]
        checks["consistent"] = inv["consistent"]
        checks["tau_le_mu"] = inv["tau"] <= inv["mu"]
        if "min_delta_bound" in inv:
            checks["min_delta_bound"] = inv["min_delta_bound"]
    if "semigroup" in report and inv:
        checks["conductor_is_mu"] = report["semigroup"]["conductor"] == inv["mu"]
    return checks


def _expected_value(report, key):
    inv = report.get("invariants", {})
    sg = report.get("semigroup", {})
    sb = report.get("stdbasis", {})
    sa = report.get("saito", {})
    table = {
        "mu": lambda: inv["mu"],
        "tau": lambda: inv["tau"],
        "tau_cofactors": lambda: inv["tau_routes"]["mu_minus_I"],
        "tau_berger": lambda: inv["tau_routes"]["berger"],
        "lambda_gaps": lambda: sb["lambda_gaps"] if sb else inv["lambda_gaps"],
        "semigroup": lambda: sg["generators"],
        "conductor": lambda: sg["conductor"],
        "u_normalized": lambda: sa["u_normalized"],
        "u0": lambda: sa["u0"],
        "min_delta": lambda: inv["min_delta"],
        "gsv": lambda: inv["gsv"],
    }
    if key not in table:
        raise BadParams(f"unknown expectation {key!r}")
    return table[key]()


def _parse_expected(text):
    text = text.strip()
    if text in ("", "none", "{}", "[]"):
        return []
    if "," in text or text.startswith("["):
        return [_parse_scalar(p) for p in text.strip("[]{}").split(",") if p.strip()]
    return _parse_scalar(text)


def _parse_scalar(s):
    s = s.strip()
    try:
        return int(s)
    except ValueError:
        return _rat(Fraction(s))


def _normalize(v):
    if isinstance(v, (list, tuple)):
        return [_normalize(x) for x in v]
    if isinstance(v, Fraction):
        return _rat(v)
    if isinstance(v, str):
        try:
            return _parse_scalar(v)
        except (ValueError, ZeroDivisionError):
            return v
    return v


_LIST_KEYS = ("lambda_gaps", "semigroup", "gsv")


def check_expectations(cf: CurveFile, report):
    out = {}
    for key, raw in sorted(cf.expected.items()):
        want = _normalize(_parse_expected(raw))
        if key in _LIST_KEYS and not isinstance(want, list):
            want = [want]
        try:
            got = _normalize(_expected_value(report, key))
        except (KeyError, TypeError):
            got = None
        out[key] = {"expected": want, "got": got, "pass": want == got}
    return out


def _run_one(path):
    try:
        cf = parse_curve_text(Path(path).read_text(encoding="utf-8"), str(path))
        report = run_report(cf, "all")
        checks = check_expectations(cf, report)
        checks.update({k: {"pass": v} for k, v in verify_report(report).items()})
        ok = all(c["pass"] for c in checks.values())
        return cf.name, {"pass": ok, "checks": checks}
    except SaitoError as e:
        return Path(path).stem, {"pass": False, "error": f"{type(e).__name__}: {e}"}


def run_corpus(directory, jobs=1):
    """Run every ``*.curve`` file; returns ``{name: result}`` sorted by name."""
    paths = sorted(Path(directory).glob("*.curve"))
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, paths))
    else:
        results = [_run_one(p) for p in paths]
    return dict(sorted(results))


# ---------------------------------------------------------------------------
# output


def to_machine(report):
    return json.dumps(_jsonable(report), sort_keys=True, ensure_ascii=False, indent=1)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Fraction):
        return _rat(v)
    if v is INF:
        return "inf"
    if isinstance(v, float):
        return round(v, 6)
    return v


def to_text(report, indent=0):
    lines = []
    pad = "  " * indent
    for key in sorted(report):
        if key == "forms":
            continue
        val = report[key]
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(to_text(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for item in val:
                lines.append(f"{pad}  - " + ", ".join(f"{k}={_jsonable(item[k])}" for k in sorted(item)))
        else:
            if isinstance(val, float):
                val = f"{val:.3f}s"
            lines.append(f"{pad}{key}: {_jsonable(val)}")
    return "\n".join(lines)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="saitobasis", description="Saito bases of plane curve germs")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        p.add_argument("--input", required=True)
        p.add_argument("--precision", type=int, default=None)
        p.add_argument("--format", choices=("text", "machine"), default="text")
    pc = sub.add_parser("corpus")
    pc.add_argument("--dir", required=True)
    pc.add_argument("--jobs", type=int, default=1)
    pc.add_argument("--format", choices=("text", "machine"), default="text")
    args = parser.parse_args(argv)
    try:
        if args.command == "corpus":
            summary = run_corpus(args.dir, args.jobs)
            if args.format == "machine":
                print(to_machine(summary))
            else:
                for name, res in summary.items():
                    status = "PASS" if res["pass"] else "FAIL"
                    detail = res.get("error", "")
                    if not res["pass"] and "checks" in res:
                        detail = ", ".join(k for k, c in res["checks"].items() if not c["pass"])
                    print(f"{status} {name} {detail}".rstrip())
            return 0 if all(r["pass"] for r in summary.values()) else 3
        cf = parse_curve_text(Path(args.input).read_text(encoding="utf-8"), args.input)
        report = run_report(cf, args.command, args.precision)
        if cf.expected and args.command in ("verify", "all"):
            report["expectations"] = check_expectations(cf, report)
        print(to_machine(report) if args.format == "machine" else to_text(report))
        if "expectations" in report and not all(c["pass"] for c in report["expectations"].values()):
            return 3
        return 0
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SaitoError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
