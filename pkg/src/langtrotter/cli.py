"""
Command-line front end.

Traces follow a_p = p + 1 - #E(F_p); counts for a and -a differ.

Usage:
    langtrotter ap --curve 1,1 --x 1e6 --out ap.csv
    langtrotter count --kind PEa --a 0 --x 1e6 --compute
    langtrotter count --kind PEk --d -4 --x 1e5 --compute
    langtrotter count --kind sweep --xs 1e4,1e5,1e6 --compute
    langtrotter verify --suite borel-cardinalities --ell 13
    langtrotter groups --ell 5 --a 1 --d -4
    langtrotter rayclass --d -15 --m 7 --bruteforce

Exit codes: 0 ok, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

import click

from . import chebotarev as cb
from ._errors import DomainError
from .elliptic import EllipticCurve, ap_table, cache_path, cached_table, load_or_compute, write_cache
from .groups import gl2_order, quotient_image_count, set_C_a, set_Ccal, subgroup_BUH
from .quadfield import (
    class_number,
    ray_class_count_bruteforce,
    ray_class_order,
    residue_unit_count,
)
from .verify import SUITES, run_suite

__all__ = ["main", "RunConfig", "parse_x"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def parse_x(text: str) -> int:
    """Parse '1000', '1e6', '2.5e5' exactly; reject non-integral values."""
    try:
        v = Decimal(text.strip())
    except InvalidOperation:
        raise ValueError(f"not a number: {text!r}") from None
    if not v.is_finite() or v != v.to_integral_value():
        raise ValueError(f"not an integer: {text!r}")
    return int(v)


class XType(click.ParamType):
    name = "x"

    def convert(self, value, param, ctx):
        if isinstance(value, int):
            return value
        try:
            return parse_x(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


class XListType(click.ParamType):
    name = "xs"

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return list(value)
        try:
            return [parse_x(v) for v in value.split(",") if v.strip()]
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


class CurveType(click.ParamType):
    name = "A,B"

    def convert(self, value, param, ctx):
        if isinstance(value, EllipticCurve):
            return value
        try:
            A, B = (int(v) for v in value.split(","))
            return EllipticCurve(A, B)
        except (ValueError, DomainError) as exc:
            self.fail(f"bad curve {value!r}: {exc}", param, ctx)


@dataclass
class RunConfig:
    curve: EllipticCurve
    x: int
    ell: int | None = None
    a: int | None = None
    d: int | None = None
    out: str | None = None
    fmt: str = "json"
    shards: int = 1

    def __post_init__(self):
        if self.fmt not in ("csv", "json"):
            raise DomainError(f"unknown format {self.fmt!r}")


def _usage(msg: str) -> None:
    click.echo(f"error: {msg}", err=True)
    sys.exit(EXIT_USAGE)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=not text.endswith("\n"))
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        _usage(f"cannot write {out}: {exc}")


def parse_pred(text: str):
    """'all', 'det=N', 'trace=A' or 'C=A' (trace A with square discriminant)."""
    if text == "all":
        return cb.always
    key, _, val = text.partition("=")
    makers = {"det": cb.det_is, "trace": cb.trace_is, "C": cb.in_set_C}
    if key not in makers or not val:
        raise ValueError(f"bad predicate {text!r}")
    return makers[key](int(val))


@click.group()
@click.version_option(package_name="langtrotter")
def main():
    """Frobenius traces, Chebotarev counts and exact group/field checks."""


@main.command("ap")
@click.option("--curve", type=CurveType(), default="1,1", show_default=True)
@click.option("--x", "x", type=XType(), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Default: the cache file for this curve and x.")
@click.option("--shards", type=int, default=1, show_default=True)
def cmd_ap(curve, x, out, shards):
    """Compute a_p for good odd p <= x and write the CSV cache."""
    cfg = RunConfig(curve, x, out=out, shards=shards, fmt="csv")
    table = ap_table(cfg.curve, cfg.x, shards=cfg.shards)
    target = cfg.out or cache_path(cfg.curve, cfg.x)
    try:
        if cfg.out is None:
            target.parent.mkdir(parents=True, exist_ok=True)
        write_cache(table, target)
    except OSError as exc:
        _usage(f"cannot write {target}: {exc}")
    click.echo(f"{len(table)} records -> {target}", err=True)


def _table(curve, x, compute, shards):
    table = cached_table(curve, x)
    if table is not None:
        return table
    if not compute:
        _usage(f"no cached a_p table for {curve} up to {x} (run 'ap' first or pass --compute)")
    return load_or_compute(curve, x, shards=shards)


def _report_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "observed", "expected", "fraction", "margin"])
    for r in rows:
        w.writerow([int(r.x), repr(r.observed), repr(r.expected), repr(r.fraction), repr(r.margin)])
    return buf.getvalue()


KINDS = ("PEa", "PEk", "DE", "piC", "pitilde", "smoothed", "sweep")


@main.command("count")
@click.option("--kind", type=click.Choice(KINDS), required=True)
@click.option("--curve", type=CurveType(), default="1,1", show_default=True)
@click.option("--x", "x", type=XType(), default=None)
@click.option("--xs", type=XListType(), default=None, help="Comma-separated x values for --kind sweep.")
@click.option("--a", "a", type=int, default=0, show_default=True)
@click.option("--d", "d", type=int, default=-4, show_default=True)
@click.option("--ell", type=int, default=None)
@click.option("--pred", default="all", show_default=True, help="all | det=N | trace=A | C=A")
@click.option("--inclusive", is_flag=True, help="PEa with --ell: admit (a^2-4p / l) = 0.")
@click.option("--window", type=click.Choice(["bump", "dominating"]), default="bump", show_default=True)
@click.option("--sweep-kind", type=click.Choice(["PEa", "PEk", "DE", "piC"]), default="PEa", show_default=True)
@click.option("--compute", is_flag=True, help="Compute (and cache) the a_p table if it is missing.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--shards", type=int, default=1, show_default=True)
def cmd_count(kind, curve, x, xs, a, d, ell, pred, inclusive, window, sweep_kind, compute, fmt, out, shards):
    """Emit counting reports (JSON object, or CSV rows for sweeps)."""
    if kind == "sweep":
        if not xs:
            _usage("--kind sweep needs --xs")
        xs_sorted = sorted(xs)
    else:
        if x is None:
            _usage(f"--kind {kind} needs --x")
        xs_sorted = [x]
    if xs_sorted[0] < 3:
        _usage("x must be at least 3")
    try:
        predicate = parse_pred(pred)
    except ValueError as exc:
        _usage(str(exc))
    if kind in ("piC", "pitilde", "smoothed") or (kind == "sweep" and sweep_kind == "piC"):
        ell = ell or 5
    f = cb.make_window(window) if kind == "smoothed" else None
    need = xs_sorted[-1] if f is None else math.floor(f.c2 * xs_sorted[-1])
    table = _table(curve, need, compute, shards)

    def one(k, xv):
        if k == "PEa":
            return cb.count_PEa(table, a, xv, ell=ell, inclusive=inclusive)
        if k == "PEk":
            return cb.count_PEk(table, d, xv)
        if k == "DE":
            return cb.count_DE(table, xv)
        if k == "piC":
            return cb.pi_C(table, ell, xv, predicate)
        if k == "pitilde":
            return cb.pi_tilde_C(table, ell, xv, predicate)
        return cb.smoothed_count(table, ell, predicate, f, xv)

    try:
        if kind == "sweep":
            reports = [one(sweep_kind, xv) for xv in xs_sorted]
            text = _report_csv(reports) if fmt != "json" else json.dumps([json.loads(r.to_json()) for r in reports]) + "\n"
        else:
            rep = one(kind, x)
            text = _report_csv([rep]) if fmt == "csv" else rep.to_json() + "\n"
    except DomainError as exc:
        _usage(str(exc))
    _emit(text, out)


@main.command("verify")
@click.option("--suite", "suites", type=click.Choice(SUITES), multiple=True, help="Run only these suites (repeatable).")
@click.option("--ell", type=int, default=None, help="Restrict the group suites to one prime.")
def cmd_verify(suites, ell):
    """Run the exact verification suites; exit 1 if any check fails."""
    failed = False
    for name in suites or SUITES:
        try:
            res = run_suite(name, ell)
        except (DomainError, ValueError) as exc:
            _usage(f"{name}: {exc}")
        click.echo(res.line())
        failed |= not res.ok
    sys.exit(EXIT_FAIL if failed else EXIT_OK)


@main.command("groups")
@click.option("--ell", type=int, required=True)
@click.option("--a", "a", type=int, default=None, help="Also report the trace-a set sizes.")
@click.option("--d", "d", type=int, default=None, help="Also report the mixed-group sizes for this field.")
def cmd_groups(ell, a, d):
    """Cardinalities of GL_2(F_l), its Borel subgroups and the derived sets (JSON)."""
    try:
        bd = subgroup_BUH(ell)
        out = {"ell": ell, "G": gl2_order(ell), "B": len(bd.B), "U": len(bd.U), "H": len(bd.H),
               "B/U": bd.index_BU, "B/H": bd.index_BH}
        if a is not None:
            C = set_C_a(ell, a)
            CB = C[C[:, 2] == 0]
            out.update({"a": a, "C": len(C), "C&B": len(CB), "C'": quotient_image_count(CB, bd.U, ell)})
            if a % ell == 0:
                out["C''"] = quotient_image_count(CB, bd.H, ell)
        if d is not None:
            cc = set_Ccal(ell, d)
            out.update({"d": d, "mixed": len(cc.group), "mixed_B": cc.size_B, "mixed_U": cc.size_U,
                        "mixed_C&B": cc.C_and_B, "mixed_C'": cc.C_prime})
    except DomainError as exc:
        _usage(str(exc))
    click.echo(json.dumps(out))


@main.command("rayclass")
@click.option("--d", "d", type=int, required=True)
@click.option("--m", "m", type=int, required=True)
@click.option("--bruteforce", is_flag=True, help="Also count classes by enumerating ideals.")
def cmd_rayclass(d, m, bruteforce):
    """Order of the ray class group of conductor m (JSON)."""
    try:
        K = class_number(d)
        out = {"d": d, "m": m, "h": K.h, "w": K.w, "units_mod_m": residue_unit_count(d, m),
               "order": ray_class_order(d, m)}
    except DomainError as exc:
        _usage(str(exc))
    if bruteforce:
        out["bruteforce"] = ray_class_count_bruteforce(d, m)
    click.echo(json.dumps(out))
    if bruteforce and out["bruteforce"] != out["order"]:
        sys.exit(EXIT_FAIL)


if __name__ == "__main__":
    main()
