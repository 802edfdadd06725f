"""Command-line surface: character tables, moment queries, verification suites.

Exact values never pass through floating point on their way to the output:
JSON carries {numerator, denominator, twopi_exponent} triples, CSV and
markdown print ``p/q`` strings. Monte Carlo reports are floats by nature and
are attached separately.
"""

from __future__ import annotations

import csv
import io
import json
import os
from fractions import Fraction

import click

from . import classical, montecarlo, quantum, verify
from .characters import (
    dim_char_sum,
    monomial_label,
    sym_character,
    unitary_char_poly,
    weyl_dim,
)
from .classical import DirichletSpec, SimplexMomentSpec
from .combinat import class_order, enumerate_cycle_types, enumerate_partitions
from .errors import CapExceededError
from .quantum import DEFAULT_BOX_CAP, EntryMomentSpec

__all__ = ["main"]

DEFAULT_TABLE_CAP = 10
THREADS_ENV_VAR = "RHO_MOMENTS_THREADS"
FORMATS = click.Choice(["json", "csv", "markdown"])


def resolve_workers(threads: int | None) -> int:
    """CLI flag, then the environment variable, then machine parallelism."""
    if threads is not None:
        return max(1, threads)
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise click.ClickException(f"{THREADS_ENV_VAR} must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


def parse_rational(text: str, label: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"{label} must be a rational like 3 or 5/2, got {text!r}") from exc


def parse_exponents(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(piece) for piece in text.split(","))
    except ValueError as exc:
        raise click.BadParameter(f"--nu must be a comma list of integers, got {text!r}") from exc


def parse_entry_pairs(text: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for token in text.split():
        bits = token.split(",")
        if len(bits) != 2:
            raise click.BadParameter(f"each entry must look like i,j; got {token!r}")
        try:
            pairs.append((int(bits[0]), int(bits[1])))
        except ValueError as exc:
            raise click.BadParameter(f"indices must be integers, got {token!r}") from exc
    if not pairs:
        raise click.BadParameter("--entries must name at least one i,j pair")
    return tuple(pairs)


def fraction_str(value: Fraction) -> str:
    return str(Fraction(value))


def rational_json(value: Fraction | int, twopi_exponent: int = 0) -> dict:
    value = Fraction(value)
    return {
        "numerator": value.numerator,
        "denominator": value.denominator,
        "twopi_exponent": twopi_exponent,
    }


def mc_report_json(report: montecarlo.EstimateReport) -> dict:
    return {
        "estimate": {"re": report.estimate.real, "im": report.estimate.imag},
        "std_error": report.std_error,
        "z_score": report.z_score,
        "sample_count": report.sample_count,
        "seed": report.seed,
    }


def emit_table(fmt: str, name: str, meta: dict, columns: list[str], rows: list[list]) -> None:
    """Render one table whose first column holds labels and the rest exact values."""
    if fmt == "json":
        payload_rows = []
        for row in rows:
            cells = {}
            for col, cell in zip(columns, row):
                cells[col] = cell if isinstance(cell, str) else rational_json(cell)
            payload_rows.append(cells)
        doc = {"table": name, **meta, "columns": columns, "rows": payload_rows}
        click.echo(json.dumps(doc, indent=2))
    elif fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([cell if isinstance(cell, str) else fraction_str(cell) for cell in row])
        click.echo(buffer.getvalue(), nl=False)
    else:
        text_rows = [columns] + [
            [cell if isinstance(cell, str) else fraction_str(cell) for cell in row]
            for row in rows
        ]
        widths = [max(len(r[i]) for r in text_rows) for i in range(len(columns))]
        header, *body = text_rows
        click.echo("| " + " | ".join(h.ljust(w) for h, w in zip(header, widths)) + " |")
        click.echo("|" + "|".join("-" * (w + 2) for w in widths) + "|")
        for row in body:
            click.echo("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |")


def emit_query(fmt: str, doc: dict) -> None:
    """Render a single-result document: query fields, exact value, optional extras."""
    if fmt == "json":
        click.echo(json.dumps(doc, indent=2))
        return
    flat: list[tuple[str, str]] = []

    def flatten(prefix: str, node) -> None:
        if isinstance(node, dict):
            if set(node) == {"numerator", "denominator", "twopi_exponent"}:
                value = Fraction(node["numerator"], node["denominator"])
                text = fraction_str(value)
                if node["twopi_exponent"]:
                    text += f"·(2π)^{node['twopi_exponent']}"
                flat.append((prefix, text))
                return
            for key, child in node.items():
                flatten(f"{prefix}.{key}" if prefix else key, child)
        elif isinstance(node, list):
            flat.append((prefix, " ".join(str(x) for x in node)))
        else:
            flat.append((prefix, str(node)))

    flatten("", doc)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow([k for k, _ in flat])
        writer.writerow([v for _, v in flat])
        click.echo(buffer.getvalue(), nl=False)
    else:
        width = max(len(k) for k, _ in flat)
        for key, value in flat:
            click.echo(f"{key.ljust(width)}  {value}")


def check_table_cap(k: int, cap: int) -> None:
    if k > cap:
        raise click.ClickException(
            f"k={k} exceeds the table cap {cap}; pass --cap-k to override "
            "(character tables grow with the partition count)"
        )
    if cap > DEFAULT_TABLE_CAP:
        click.echo(
            f"warning: cap raised above {DEFAULT_TABLE_CAP}; table size grows "
            "factorially with k",
            err=True,
        )


@click.group()
def main() -> None:
    """Exact moments of the flat density-matrix ensemble and the simplex."""


@main.command("tables")
@click.argument(
    "which", type=click.Choice(["sym-chars", "unitary-chars", "dims", "dim-char-sum"])
)
@click.option("--k", required=True, type=int, help="Number of boxes K.")
@click.option("--n", type=int, default=None, help="Matrix dimension N (dims, dim-char-sum).")
@click.option("--format", "fmt", type=FORMATS, default="markdown", show_default=True)
@click.option("--cap-k", type=int, default=DEFAULT_TABLE_CAP, show_default=True)
def cmd_tables(which: str, k: int, n: int | None, fmt: str, cap_k: int) -> None:
    """Print character/dimension tables; K <= 4 reproduces the reference tables."""
    if k < 0 or (which != "dim-char-sum" and k < 1):
        raise click.BadParameter("k must be positive (dim-char-sum allows 0)")
    check_table_cap(k, cap_k)

    if which == "sym-chars":
        classes = enumerate_cycle_types(k)
        columns = ["irrep"] + [c.label() for c in classes]
        rows: list[list] = [["order"] + [class_order(c) for c in classes]]
        for irrep in enumerate_partitions(k, k):
            rows.append([str(irrep)] + [sym_character(irrep, c) for c in classes])
        emit_table(fmt, "sym-chars", {"k": k}, columns, rows)
    elif which == "unitary-chars":
        classes = enumerate_cycle_types(k)
        columns = ["irrep"] + [monomial_label(c.counts) for c in classes]
        rows = []
        for irrep in enumerate_partitions(k, k):
            poly = unitary_char_poly(irrep)
            rows.append([str(irrep)] + [poly.coefficient(c.counts) for c in classes])
        emit_table(fmt, "unitary-chars", {"k": k}, columns, rows)
    elif which == "dims":
        if n is None:
            raise click.BadParameter("--n is required for dims")
        columns = ["irrep", "dim"]
        rows = [[str(irrep), weyl_dim(irrep, n)] for irrep in enumerate_partitions(k, k)]
        emit_table(fmt, "dims", {"k": k, "n": n}, columns, rows)
    else:
        if n is None:
            n = max(k, 1)
        poly = dim_char_sum(k, n)
        if k == 0:
            ordered = [((), poly.coefficient(()))]
        else:
            ordered = [
                (c.counts, poly.coefficient(c.counts)) for c in enumerate_cycle_types(k)
            ]
        columns = ["monomial", "coefficient"]
        rows = [[monomial_label(key), coeff] for key, coeff in ordered]
        emit_table(fmt, "dim-char-sum", {"k": k, "n": n}, columns, rows)


@main.command("simplex")
@click.option("--nu", required=True, help="Comma list of non-negative exponents.")
@click.option("--lambda", "lam", default="1", show_default=True, help="Scale as a rational.")
@click.option("--dirichlet", is_flag=True, help="Open-region Dirichlet integral instead.")
@click.option("--f-power", type=int, default=0, show_default=True, help="Weight power m in f(t)=t^m (Dirichlet only).")
@click.option("--mc", nargs=2, type=int, default=None, metavar="SAMPLES SEED", help="Attach a Monte Carlo report.")
@click.option("--threads", type=int, default=None, help=f"Worker count (default: {THREADS_ENV_VAR} or machine).")
@click.option("--format", "fmt", type=FORMATS, default="markdown", show_default=True)
def cmd_simplex(nu, lam, dirichlet, f_power, mc, threads, fmt) -> None:
    """Exact simplex/Dirichlet moment for the given exponents and scale."""
    exponents = parse_exponents(nu)
    scale = parse_rational(lam, "--lambda")
    try:
        if dirichlet:
            spec = DirichletSpec(exponents, scale, f_power)
            exact = classical.dirichlet_moment(spec)
        else:
            if f_power:
                raise click.BadParameter("--f-power needs --dirichlet")
            spec = SimplexMomentSpec(exponents, scale)
            exact = classical.simplex_moment(spec)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc

    doc = {
        "query": {
            "integral": "dirichlet" if dirichlet else "simplex",
            "nu": list(exponents),
            "lambda": rational_json(scale),
            **({"f_power": f_power} if dirichlet else {}),
        },
        "exact_value": rational_json(exact),
    }
    if mc is not None:
        samples, seed = mc
        workers = resolve_workers(threads)
        if dirichlet:
            report = montecarlo.estimate_dirichlet_moment(spec, samples, seed, workers=workers)
        else:
            report = montecarlo.estimate_simplex_moment(spec, samples, seed, workers=workers)
        doc["mc_report"] = mc_report_json(report)
    emit_query(fmt, doc)


@main.command("qmoment")
@click.option("--n", required=True, type=int, help="Matrix dimension N.")
@click.option("--entries", required=True, help='Index pairs like "1,1 1,2" (1-based).')
@click.option("--mc", nargs=2, type=int, default=None, metavar="SAMPLES SEED", help="Attach a Monte Carlo report.")
@click.option("--threads", type=int, default=None, help=f"Worker count (default: {THREADS_ENV_VAR} or machine).")
@click.option("--cap-k", type=int, default=DEFAULT_BOX_CAP, show_default=True)
@click.option("--format", "fmt", type=FORMATS, default="markdown", show_default=True)
def cmd_qmoment(n, entries, mc, threads, cap_k, fmt) -> None:
    """Exact mean of a product of density-matrix entries."""
    pairs = parse_entry_pairs(entries)
    try:
        spec = EntryMomentSpec(n, pairs)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc
    if cap_k > DEFAULT_BOX_CAP:
        click.echo(
            f"warning: cap raised above {DEFAULT_BOX_CAP}; the permutation sum "
            "grows as K!",
            err=True,
        )
    try:
        exact = quantum.entry_moment(spec, max_boxes=cap_k)
    except CapExceededError as exc:
        raise click.ClickException(str(exc)) from exc
    raw = quantum.hs_volume(n) * exact
    doc = {
        "query": {"n": n, "entries": [list(p) for p in pairs]},
        "exact_value": rational_json(exact),
        "raw_value": rational_json(raw.rational, raw.twopi_exponent),
    }
    if mc is not None:
        samples, seed = mc
        report = montecarlo.estimate_entry_moment(
            spec, samples, seed, workers=resolve_workers(threads)
        )
        doc["mc_report"] = mc_report_json(report)
    emit_query(fmt, doc)


@main.command("verify")
@click.option(
    "--suite",
    type=click.Choice(["classical", "quantum", "sampler", "all"]),
    default="all",
    show_default=True,
)
@click.option("--samples", type=int, default=100000, show_default=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--threads", type=int, default=None, help=f"Worker count (default: {THREADS_ENV_VAR} or machine).")
@click.option("--format", "fmt", type=FORMATS, default="markdown", show_default=True)
@click.pass_context
def cmd_verify(ctx, suite, samples, seed, threads, fmt) -> None:
    """Run the self-check suites; exit 0 only if every check passes."""
    if samples < 100:
        raise click.BadParameter("--samples must be at least 100")
    workers = resolve_workers(threads)
    results = verify.run_suite(suite, samples, seed, workers)
    all_passed = all(r.passed for r in results)
    if fmt == "json":
        doc = {
            "suite": suite,
            "samples": samples,
            "seed": seed,
            "checks": [
                {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
            ],
            "all_passed": all_passed,
        }
        click.echo(json.dumps(doc, indent=2))
    elif fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(["check", "passed", "detail"])
        for r in results:
            writer.writerow([r.name, "pass" if r.passed else "FAIL", r.detail])
        click.echo(buffer.getvalue(), nl=False)
    else:
        width = max(len(r.name) for r in results)
        for r in results:
            status = "pass" if r.passed else "FAIL"
            click.echo(f"{r.name.ljust(width)}  {status}  {r.detail}")
        click.echo(
            f"{sum(r.passed for r in results)}/{len(results)} checks passed "
            f"(suite={suite}, samples={samples}, seed={seed})"
        )
    if not all_passed:
        ctx.exit(1)


if __name__ == "__main__":
    main()
