import logging
import os
import time

import click

from cliquelab.errors import InputError
from cliquelab.oracles import max_fractional_tiling, max_kr_tiling
from cliquelab.tiling import augment_with_history, fracmat_iterate, greedy_tiling
from cliquelab.tilings import format_fractional, format_tiling, format_rational
from dtos.params import AugmentParams, parse_rational
from dtos.report import ReportRow
from sweeper import SweepManager, build_cells, factor_rates, measure

from . import common
from .common import guarded, make_config, parse_instance

logger = logging.getLogger(__name__)

TILE_METHODS = ("greedy", "augment", "fracmat", "exact")
FRAC_METHODS = ("lp", "fracmat")


@click.command()
@click.argument("instance")
@click.option("-r", type=click.IntRange(min=2), default=3, show_default=True)
@click.option("--method", type=click.Choice(TILE_METHODS), default="augment", show_default=True)
@click.option("--target", default="1", show_default=True, help="Coverage fraction the augmentation aims for.")
@click.option("--rounds", type=click.IntRange(min=0), default=3, show_default=True, help="fracmat blow-up rounds.")
@click.option("--max-vertices", type=click.IntRange(min=1), default=4096, show_default=True, help="fracmat blow-up cap.")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Overrides the global --seed for this run.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None, help="Write the CSV row here, not to stderr.")
@click.option("--trace", is_flag=True, help="Print every augmentation step to stderr.")
@click.pass_context
@guarded
def tile(ctx, instance, r, method, target, rounds, max_vertices, seed, report_path, trace):
    """K_r-tiling of INSTANCE plus one CSV row describing it."""
    cfg = make_config(ctx, "tile", instance=instance, r=r, method=method, target=target, seed=seed)
    g = parse_instance(instance)
    started = time.perf_counter()
    if method == "fracmat":
        result = fracmat_iterate(g, r, AugmentParams(r=r, max_rounds=rounds, max_vertices=max_vertices))
        body = format_fractional(result.tiling)
        values = {"weight": result.weight, "note": f"rounds={result.rounds}" + (" truncated" if result.truncated else "")}
        if result.truncated:
            click.echo("warning: blow-up stopped at the vertex cap", err=True)
    else:
        if method == "greedy":
            t = greedy_tiling(g, r)
        elif method == "exact":
            t = max_kr_tiling(g, r, cfg.guard_nodes)
        else:
            run = augment_with_history(g, r, AugmentParams(r=r), parse_rational(target))
            t = run.tiling
            if trace:
                for step, (item, covered) in enumerate(zip(run.traces, run.coverage[1:]), start=1):
                    click.echo(f"step {step}: {item.kind} {item.chosen_clique} -> {item.new_clique} (covered {covered})", err=True)
        body = format_tiling(t)
        values = {"covered": t.covered_count}
    wall_ms = round((time.perf_counter() - started) * 1000)
    row = ReportRow(instance_id=instance, n=g.n, r=r, mode=method, seed=cfg.seed, wall_ms=wall_ms, **values)
    common.emit_data(cfg, body)
    report = common.format_rows([row], timing=True)
    if report_path:
        common.emit_text(cfg.model_copy(update={"out": report_path}), report)
    else:
        click.echo(report, err=True, nl=False)
    common.maybe_record(ctx, cfg, [row])


@click.command()
@click.argument("instance")
@click.option("-r", type=click.IntRange(min=2), default=3, show_default=True)
@click.option("--method", type=click.Choice(FRAC_METHODS), default="lp", show_default=True)
@click.option("--rounds", type=click.IntRange(min=0), default=3, show_default=True, help="fracmat blow-up rounds.")
@click.option("--max-vertices", type=click.IntRange(min=1), default=4096, show_default=True)
@click.pass_context
@guarded
def frac(ctx, instance, r, method, rounds, max_vertices):
    """Fractional K_r-tiling of INSTANCE with exact weights."""
    cfg = make_config(ctx, "frac", instance=instance, r=r, method=method, rounds=rounds)
    g = parse_instance(instance)
    if method == "lp":
        ft = max_fractional_tiling(g, r, cfg.guard_cliques)
    else:
        result = fracmat_iterate(g, r, AugmentParams(r=r, max_rounds=rounds, max_vertices=max_vertices))
        ft = result.tiling
        if result.truncated:
            click.echo("warning: blow-up stopped at the vertex guard", err=True)
    common.emit_data(cfg, format_fractional(ft))
    click.echo(f"{method}: total weight {format_rational(ft.total_weight)} of {g.n}", err=True)


def _write_plot_script(path: str, csv_path: str | None, x: str, y: str) -> None:
    if not csv_path:
        raise InputError("--plot-script needs --out so the script has a CSV to read")
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(common.plot_script(csv_path, x, y))
    logger.info(f"💾 Plot script saved to: {path}")


@click.command("frac-vs-int")
@click.argument("instances", nargs=-1, required=True)
@click.option("-r", type=click.IntRange(min=2), default=3, show_default=True)
@click.option("--eta", default="1/10", show_default=True, help="Count vertices with weight below 1 - η.")
@click.option("--timing", is_flag=True, help="Add the wall_ms column (breaks byte-identical reruns).")
@click.option("--plot-script", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@guarded
def frac_vs_int(ctx, instances, r, eta, timing, plot_script):
    """LP weight, blow-up weight and integral coverage side by side."""
    eta = parse_rational(eta)
    cfg = make_config(ctx, "frac-vs-int", instances=",".join(instances), r=r, eta=format_rational(eta))
    rows = []
    for spec in instances:
        g = parse_instance(spec)
        rows.extend(measure(g, r, spec, None, ("lp", "fracmat", "exact"), cfg.guard_nodes, cfg.guard_cliques, eta))
    common.emit_text(cfg, common.format_rows(rows, timing))
    common.maybe_record(ctx, cfg, rows)
    if plot_script:
        _write_plot_script(plot_script, cfg.out, "n", "weight")


@click.command()
@click.option("--family", type=click.Choice(["gnp", "hs", "two_cliques"]), default="gnp", show_default=True)
@click.option("--n", "ns", type=click.IntRange(min=1), multiple=True, required=True, help="Repeatable.")
@click.option("-r", "rs", type=click.IntRange(min=2), multiple=True, required=True, help="Repeatable.")
@click.option("--p", "ps", multiple=True, help="Edge probability, repeatable (gnp only).")
@click.option("--samples", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--coupled", is_flag=True, help="Same sample stream at every p (gnp graphs nest in p).")
@click.option("--timing", is_flag=True, help="Add the wall_ms column (breaks byte-identical reruns).")
@click.option("--plot-script", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@guarded
def sweep(ctx, family, ns, rs, ps, samples, coupled, timing, plot_script):
    """Compare greedy, augment, fracmat, exact and LP over a grid of instances."""
    cfg = make_config(
        ctx, "sweep", family=family, n=",".join(map(str, ns)), r=",".join(map(str, rs)),
        p=",".join(ps) or None, samples=samples, coupled=coupled or None,
    )
    cells = build_cells(family, ns, rs, ps, samples, cfg.seed, coupled)
    manager = SweepManager(cfg.workers, cfg.guard_nodes, cfg.guard_cliques)
    rows = manager.run(cells)
    common.emit_text(cfg, common.format_rows(rows, timing))
    for key, rate in factor_rates(cells, rows).items():
        click.echo(f"factor rate {key}: {format_rational(rate)}", err=True)
    common.maybe_record(ctx, cfg, rows)
    if plot_script:
        _write_plot_script(plot_script, cfg.out, "n", "covered")
