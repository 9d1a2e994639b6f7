import logging

import click

from cliquelab.constructions import bollobas_erdos, bottleneck_degree_bound, extremal_properties, gamma_graph
from cliquelab.errors import InputError
from cliquelab.graph import min_degree
from cliquelab.graph_io import format_dimacs, format_edgelist
from cliquelab.oracles import (
    alpha_ell,
    find_kr_factor,
    independence_number,
    max_clique_mask,
    max_kr_tiling,
    satisfies_threshold,
)
from cliquelab.reduced import read_reduced
from dtos.params import SphereParams, ThresholdParams
from dtos.report import ReportRow

from . import common
from .common import EXIT_ASSERTION, guarded, make_config, parse_blowup, parse_instance

logger = logging.getLogger(__name__)

EXTREMAL_FAMILIES = ("hs", "two_cliques", "bottleneck")
SOLVE_TASKS = ("alpha", "alpha-ell", "clique", "tiling", "factor", "threshold")


@click.command()
@click.argument("instance")
@click.option("--format", "fmt", type=click.Choice(["edgelist", "dimacs"]), default="edgelist", show_default=True)
@click.option("--dim", type=click.IntRange(min=4), default=6, show_default=True, help="Sphere dimension (sphere:M, gamma only).")
@click.option("--zeta", default="1/8", show_default=True, help="Sphere ζ (sphere:M, gamma only).")
@click.pass_context
@guarded
def gen(ctx, instance, fmt, dim, zeta):
    """Generate INSTANCE as a graph file.

    Besides the instance grammar this takes sphere:M and gamma:REDUCED_FILE:Y1;
    blow-ups and gamma graphs record ``cluster_of`` in the sidecar.
    """
    cfg = make_config(ctx, "gen", instance=instance, format=fmt)
    metadata = {"instance": instance}
    family = instance.partition(":")[0]
    if family == "sphere":
        try:
            m = int(instance.split(":", 1)[1])
        except ValueError:
            raise InputError(f"instance {instance!r} must look like sphere:M") from None
        generated = bollobas_erdos(SphereParams(dim=dim, points_per_side=m, zeta=zeta), cfg.seed)
    elif family == "gamma":
        path, _, y1 = instance.partition(":")[2].rpartition(":")
        try:
            y1 = int(y1)
        except ValueError:
            raise InputError(f"instance {instance!r} must look like gamma:REDUCED_FILE:Y1") from None
        if not path or y1 < 1:
            raise InputError(f"instance {instance!r} must look like gamma:REDUCED_FILE:Y1")
        try:
            R = read_reduced(path)
        except OSError as e:
            raise InputError(f"cannot read reduced multigraph {path!r}: {e.strerror}") from None
        generated = gamma_graph(R, y1, zeta, cfg.seed, dim=dim)
    elif family == "blowup":
        generated = parse_blowup(instance)
    else:
        generated = None
    if generated is not None:
        g = generated.graph
        metadata.update(generated.metadata())
    else:
        g = parse_instance(instance)
        metadata.update({"n": g.n, "m": g.edge_count})
    if g.n <= 64:
        metadata["properties"] = {**metadata.get("properties", {}), **extremal_properties(g)}
    body = format_dimacs(g) if fmt == "dimacs" else format_edgelist(g)
    common.emit_data(cfg, body, graph=metadata)
    click.echo(f"generated {g!r}", err=True)


@click.command()
@click.argument("instance")
@click.option("-r", type=click.IntRange(min=2), default=3, show_default=True)
@click.option("--task", type=click.Choice(SOLVE_TASKS), default="factor", show_default=True)
@click.option("--ell", type=click.IntRange(min=2), default=3, show_default=True, help="ℓ for alpha-ell.")
@click.option("--mu", default="1/10", show_default=True, help="μ for the threshold check.")
@click.option("--gamma", default="1/10", show_default=True, help="γ for the threshold check.")
@click.pass_context
@guarded
def solve(ctx, instance, r, task, ell, mu, gamma):
    """Run one exact oracle on INSTANCE."""
    cfg = make_config(ctx, "solve", instance=instance, r=r, task=task)
    g = parse_instance(instance)
    lines = [f"instance: {instance}", f"n: {g.n}", f"m: {g.edge_count}"]
    if task == "alpha":
        lines.append(f"alpha: {independence_number(g, cfg.guard_nodes)}")
    elif task == "alpha-ell":
        lines.append(f"alpha_{ell}: {alpha_ell(g, ell, cfg.guard_nodes)}")
    elif task == "clique":
        mask = max_clique_mask(g, max_nodes=cfg.guard_nodes)
        lines.append(f"omega: {mask.bit_count()}")
        lines.append("clique: " + " ".join(str(v) for v in range(g.n) if mask >> v & 1))
    elif task == "tiling":
        t = max_kr_tiling(g, r, cfg.guard_nodes)
        lines.append(f"max_k{r}_tiling: {len(t)} cliques covering {t.covered_count}")
        lines.extend(" ".join(map(str, c)) for c in t.cliques)
    elif task == "factor":
        factor = find_kr_factor(g, r, cfg.guard_nodes)
        lines.append(f"k{r}_factor: {'yes' if factor else 'no'}")
        if factor:
            lines.extend(" ".join(map(str, c)) for c in factor.cliques)
    else:
        verdict = satisfies_threshold(g, ThresholdParams(r=r, mu=mu, gamma=gamma), cfg.guard_nodes)
        lines.append(f"min_degree: {verdict.min_degree} (needs >= {verdict.degree_bound})")
        lines.append(f"alpha: {verdict.alpha} (needs < {verdict.alpha_bound})")
        lines.extend(f"{name}: {'ok' if ok else 'fails'}" for name, ok in verdict.clauses().items())
        lines.append(f"holds: {'yes' if verdict.holds else 'no'}")
    common.emit_text(cfg, "\n".join(lines) + "\n")


def _extremal_cases(family: str, ns, r: int):
    """(instance id, graph, r, expected min degree or None, expected alpha or None) per case."""
    if family == "hs":
        for n in ns:
            yield f"hs:{n}:{r}", parse_instance(f"hs:{n}:{r}"), r, (n - n // r) - 1, n // r + 1
    elif family == "two_cliques":
        for n in ns:
            g = parse_instance(f"two_cliques:{n}")
            for k in (2, 3):
                yield f"two_cliques:{n}", g, k, n // 2 - 2, 2
    else:
        for n in ns:
            yield f"bottleneck:{n}:{r}", parse_instance(f"bottleneck:{n}:{r}"), r, None, None


@click.command("verify-extremal")
@click.argument("family", type=click.Choice(EXTREMAL_FAMILIES))
@click.option("--n", "ns", type=click.IntRange(min=1), multiple=True, required=True, help="Repeatable.")
@click.option("-r", type=click.IntRange(min=2), default=4, show_default=True)
@click.pass_context
@guarded
def verify_extremal(ctx, family, ns, r):
    """Check that the extremal constructions have no K_r-factor."""
    cfg = make_config(ctx, "verify-extremal", family=family, n=",".join(map(str, ns)), r=r)
    rows, failures = [], []
    for instance_id, g, k, want_delta, want_alpha in _extremal_cases(family, ns, r):
        delta, alpha = min_degree(g), independence_number(g, cfg.guard_nodes)
        factor = find_kr_factor(g, k, cfg.guard_nodes) is not None
        rows.append(ReportRow(instance_id=instance_id, n=g.n, r=k, min_degree=delta, alpha=alpha,
                              mode="exact", factor=factor, seed=None))
        if factor:
            failures.append(f"{instance_id}: expected no K_{k}-factor, found one")
        if want_delta is not None and delta != want_delta:
            failures.append(f"{instance_id}: expected min degree {want_delta}, got {delta}")
        if want_alpha is not None and alpha != want_alpha:
            failures.append(f"{instance_id}: expected alpha {want_alpha}, got {alpha}")
        if family == "bottleneck" and not delta > bottleneck_degree_bound(g.n, k):
            failures.append(f"{instance_id}: expected min degree above (1-2/r)n, got {delta}")
    common.emit_text(cfg, common.format_rows(rows))
    common.maybe_record(ctx, cfg, rows, "error" if failures else "success", "\n".join(failures))
    if failures:
        for line in failures:
            click.echo(f"assertion failed: {line}", err=True)
        ctx.exit(EXIT_ASSERTION)
