import logging
from itertools import combinations

import click

from cliquelab.diamonds import find_diamond_path
from cliquelab.embeddings import lemma_start_embedding, upsilon2
from cliquelab.embeddings import upsilon as upsilon_set
from cliquelab.reduced import (
    build_reduced,
    check_regular_pair,
    format_multiplicity_csv,
    format_reduced,
    random_equipartition,
    read_partition,
    read_reduced,
    reduced_min_degree,
)
from dtos.params import RegularityParams

from . import common
from .common import guarded, make_config, parse_instance

logger = logging.getLogger(__name__)


@click.command("reduce")
@click.argument("instance")
@click.option("--k", "k", type=click.IntRange(min=1), default=None, help="Clusters of a random equipartition.")
@click.option("--partition", "partition_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--eps", default="1/10", show_default=True)
@click.option("--beta", default="1/5", show_default=True)
@click.option("--csv", "as_csv", is_flag=True, help="Print the multiplicity matrix as CSV.")
@click.option("--regularity", type=click.Choice(["none", "exhaustive", "sampled"]), default="none", show_default=True)
@click.option("--start", "start_vertex", type=click.IntRange(min=0), default=None,
              help="Also run the start-embedding search for this vertex (needs -r).")
@click.option("-r", type=click.IntRange(min=2), default=4, show_default=True)
@click.pass_context
@guarded
def reduce_command(ctx, instance, k, partition_path, eps, beta, as_csv, regularity, start_vertex, r):
    """Reduced multigraph of INSTANCE over a partition."""
    cfg = make_config(ctx, "reduce", instance=instance, k=k, partition=partition_path, eps=eps, beta=beta)
    g = parse_instance(instance)
    rp = RegularityParams(eps=eps, beta=beta)
    if partition_path:
        p = read_partition(partition_path)
    elif k is not None:
        p = random_equipartition(g.n, k, cfg.seed)
    else:
        raise click.UsageError("give either --k or --partition")
    R = build_reduced(g, p, rp)
    lines = [format_multiplicity_csv(R) if as_csv else format_reduced(R)]
    lines.append(f"# min degree {reduced_min_degree(R)} of {2 * R.k}\n")
    if regularity != "none":
        for i, j in combinations(range(R.k), 2):
            verdict = check_regular_pair(g, p.clusters[i], p.clusters[j], rp.eps, mode=regularity, seed=cfg.seed)
            state = "regular" if verdict.regular else "irregular"
            if verdict.regular and not verdict.exact:
                state = "no witness found"
            lines.append(f"# pair {i} {j}: {state}\n")
    if start_vertex is not None:
        result = lemma_start_embedding(g, p, R, start_vertex, r, rp.beta)
        if result.found:
            lines.append(f"# start {start_vertex}: {result.method}, loads {result.embedding.loads()}\n")
        else:
            lines.append(f"# start {start_vertex}: none\n")
    common.emit_text(cfg, "".join(lines))


@click.command("upsilon")
@click.argument("reduced_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-r", type=click.IntRange(min=2), default=4, show_default=True)
@click.option("--cluster", type=click.IntRange(min=0), default=None, help="Only this cluster.")
@click.pass_context
@guarded
def upsilon_command(ctx, reduced_file, r, cluster):
    """Clusters reachable through K_r multi-embeddings, in one and two steps."""
    cfg = make_config(ctx, "upsilon", reduced=reduced_file, r=r, cluster=cluster)
    R = read_reduced(reduced_file)
    clusters = [cluster] if cluster is not None else range(R.k)
    lines = ["cluster,upsilon,upsilon2"]
    for v in clusters:
        one, two = sorted(upsilon_set(R, r, v)), sorted(upsilon2(R, r, v))
        lines.append(f"{v},{' '.join(map(str, one))},{' '.join(map(str, two))}")
    common.emit_text(cfg, "\n".join(lines) + "\n")


@click.command()
@click.argument("instance")
@click.argument("source", type=click.IntRange(min=0))
@click.argument("target", type=click.IntRange(min=0))
@click.option("-r", type=click.IntRange(min=2), default=3, show_default=True)
@click.option("--max-len", type=click.IntRange(min=2), default=7, show_default=True)
@click.option("--gem-size", type=click.IntRange(min=1), default=None, help="Default r - 1.")
@click.option("--exclude", multiple=True, type=click.IntRange(min=0), help="Repeatable.")
@click.pass_context
@guarded
def diamond(ctx, instance, source, target, r, max_len, gem_size, exclude):
    """Shortest diamond path from SOURCE to TARGET."""
    cfg = make_config(ctx, "diamond", instance=instance, source=source, target=target, r=r, max_len=max_len)
    g = parse_instance(instance)
    path = find_diamond_path(g, source, target, r, max_len=max_len, excluded=exclude, gem_size=gem_size)
    if path is None:
        common.emit_text(cfg, "path: none\n")
        return
    lines = [f"length: {path.length}", "spine: " + " ".join(map(str, path.spine))]
    lines.extend(f"gem {i}: " + " ".join(map(str, gem)) for i, gem in enumerate(path.gems))
    common.emit_text(cfg, "\n".join(lines) + "\n")
