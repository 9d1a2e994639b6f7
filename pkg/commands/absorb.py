import logging

import click

from cliquelab.absorbers import build_absorbing_set, full_pipeline
from cliquelab.tilings import format_tiling
from dtos.params import AbsorberParams, AugmentParams

from . import common
from .common import guarded, make_config, parse_instance

logger = logging.getLogger(__name__)


def absorber_options(func):
    for option in reversed([
        click.option("-r", type=click.IntRange(min=2), default=4, show_default=True),
        click.option("--t", "t", type=click.IntRange(min=1), default=None, help="Absorber size in K_r's (default 6r+1)."),
        click.option("--phi", default="1/10", show_default=True, help="Absorbing-set budget as a share of n."),
        click.option("--xi", default="1/10", show_default=True, help="Largest leftover share to absorb."),
        click.option("--gem-size", type=click.IntRange(min=1), default=None, help="Default r - 1."),
        click.option("--max-attempts", type=click.IntRange(min=1), default=64, show_default=True),
    ]):
        func = option(func)
    return func


def _params(r, t, phi, xi, gem_size, max_attempts) -> AbsorberParams:
    return AbsorberParams(r=r, t=t, phi=phi, xi=xi, gem_size=gem_size, max_attempts=max_attempts)


@click.command()
@click.argument("instance")
@absorber_options
@click.option("--certify/--no-certify", default=True, show_default=True)
@click.pass_context
@guarded
def absorb(ctx, instance, r, t, phi, xi, gem_size, max_attempts, certify):
    """Build an absorbing set for INSTANCE and list its absorbers."""
    p = _params(r, t, phi, xi, gem_size, max_attempts)
    cfg = make_config(ctx, "absorb", instance=instance, r=r, t=p.t, phi=phi, xi=xi, gem_size=p.gem_size)
    g = parse_instance(instance)
    result = build_absorbing_set(g, p, cfg.seed, certify=certify)
    status = {True: "certified", False: "refuted", None: "uncertified"}[result.certified]
    lines = [
        f"absorbing_set: {' '.join(map(str, sorted(result.vertices)))}",
        f"size: {len(result.vertices)} (budget {result.budget})",
        f"certificate: {status}",
        f"best_effort: {'yes' if result.best_effort else 'no'}",
    ]
    lines.extend(f"note: {note}" for note in result.notes)
    for i, absorber in enumerate(result.absorbers):
        summary = absorber.summary()
        lines.append(
            f"absorber {i}: S={' '.join(map(str, summary['s_set']))} method={summary['method']} "
            f"body={summary['body_size']} paths={','.join(map(str, summary['path_lengths'])) or '-'} "
            f"padding={summary['padding']}"
        )
    common.emit_text(cfg, "\n".join(lines) + "\n")


@click.command()
@click.argument("instance")
@absorber_options
@click.option("--certify", is_flag=True, help="Certify the absorbing set before tiling.")
@click.pass_context
@guarded
def factor(ctx, instance, r, t, phi, xi, gem_size, max_attempts, certify):
    """Absorb, tile and finish exactly; print the K_r-factor or the failing stage."""
    p = _params(r, t, phi, xi, gem_size, max_attempts)
    cfg = make_config(ctx, "factor", instance=instance, r=r, t=p.t, phi=phi, xi=xi)
    g = parse_instance(instance)
    ap = AugmentParams(r=r)
    result = full_pipeline(g, p, ap, cfg.seed, certify=certify, max_nodes=cfg.guard_nodes)
    lines = [f"perfect: {'yes' if result.perfect else 'no'}", f"stage: {result.stage}"]
    lines.extend(f"diagnostic: {d}" for d in result.diagnostics)
    body = "\n".join(lines) + "\n" + format_tiling(result.tiling)
    common.emit_text(cfg, body)
