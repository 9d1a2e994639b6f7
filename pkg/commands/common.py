"""Shared plumbing for the CLI commands: instance specs, config, output, exit codes."""

import csv
import dataclasses
import functools
import io
import json
import logging
import os

import click
from pydantic import ValidationError

import config
from cliquelab import __version__
from cliquelab.constructions import (
    GeneratedGraph,
    blow_up,
    bottleneck_extremal,
    gnp,
    hs_extremal,
    triangle_free_process,
    two_cliques,
)
from cliquelab.errors import InputError, InvariantViolation, ResourceGuardError
from cliquelab.graph import Graph, complete, cycle, empty, path, star
from cliquelab.graph_io import read_graph
from cliquelab.utils import jsonable, save_metadata_to_file, sidecar_path
from dtos.report import ExperimentConfig, ReportRow

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_INPUT = 2
EXIT_GUARD = 3

INSTANCE_HELP = (
    "complete:N, empty:N, cycle:N, path:N, star:N, hs:N:R, two_cliques:N, "
    "bottleneck:N:R[:SEED], tfp:M:SEED, gnp:N:P:SEED, blowup:INSTANCE:S, or a graph file"
)


def _ints(spec: str, fields: list[str], count: int) -> list[int]:
    if len(fields) != count:
        raise InputError(f"instance {spec!r} needs {count} integer field(s)")
    try:
        return [int(x) for x in fields]
    except ValueError:
        raise InputError(f"instance {spec!r} has a non-integer field") from None


def parse_blowup(spec: str) -> GeneratedGraph:
    """``blowup:INSTANCE:S``; INSTANCE may itself contain colons."""
    inner, _, s = spec.partition(":")[2].rpartition(":")
    if not inner:
        raise InputError(f"instance {spec!r} must look like blowup:INSTANCE:S")
    (factor,) = _ints(spec, [s], 1)
    generated = blow_up(parse_instance(inner), factor)
    return dataclasses.replace(generated, params={**generated.params, "base": inner})


def parse_instance(spec: str) -> Graph:
    """Graph from a named family spec or, failing that, from a file path."""
    if os.path.exists(spec):
        return read_graph(spec)
    family, _, rest = spec.partition(":")
    if family == "blowup":
        return parse_blowup(spec).graph
    fields = rest.split(":") if rest else []
    simple = {"complete": complete, "empty": empty, "cycle": cycle, "path": path, "star": star}
    if family in simple:
        (n,) = _ints(spec, fields, 1)
        return simple[family](n)
    if family == "hs":
        return hs_extremal(*_ints(spec, fields, 2))
    if family == "two_cliques":
        return two_cliques(*_ints(spec, fields, 1))
    if family == "bottleneck":
        if len(fields) not in (2, 3):
            raise InputError(f"instance {spec!r} must look like bottleneck:N:R[:SEED]")
        values = _ints(spec, fields, len(fields))
        n, r = values[:2]
        if r < 1:
            raise InputError(f"instance {spec!r} needs r >= 1")
        # the cycle C_{2n/r+1} unless a seed asks for the triangle-free process
        m = 2 * n // r + 1
        tf = cycle(m) if len(values) == 2 else triangle_free_process(m, values[2])
        return bottleneck_extremal(n, r, tf)
    if family == "tfp":
        return triangle_free_process(*_ints(spec, fields, 2))
    if family == "gnp":
        if len(fields) != 3:
            raise InputError(f"instance {spec!r} must look like gnp:N:P:SEED")
        n, seed = _ints(spec, [fields[0], fields[2]], 2)
        try:
            return gnp(n, fields[1], seed)
        except ValueError as e:
            raise InputError(str(e)) from None
    raise InputError(f"unknown instance {spec!r}; expected {INSTANCE_HELP}")


def make_config(ctx: click.Context, command: str, **flags) -> ExperimentConfig:
    """Flags beat the config file, which beats the environment."""
    obj = ctx.obj or {}
    merged_flags = {key: obj.get(key) for key in ("seed", "guard_nodes", "guard_cliques", "out", "workers")}
    merged_flags.update(flags)
    return ExperimentConfig.resolve(command, merged_flags, obj.get("file_values"), config.env_defaults())


def metadata_header(cfg: ExperimentConfig) -> list[str]:
    return [
        f"# cliquelab {__version__}",
        f"# config: {json.dumps(jsonable(cfg.metadata()), sort_keys=True)}",
        f"# seed: {cfg.seed}",
    ]


def emit_text(cfg: ExperimentConfig, body: str, header: bool = True) -> None:
    """Write to ``cfg.out`` when set, otherwise to stdout; reports start with the metadata header."""
    text = ("\n".join(metadata_header(cfg)) + "\n" if header else "") + body
    if cfg.out:
        directory = os.path.dirname(cfg.out)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(cfg.out, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"💾 Output saved to: {cfg.out}")
    else:
        click.echo(text, nl=False)


def emit_data(cfg: ExperimentConfig, body: str, **extra) -> None:
    """Data files stay parseable; their metadata goes to a JSON sidecar."""
    emit_text(cfg, body, header=False)
    if cfg.out:
        save_metadata_to_file({"version": __version__, "config": cfg.metadata(), **extra}, sidecar_path(cfg.out))


def format_rows(rows: list[ReportRow], timing: bool = False) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(ReportRow.header(timing))
    for row in rows:
        writer.writerow(row.csv_fields(timing))
    return buffer.getvalue()


def plot_script(csv_path: str, x: str, y: str) -> str:
    """Stand-alone matplotlib script plotting ``y`` against ``x`` from the CSV."""
    return f'''"""Plot {y} against {x} from {csv_path}."""
import csv
from fractions import Fraction

import matplotlib.pyplot as plt

xs, ys = [], []
with open({csv_path!r}, encoding="utf-8") as f:
    rows = csv.DictReader(line for line in f if not line.startswith("#"))
    for row in rows:
        if row[{y!r}]:
            xs.append(float(Fraction(row[{x!r}])))
            ys.append(float(Fraction(row[{y!r}])))

plt.scatter(xs, ys)
plt.xlabel({x!r})
plt.ylabel({y!r})
plt.savefig({csv_path + ".png"!r})
'''


def maybe_record(ctx: click.Context, cfg: ExperimentConfig, rows: list[ReportRow], status="success", message=""):
    obj = ctx.obj or {}
    if not (obj.get("record") or config.DATABASE_URL):
        return None
    import database
    from sweeper import record_run

    if not database.is_configured():
        try:
            database.configure(obj.get("database_url"))
        except Exception as e:
            logger.error(f"❌ Failed to open report store: {e}")
            return None
    return record_run(cfg, rows, status, message)


def guarded(func):
    """Map library errors to exit codes: 2 input, 3 resource guard, 1 assertion."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except (InputError, ValidationError) as e:
            logger.error(f"Input error in {ctx.info_name}: {e}", exc_info=logger.isEnabledFor(logging.DEBUG))
            click.echo(f"error: {e}", err=True)
            ctx.exit(EXIT_INPUT)
        except ResourceGuardError as e:
            logger.error(f"Resource guard in {ctx.info_name}: {e}")
            click.echo(f"guard: {e}", err=True)
            ctx.exit(EXIT_GUARD)
        except InvariantViolation as e:
            logger.error(f"Invariant violated in {ctx.info_name}: {e}", exc_info=True)
            click.echo(f"assertion failed: {e}", err=True)
            ctx.exit(EXIT_ASSERTION)

    return wrapper
