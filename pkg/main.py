import logging

import click
from dotenv import dotenv_values

import config

# Setup logging
logging.basicConfig(
    level=getattr(logging, config.LOG_LEVEL, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


@click.group()
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Master seed (default CLIQUELAB_SEED).")
@click.option("--guard-nodes", type=click.IntRange(min=1), default=None, help="Search-node guard of the exact oracles.")
@click.option("--guard-cliques", type=click.IntRange(min=1), default=None, help="Largest K_r list an LP may enumerate.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the output here instead of stdout.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Flat KEY=value experiment config file.")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker processes for sweeps.")
@click.option("--record", is_flag=True, help="Store runs and rows in the report store.")
@click.option("--database-url", default=None, help="Report store URL (default CLIQUELAB_DATABASE_URL or SQLite).")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
@click.pass_context
def cli(ctx, seed, guard_nodes, guard_cliques, out, config_path, workers, record, database_url, verbose):
    """Clique-factor experiments on small dense graphs."""
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    file_values = dict(dotenv_values(config_path)) if config_path else {}
    if config_path:
        logger.info(f"📥 Loaded {len(file_values)} settings from {config_path}")
    ctx.ensure_object(dict)
    ctx.obj.update(
        seed=seed,
        guard_nodes=guard_nodes,
        guard_cliques=guard_cliques,
        out=out,
        workers=workers,
        record=record,
        database_url=database_url,
        file_values=file_values,
    )


def create_cli():
    """Factory function that registers every command group on the CLI"""
    from commands import register_commands

    register_commands(cli)
    return cli


if __name__ == '__main__':
    create_cli()()
