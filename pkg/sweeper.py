import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from cliquelab.constructions import gnp, hs_extremal, two_cliques
from cliquelab.errors import InputError, ResourceGuardError
from cliquelab.graph import Graph, min_degree
from cliquelab.oracles import independence_number, max_fractional_tiling, max_kr_tiling
from cliquelab.tiling import augment_to_target, fracmat_iterate, greedy_tiling
from cliquelab.utils import derive_seed, jsonable
from dtos.params import AugmentParams, parse_rational
from dtos.report import ExperimentConfig, ReportRow

logger = logging.getLogger(__name__)

SWEEP_FAMILIES = ("gnp", "hs", "two_cliques")
SWEEP_MODES = ("greedy", "augment", "fracmat", "exact", "lp")


@dataclass(frozen=True)
class SweepCell:
    index: int
    family: str
    n: int
    r: int
    param: Fraction | None
    sample: int
    seed: int

    @property
    def instance_id(self) -> str:
        parts = [self.family, str(self.n), str(self.r)]
        if self.param is not None:
            parts.append(f"{self.param.numerator}/{self.param.denominator}")
        return ":".join(parts) + f"#{self.sample}"


def build_cells(family: str, ns, rs, params, samples: int, master_seed: int, coupled: bool = False) -> list[SweepCell]:
    """Cells in grid order; each seed depends only on the master seed and the cell coordinates.

    With ``coupled`` the edge probability is left out of the seed, so one
    sample draws the same stream at every ``p`` and the graphs are nested.
    """
    if family not in SWEEP_FAMILIES:
        raise InputError(f"unknown sweep family {family!r}; expected one of {', '.join(SWEEP_FAMILIES)}")
    if samples < 1:
        raise InputError(f"samples must be at least 1, got {samples}")
    params = [parse_rational(p) for p in params] if family == "gnp" else [None]
    if not params:
        raise InputError("the gnp family needs at least one edge probability")
    cells = []
    for n, r, p, sample in product(ns, rs, params, range(samples)):
        if coupled:
            seed = derive_seed(master_seed, family, n, r, sample)
        else:
            seed = derive_seed(master_seed, family, n, r, jsonable(p), sample)
        cells.append(SweepCell(len(cells), family, n, r, p, sample, seed))
    return cells


def build_instance(cell: SweepCell) -> Graph:
    if cell.family == "gnp":
        return gnp(cell.n, cell.param, cell.seed)
    if cell.family == "hs":
        return hs_extremal(cell.n, cell.r)
    return two_cliques(cell.n)


def measure(
    g: Graph,
    r: int,
    instance_id: str,
    seed: int | None,
    modes=SWEEP_MODES,
    guard_nodes: int = 100_000_000,
    guard_cliques: int = 200_000,
    eta: Fraction | None = None,
) -> list[ReportRow]:
    """One row per mode; a tripped guard fills the row's note and the rest still run."""
    base = {
        "instance_id": instance_id,
        "n": g.n,
        "r": r,
        "min_degree": min_degree(g) if g.n else None,
        "alpha": independence_number(g, guard_nodes) if g.n else None,
        "seed": seed,
    }
    augment = None
    if r >= 3:
        augment = AugmentParams(r=r) if eta is None else AugmentParams(r=r, eta=eta)
    rows = []
    for mode in modes:
        started = time.perf_counter()
        values: dict = {}
        try:
            if mode == "greedy":
                values["covered"] = greedy_tiling(g, r).covered_count
            elif mode == "augment":
                if augment is None:
                    values["note"] = "needs r >= 3"
                else:
                    values["covered"] = augment_to_target(g, r, augment).covered_count
            elif mode == "fracmat":
                if augment is None:
                    values["note"] = "needs r >= 3"
                else:
                    result = fracmat_iterate(g, r, augment)
                    values["weight"] = result.weight
                    notes = [f"rounds={result.rounds}"]
                    if result.truncated:
                        notes.append("truncated")
                    if eta is not None:
                        notes.append(f"below={result.tiling.count_below(g, 1 - eta)}")
                    values["note"] = " ".join(notes)
            elif mode == "exact":
                covered = r * len(max_kr_tiling(g, r, guard_nodes))
                values["covered"] = covered
                values["factor"] = g.n % r == 0 and covered == g.n
            elif mode == "lp":
                ft = max_fractional_tiling(g, r, guard_cliques)
                values["weight"] = ft.total_weight
                if eta is not None:
                    values["note"] = f"below={ft.count_below(g, 1 - eta)}"
            else:
                raise InputError(f"unknown mode {mode!r}")
        except ResourceGuardError as e:
            logger.warning(f"⚠️ {instance_id} mode {mode}: {e}")
            values = {"note": f"guard {e.guard}"}
        values["wall_ms"] = round((time.perf_counter() - started) * 1000)
        rows.append(ReportRow(mode=mode, **base, **values))
    return rows


def execute_cell(cell: SweepCell, guard_nodes: int, guard_cliques: int, modes=SWEEP_MODES) -> tuple[int, list[ReportRow]]:
    """Run one sweep cell"""
    g = build_instance(cell)
    logger.debug(f"⏰ Cell {cell.index}: {cell.instance_id} ({g.edge_count} edges)")
    return cell.index, measure(g, cell.r, cell.instance_id, cell.seed, modes, guard_nodes, guard_cliques)


class SweepManager:
    def __init__(self, workers: int = 1, guard_nodes: int = 100_000_000, guard_cliques: int = 200_000):
        if workers < 1:
            raise InputError(f"workers must be at least 1, got {workers}")
        self.workers = workers
        self.guard_nodes = guard_nodes
        self.guard_cliques = guard_cliques

    def run(self, cells: list[SweepCell], modes=SWEEP_MODES) -> list[ReportRow]:
        """Rows of every cell, in cell order whatever the worker count."""
        logger.info(f"📥 Running {len(cells)} sweep cells on {self.workers} worker(s)")
        results: dict[int, list[ReportRow]] = {}
        if self.workers == 1:
            for cell in cells:
                index, rows = execute_cell(cell, self.guard_nodes, self.guard_cliques, modes)
                results[index] = rows
        else:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                futures = [
                    pool.submit(execute_cell, cell, self.guard_nodes, self.guard_cliques, modes) for cell in cells
                ]
                for future in as_completed(futures):
                    index, rows = future.result()
                    results[index] = rows
        logger.info(f"✅ Sweep completed: {sum(len(r) for r in results.values())} rows")
        return [row for index in sorted(results) for row in results[index]]


def factor_rates(cells: list[SweepCell], rows: list[ReportRow]) -> dict[str, Fraction]:
    """Share of samples with a K_r-factor per (n, r, p) coordinate."""
    by_id = {row.instance_id: row.factor for row in rows if row.mode == "exact" and row.factor is not None}
    counts: dict[str, list[int]] = {}
    for cell in cells:
        key = cell.instance_id.split("#")[0]
        hits = counts.setdefault(key, [0, 0])
        if cell.instance_id in by_id:
            hits[0] += int(by_id[cell.instance_id])
            hits[1] += 1
    return {key: Fraction(a, b) for key, (a, b) in counts.items() if b}


def record_run(config: ExperimentConfig, rows: list[ReportRow], status: str = "success", message: str = "") -> int | None:
    """Store a run and its rows in the report store; failures are logged, never raised."""
    try:
        from database import SessionLocal
        from models import ExperimentRun, ReportRecord

        db = SessionLocal()
        run = ExperimentRun(
            command=config.command,
            config_json=json.dumps(jsonable(config.metadata()), sort_keys=True),
            seed=config.seed,
            status=status,
            message=message,
        )
        for row in rows:
            run.rows.append(
                ReportRecord(
                    instance_id=row.instance_id,
                    n=row.n,
                    r=row.r,
                    min_degree=row.min_degree,
                    alpha=row.alpha,
                    mode=row.mode,
                    covered=row.covered,
                    weight=jsonable(row.weight),
                    factor=row.factor,
                    wall_ms=row.wall_ms,
                    seed=None if row.seed is None else str(row.seed),
                    note=row.note or None,
                )
            )
        db.add(run)
        db.commit()
        run_id = run.id
        db.close()
        logger.info(f"💾 Run {run_id} saved with {len(rows)} rows")
        return run_id
    except Exception as e:
        logger.error(f"❌ Failed to save run log: {e}")
        return None
