"""
Sweep runner.

A sweep is a grid of TupleSpecs (one per field) evaluated in one mode. Every
grid point is split into shards and every shard into chunks of ranks (exact
and cr modes) or sample blocks (sample and cycles modes). Chunks are the unit
of work for the pool; the main process consumes their results in submission
order, saves a ShardCheckpoint after each, and writes a point's row as soon
as all of its shards are complete. Output therefore does not depend on the
number of workers, and a resumed sweep writes the same rows as an
uninterrupted one.
"""
import logging
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

from django.conf import settings
from django.db import transaction
from tqdm import tqdm

from apps.galois_stats.cycles import (
    JointCycleStats,
    format_cycle_type,
    joint_cycle_sample,
    parse_cycle_type,
)
from apps.hlcount.counting import (
    MODE_EXACT,
    BudgetExceededError,
    CountResult,
    check_budget,
    count_range,
    estimate_from_hits,
    sample_hits,
)
from apps.hlcount.crlab import cr_report, cr_tally_range
from apps.hlcount.sampling import SAMPLE_BLOCK

from .models import ResultRow, ShardCheckpoint, SweepRun
from .output import ResultWriter

logger = logging.getLogger(__name__)

CHUNK_RANKS = 2**16
CHUNK_BLOCKS = 4


class CheckpointMismatchError(RuntimeError):
    """A checkpoint exists for the output path under a different config."""


class Task(NamedTuple):
    point: int
    shard: int
    lo: int
    hi: int
    spec: object
    mode: str
    shards: int
    samples: int
    seed: int


@dataclass
class SweepResult:
    run: SweepRun
    rows: list = field(default_factory=list)
    refused: list = field(default_factory=list)
    io_errors: list = field(default_factory=list)
    complete: bool = False


def point_space(spec, config):
    """Size of the index space chunked for one grid point."""
    if config.mode == 'exact':
        return spec.q**spec.n
    if config.mode == 'cr':
        return spec.q**(spec.n - 1)
    return -(-config.samples // SAMPLE_BLOCK)


def point_cost(spec, config):
    if config.mode == 'exact':
        return spec.q**spec.n
    if config.mode == 'cr':
        return spec.q**(spec.n - 1)
    return config.samples


def run_task(task):
    shard = (task.shard, task.shards)
    if task.mode == 'exact':
        return {'hits': count_range(task.spec, shard, task.lo, task.hi)}
    if task.mode == 'cr':
        return cr_tally_range(task.spec, shard, task.lo, task.hi)
    blocks = [b for b in range(task.lo, task.hi) if b % task.shards == task.shard]
    if task.mode == 'sample':
        return {'hits': sample_hits(task.spec, task.samples, task.seed, blocks)}
    stats = joint_cycle_sample(task.spec, task.samples, task.seed, blocks)
    counts = {'|'.join(format_cycle_type(p) for p in key): c for key, c in stats.counts.items()}
    return {'counts': counts, 'discarded': stats.discarded}


def add_partials(a, b):
    """Key-wise sum of nested count dicts."""
    out = dict(a)
    for key, value in b.items():
        if isinstance(value, dict):
            out[key] = add_partials(out.get(key, {}), value)
        else:
            out[key] = out.get(key, 0) + value
    return out


def finish_point(spec, config, partial):
    """Result record of a grid point from its merged shard partials."""
    if config.mode == 'exact':
        hits = partial.get('hits', 0)
        return CountResult.build(spec, hits, MODE_EXACT, hits=hits).to_record()
    if config.mode == 'sample':
        return estimate_from_hits(spec, partial.get('hits', 0), config.samples, config.seed).to_record()
    if config.mode == 'cr':
        tally = {k: partial.get(k, 0) for k in ('N', 'not_squarefree', 'not_coprime', 'constant')}
        return cr_report(spec, tally).to_record()
    stats = JointCycleStats(n=spec.n, r=spec.r, q=spec.q, field=spec.field.label,
                            config_digest=spec.digest(),
                            discarded=partial.get('discarded', 0))
    for key, c in partial.get('counts', {}).items():
        stats.add(tuple(parse_cycle_type(p) for p in key.split('|')), c)
    return stats.to_record()


def _make_executor(workers):
    ctx = multiprocessing.get_context('fork')
    return ProcessPoolExecutor(max_workers=workers, mp_context=ctx)


def _open_run(config, resume):
    digest = config.digest()
    output = str(config.output_path)
    run = SweepRun.objects.filter(output=output).first()
    if run is not None and resume:
        if run.digest != digest:
            raise CheckpointMismatchError(
                f"{output} was started with config {run.digest[:12]}, not {digest[:12]}")
        logger.info(f"Resuming sweep {digest[:12]} ({run.get_status_display()})")
        return run
    if run is not None:
        logger.info(f"Discarding previous sweep state for {output}")
        run.delete()
    return SweepRun.objects.create(digest=digest, config=config.canonical(), output=output,
                                   points=len(config.grid))


def run_sweep(config, resume=False, workers=None, progress=False, max_tasks=None):
    """Evaluate every grid point of ``config``; see the module docstring.

    ``max_tasks`` stops after that many chunks, leaving the run interrupted
    and resumable.
    """
    run = _open_run(config, resume)
    result = SweepResult(run=run)
    if run.is_completed:
        result.rows = [row.payload for row in run.rows.all()]
        result.complete = True
        logger.info(f"Sweep {run.digest[:12]} is already complete")
        return result

    specs = config.points()
    eligible = []
    for i, spec in enumerate(specs):
        try:
            check_budget(point_cost(spec, config), config.budget,
                         what='specialisations' if config.mode == 'cr' else 'tuple-tests')
        except BudgetExceededError as e:
            logger.warning(f"Refusing {spec}: {e}")
            result.refused.append(f"{spec.field.label}: {e}")
            continue
        eligible.append(i)

    writer = ResultWriter(config.output_path, run.digest, run.config)
    done = {}
    for row in run.rows.all():
        done[row.point] = row.payload
        writer.write(row.payload)
        result.rows.append(row.payload)

    checkpoints = {(cp.point, cp.shard): cp for cp in run.checkpoints.all()}
    order = [i for i in eligible if i not in done]
    remaining = {}
    tasks = []
    for i in order:
        spec = specs[i]
        space = point_space(spec, config)
        chunk = (CHUNK_RANKS if config.mode in ('exact', 'cr') else CHUNK_BLOCKS) * config.shards
        remaining[i] = 0
        for s in range(config.shards):
            cp = checkpoints.get((i, s))
            if cp is None:
                cp = ShardCheckpoint.objects.create(run=run, point=i, shard=s)
                checkpoints[(i, s)] = cp
            if cp.completed:
                continue
            for lo in range(cp.cursor, space, chunk):
                tasks.append(Task(i, s, lo, min(lo + chunk, space), spec, config.mode,
                                  config.shards, config.samples, config.seed))
                remaining[i] += 1

    def finalize_ready(pos):
        while pos < len(order) and remaining[order[pos]] == 0:
            i = order[pos]
            partial = {}
            for s in range(config.shards):
                partial = add_partials(partial, checkpoints[(i, s)].partial)
            record = finish_point(specs[i], config, partial)
            ResultRow.objects.create(run=run, point=i, kind=record['kind'], payload=record)
            writer.write(record)
            result.rows.append(record)
            logger.info(f"Finished {specs[i]}")
            pos += 1
        return pos

    pos = finalize_ready(0)
    workers = workers or getattr(settings, 'HLLAB_WORKERS', 1)
    executor = _make_executor(workers) if workers > 1 and len(tasks) > 1 else None
    results = executor.map(run_task, tasks) if executor else map(run_task, tasks)
    interrupted = False
    try:
        with tqdm(total=len(tasks), disable=not progress, desc='sweep') as bar:
            for n_done, (task, partial) in enumerate(zip(tasks, results), start=1):
                cp = checkpoints[(task.point, task.shard)]
                cp.partial = add_partials(cp.partial, partial)
                cp.cursor = task.hi
                cp.completed = task.hi >= point_space(task.spec, config)
                remaining[task.point] -= 1
                with transaction.atomic():
                    cp.save()
                    pos = finalize_ready(pos)
                bar.update(1)
                if max_tasks is not None and n_done >= max_tasks and n_done < len(tasks):
                    interrupted = True
                    break
    finally:
        if executor:
            executor.shutdown(cancel_futures=True)

    if interrupted:
        run.status = 'interrupted'
        run.save()
        logger.info(f"Sweep {run.digest[:12]} interrupted at {pos}/{len(order)} points")
    else:
        run.status = 'completed'
        run.save()
        writer.render_csv(config.csv_path)
        result.complete = True
        logger.info(f"Sweep {run.digest[:12]} completed: {len(result.rows)} rows, "
                    f"{len(result.refused)} refused")
    result.io_errors = writer.errors
    return result
