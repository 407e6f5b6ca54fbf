"""
Batch classification of sampled curves.

Results are appended as JSON lines in sample order, so an interrupted run
resumes by curve index. The aggregate table gives the share of each category.
"""
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, get_args

from app.models.config import SampleConfig
from app.models.report import Category, ClassificationResult
from app.pipeline.orchestrator import classify_curve
from app.pipeline.sampler import sample_curves
from app.pipeline.stages import curve_from_coefficients
from app.utils.logging_utils import setup_logger

logger = setup_logger("pipeline.batch")

CATEGORIES: Tuple[str, ...] = get_args(Category)


def aggregate(results: Iterable[ClassificationResult]) -> Dict[str, Dict[str, float]]:
    """Count and percentage per category; every category appears, zeros included."""
    counts = {c: 0 for c in CATEGORIES}
    for r in results:
        counts[r.category] += 1
    total = sum(counts.values())
    return {
        c: {"count": n, "percent": round(100.0 * n / total, 1) if total else 0.0}
        for c, n in counts.items()
    }


def format_table(summary: Dict[str, Dict[str, float]], title: str = "") -> str:
    total = sum(int(row["count"]) for row in summary.values())
    lines = [title] if title else []
    lines.append(f"{'category':<24}{'count':>8}{'percent':>10}")
    for c in CATEGORIES:
        row = summary[c]
        lines.append(f"{c:<24}{int(row['count']):>8}{row['percent']:>9.1f}%")
    lines.append(f"{'total':<24}{total:>8}")
    return "\n".join(lines)


def emit_report(
    results: Iterable[ClassificationResult],
    path: Optional[Path] = None,
    append: bool = False,
    title: str = "",
) -> str:
    """
    Write one JSON line per result and return the aggregate table.

    Raises:
        OSError: the output file cannot be written
    """
    results = list(results)
    if path is not None:
        with open(path, "a" if append else "w", encoding="utf-8") as fh:
            for r in results:
                fh.write(r.model_dump_json() + "\n")
        logger.info(f"wrote {len(results)} results to {path}")
    return format_table(aggregate(results), title)


def load_results(path: Path) -> Dict[int, ClassificationResult]:
    """Results already on disk, keyed by curve index. A torn last line is ignored."""
    done: Dict[int, ClassificationResult] = {}
    if not path.exists():
        return done
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                r = ClassificationResult.model_validate_json(line)
            except ValueError:
                logger.warning(f"skipping unreadable line {lineno} of {path}")
                continue
            if r.index is not None:
                done[r.index] = r
    return done


def _classify_indexed(job: Tuple[int, Tuple[int, ...], str]) -> str:
    index, coefficients, config_json = job
    config = SampleConfig.model_validate_json(config_json)
    result = classify_curve(curve_from_coefficients(coefficients), config, index=index)
    return result.model_dump_json()


def _pending(config: SampleConfig, done: Dict[int, ClassificationResult]) -> Iterator[Tuple[int, Tuple[int, ...], str]]:
    config_json = config.model_dump_json()
    for index, curve in sample_curves(config):
        if index not in done:
            yield index, tuple(curve.leading_first()), config_json


def run_batch(config: SampleConfig, path: Optional[Path] = None, resume: bool = True) -> List[ClassificationResult]:
    """
    Classify `config.sample_size` sampled curves.

    Args:
        config: Sampling and classification settings
        path: JSON lines output; with `resume`, indices already present are skipped
        resume: Continue an earlier run written to `path`

    Returns:
        All results in index order, earlier ones included
    """
    done = load_results(path) if (path is not None and resume) else {}
    if done:
        logger.info(f"resuming with {len(done)} curves already classified")
    if path is not None and not resume:
        path.write_text("", encoding="utf-8")

    jobs = _pending(config, done)
    if config.workers > 1:
        executor = ProcessPoolExecutor(max_workers=config.workers)
        # map yields in submission order
        outputs = executor.map(_classify_indexed, jobs, chunksize=4)
    else:
        executor = None
        outputs = map(_classify_indexed, jobs)

    try:
        for line in outputs:
            result = ClassificationResult.model_validate_json(line)
            done[result.index] = result
            if path is not None:
                with open(path, "a", encoding="utf-8") as fh:
                    fh.write(line + "\n")
            logger.debug(f"curve {result.index}: {result.category}")
    finally:
        if executor is not None:
            executor.shutdown(cancel_futures=True)
    return [done[i] for i in sorted(done)]
