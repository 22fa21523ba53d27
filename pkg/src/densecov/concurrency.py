# Copyright 2026 deep-bi
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import TypeVar

import numpy as np

from . import exceptions, logger

WORKERS_ENV_VAR = "DENSECOV_WORKERS"

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(requested: int | None = None) -> int:
    """Number of worker processes: explicit value, then DENSECOV_WORKERS, then 1."""
    if requested is not None:
        source, raw = "--workers", requested
    else:
        raw = os.getenv(WORKERS_ENV_VAR)
        if raw is None or raw.strip() == "":
            return 1
        source = WORKERS_ENV_VAR

    try:
        workers = int(raw)
    except (TypeError, ValueError):
        raise exceptions.ConfigValidationError(
            f"{source} must be a positive integer, got {raw!r}"
        ) from None

    if workers < 1:
        raise exceptions.ConfigValidationError(f"{source} must be a positive integer, got {raw!r}")
    return workers


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent random stream for one trial, keyed on (seed, index)."""
    return np.random.default_rng([seed, index])


def derive_seed(seed: int, index: int) -> int:
    """Seed for the ``index``-th sweep point, independent of evaluation order."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])


def chunk_ranges(total: int, chunks: int) -> list[tuple[int, int]]:
    """Split range(total) into at most ``chunks`` contiguous, ordered, non-empty ranges.

    Examples:
        >>> chunk_ranges(10, 3)
        [(0, 4), (4, 7), (7, 10)]
        >>> chunk_ranges(2, 5)
        [(0, 1), (1, 2)]
    """
    if total <= 0:
        return []
    chunks = max(1, min(chunks, total))
    base, extra = divmod(total, chunks)
    ranges = []
    start = 0
    for i in range(chunks):
        stop = start + base + (1 if i < extra else 0)
        ranges.append((start, stop))
        start = stop
    return ranges


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """Apply ``fn`` to every item, in parallel processes when workers > 1.

    Results always come back in item order, so reductions over them are deterministic.
    ``fn`` must be a module-level function when workers > 1.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    pool_size = min(workers, len(items))
    logger.debug(f"Dispatching {len(items)} tasks to {pool_size} worker processes")
    with ProcessPoolExecutor(max_workers=pool_size) as pool:
        return list(pool.map(fn, items))
