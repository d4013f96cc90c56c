"""Ordered parallel map with an in-order stopping rule."""
import os
from concurrent.futures import ThreadPoolExecutor


def default_jobs():
    return os.cpu_count() or 1


def ordered_terms(fn, first, last, should_stop, jobs=1):
    """Evaluate ``fn(k)`` for k = first, first+1, ... in order of k.

    ``should_stop(k, value, consumed)`` is consulted after each term in
    ascending k, so the set of terms kept (and hence any reduction over them)
    does not depend on ``jobs``.  Terms computed beyond the stopping point
    are discarded.  ``last`` may be None for an unbounded index range.

    Returns the list of kept values and a flag telling whether the stopping
    rule fired (False means the range was exhausted).
    """
    kept = []
    k = first
    if jobs <= 1:
        while last is None or k <= last:
            v = fn(k)
            kept.append(v)
            if should_stop(k, v, kept):
                return kept, True
            k += 1
        return kept, False
    batch = 4 * jobs
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        while last is None or k <= last:
            stop_at = k + batch - 1 if last is None else min(k + batch - 1, last)
            ks = range(k, stop_at + 1)
            for kk, v in zip(ks, pool.map(fn, ks)):
                kept.append(v)
                if should_stop(kk, v, kept):
                    return kept, True
            k = stop_at + 1
    return kept, False
