"""
Deterministic parallel evaluation of ensemble members.

Each member draws its randomness from its own stream, derived only from (seed, member index),
and results come back in member order no matter how many workers ran them.
Reductions over members are done by the caller after the map, in member order,
so outputs are bit-identical for any worker count.
"""

import joblib
import numpy

DEFAULT_WORKERS = 1

def member_rng(seed, index):
    return numpy.random.default_rng(numpy.random.SeedSequence([int(seed), int(index)]))

def map_members(function, items, workers = DEFAULT_WORKERS, args = ()):
    """
    Return [function(index, item, *args), ...] in item order.
    """

    items = list(items)

    if ((workers is None) or (workers <= 1) or (len(items) <= 1)):
        return [function(index, item, *args) for (index, item) in enumerate(items)]

    parallel = joblib.Parallel(n_jobs = min(workers, len(items)))
    return parallel(joblib.delayed(function)(index, item, *args) for (index, item) in enumerate(items))

def chunks(count, size):
    """
    Split range(count) into consecutive (start, end) pairs of at most |size| elements.
    """

    return [(start, min(start + size, count)) for start in range(0, count, size)]
