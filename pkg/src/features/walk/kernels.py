"""
Discrete-step walk kernels on the wired graph.

`neighbors[x, k]` is the site reached from x in direction k or -1 for rho; `entry` lists every
site once per boundary edge, so a uniform entry is a uniformly chosen boundary edge. Kernels only
draw uniforms through the Generator passed in and return -1 when the step guard trips.
"""

import numba as nb
import numpy as np


@nb.njit(cache=True, nogil=True)
def _uniform_index(rng, k):
    j = int(rng.random() * k)
    return k - 1 if j >= k else j


@nb.njit(cache=True, nogil=True)
def excursion(neighbors, entry, rng, visits, step_limit):
    """One rho -> rho excursion; adds site visits into `visits` and returns its step count."""
    x = entry[_uniform_index(rng, entry.shape[0])]
    steps = 1
    while True:
        visits[x] += 1
        nxt = neighbors[x, _uniform_index(rng, 4)]
        steps += 1
        if nxt < 0:
            return steps
        if steps > step_limit:
            return -1
        x = nxt


@nb.njit(cache=True, nogil=True)
def replica_visits(neighbors, entry, counts, rng, step_limit, out):
    """counts[r] excursions accumulated into out[r]; returns total steps or -1."""
    total = 0
    for r in range(counts.shape[0]):
        for _ in range(counts[r]):
            steps = excursion(neighbors, entry, rng, out[r], step_limit - total)
            if steps < 0:
                return -1
            total += steps
    return total


@nb.njit(cache=True, nogil=True)
def cover_run(neighbors, entry, rng, step_limit):
    """Excursions until every site is visited; returns (excursions, steps), steps -1 on guard."""
    n = neighbors.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    remaining = n
    excursions = 0
    total = 0
    while remaining > 0:
        excursions += 1
        x = entry[_uniform_index(rng, entry.shape[0])]
        total += 1
        while True:
            if not seen[x]:
                seen[x] = True
                remaining -= 1
            nxt = neighbors[x, _uniform_index(rng, 4)]
            total += 1
            if total > step_limit:
                return excursions, -1
            if nxt < 0:
                break
            x = nxt
    return excursions, total


@nb.njit(cache=True, nogil=True)
def escape_trials(neighbors, start, trials, rng, step_limit):
    """Count walks from `start` that reach rho before returning to `start`."""
    escaped = 0
    total = 0
    for _ in range(trials):
        x = start
        while True:
            nxt = neighbors[x, _uniform_index(rng, 4)]
            total += 1
            if total > step_limit:
                return -1
            if nxt < 0:
                escaped += 1
                break
            if nxt == start:
                break
            x = nxt
    return escaped


@nb.njit(cache=True, nogil=True)
def exit_counts(neighbors, start, trials, rng, step_limit, out):
    """Tally the (site, direction) edge through which each walk from `start` leaves."""
    total = 0
    for _ in range(trials):
        x = start
        while True:
            d = _uniform_index(rng, 4)
            nxt = neighbors[x, d]
            total += 1
            if total > step_limit:
                return -1
            if nxt < 0:
                out[x, d] += 1
                break
            x = nxt
    return total
