"""Independent oracles shared by the unit and acceptance tests."""
import itertools

from pizza.bolyai import Parallelotope
from pizza.errors import DomainError


def cells(lows, highs, closed):
    """Cut an integer box into points and unit half-open cells; count cells by dimension."""
    axes = []
    for lo, hi in zip(lows, highs):
        parts = [0] if (lo == hi or closed) else []
        parts += [1] * (hi - lo)
        axes.append(parts)
    counts = [0] * (len(lows) + 1)
    for combo in itertools.product(*axes):
        counts[sum(combo)] += 1
    return counts


def cell_oracle(items, n):
    tot = [0] * (n + 1)
    for s, lows, highs, closed in items:
        for k, c in enumerate(cells(lows, highs, closed)):
            tot[k] += s * c
    return tot


def as_items(items):
    return [(s, Parallelotope.box(lo, hi, closed)) for s, lo, hi, closed in items]


KZ_FIXTURES = [
    ([(1, (0, 0), (1, 6), False)], [(1, (0, 0), (2, 3), False)]),
    ([(1, (0, 0), (1, 6), True)], [(1, (0, 0), (2, 3), True)]),
    ([], [(1, (0, 0), (0, 0), True), (-1, (5, 5), (5, 5), True)]),
    ([(1, (0, 0), (4, 1), True)], [(1, (0, 0), (2, 2), True)]),
    ([(1, (0, 0), (3, 2), True)], [(1, (0, 0), (2, 3), True)]),
    ([(1, (0, 0), (2, 2), True), (-1, (0, 0), (2, 2), False)], [(1, (0, 0), (4, 0), True)]),
    ([(1, (0, 0), (2, 2), True), (-1, (0, 0), (2, 2), False)], [(1, (0, 0), (2, 0), True)]),
    ([(1, (0, 0), (3, 0), False)], [(1, (0, 0), (0, 3), False)]),
    ([(1, (0, 0), (3, 0), True)], [(1, (0, 0), (3, 0), False), (1, (0, 0), (0, 0), True)]),
    ([(1, (0, 0, 0), (1, 2, 3), False)], [(1, (0, 0, 0), (6, 1, 1), False)]),
    ([(1, (0, 0, 0), (1, 2, 3), True)], [(1, (0, 0, 0), (6, 1, 1), True)]),
    ([(1, (0, 0, 0), (1, 1, 1), True)], [(1, (0, 0, 0), (1, 1, 1), False), (3, (0, 0, 0), (1, 1, 0), False),
                                          (3, (0, 0, 0), (1, 0, 0), False), (1, (0, 0, 0), (0, 0, 0), True)]),
    ([(2, (0, 0), (1, 1), False)], [(1, (0, 0), (2, 1), False)]),
    ([(2, (0, 0), (1, 1), True)], [(1, (0, 0), (2, 1), True)]),
    ([(1, (0, 0), (5, 3), True), (-1, (0, 0), (3, 5), True)], []),
    ([(1, (0, 0), (4, 1), False), (-1, (0, 0), (2, 2), False)], []),
    ([(1, (0, 0), (4, 1), True), (-1, (0, 0), (2, 2), True)], []),
    ([(1, (0, 0, 0), (2, 2, 0), True)], [(1, (0, 0, 0), (4, 1, 0), True)]),
    ([(1, (0, 0, 0), (2, 2, 2), False)], [(1, (0, 0, 0), (8, 1, 1), False)]),
    ([(1, (0, 0, 0), (2, 2, 2), True)], [(1, (0, 0, 0), (8, 1, 1), True)]),
]


def random_parallelotope(rng, n):
    while True:
        E = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n)]
        try:
            return Parallelotope.make((0,) * n, E, closed=rng.random() < 0.5)
        except DomainError:
            continue


def shear(p, rng):
    # unimodular column operation keeps |det|
    E = [list(e) for e in p.edges]
    i, j = rng.sample(range(len(E)), 2)
    k = rng.randint(-2, 2)
    E[i] = [x + k * y for x, y in zip(E[i], E[j])]
    return Parallelotope.make(p.base, E, p.closed)
