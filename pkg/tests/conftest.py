import itertools
import random

import pytest

from monarb.core import ColoredTournament, KColoring, Tournament, edge_count


def random_tournament(n: int, rng: random.Random) -> Tournament:
    rows = [0] * n
    for i, j in itertools.combinations(range(n), 2):
        if rng.getrandbits(1):
            rows[i] |= 1 << j
        else:
            rows[j] |= 1 << i
    return Tournament(n, rows)


def random_colored(n: int, k: int, rng: random.Random) -> ColoredTournament:
    t = random_tournament(n, rng)
    colors = bytes(rng.randrange(k) for _ in range(edge_count(n)))
    return ColoredTournament(t, KColoring(k, colors))


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture(scope="session")
def order9_anchor():
    from monarb.io import load_order9_anchor

    return load_order9_anchor()
