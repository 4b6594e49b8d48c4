import itertools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qhdcalc.blowup import BlowUpOp, ConstructionHistory, replay, seed_graph
from qhdcalc.graph import WeightedGraph


# ---------------------------------------------------------------------------
# Independent oracles.  These stay deliberately naive; they are the yardstick
# for the fast implementations and must not share code with them.


def cofactor_det(m):
    """Textbook cofactor expansion along the first row."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


def brute_isomorphic(g: WeightedGraph, h: WeightedGraph) -> bool:
    """Try every vertex bijection; only usable for tiny graphs."""
    if len(g) != len(h) or g.cross_ratio != h.cross_ratio:
        return False
    gs, hs = g.vertices, h.vertices
    gw = sorted(g.weights.values())
    if gw != sorted(h.weights.values()):
        return False
    for perm in itertools.permutations(hs):
        mapping = dict(zip(gs, perm))
        if any(g.weight(v) != h.weight(mapping[v]) for v in gs):
            continue
        if all(
            tuple(sorted((mapping[a], mapping[b]))) in h.edges
            for a, b in g.edges
        ):
            return True
    return False


def history(seed: str, *ops: str, modified: bool = True) -> ConstructionHistory:
    return ConstructionHistory(
        seed, tuple(BlowUpOp.parse(t) for t in ops), modified
    )


# ---------------------------------------------------------------------------
# Shared fixtures


@pytest.fixture(scope="session")
def seeds():
    return {t: seed_graph(t) for t in "ABC"}


@pytest.fixture(scope="session")
def modified_seeds():
    from qhdcalc.blowup import apply_m

    return {t: apply_m(seed_graph(t), t) for t in "ABC"}


# one H-shaped base witness per seed type (two-node, h^1 expected 0)
H_WITNESSES = {
    "A": ("B2@1-2", "B1"),
    "B": ("B2@1-2", "B1"),
    "C": ("B2@1-4", "B1"),
}

# one key-shaped base witness per seed type (valency-4 node, h^1 expected 1)
KEY_WITNESSES = {
    "A": ("B1", "B2@1-5", "B1"),
    "B": ("B1", "B2@1-5", "B1"),
    "C": ("B1", "B2@1-5", "B1"),
}


@pytest.fixture(scope="session")
def h_witnesses():
    return {t: history(t, *ops) for t, ops in H_WITNESSES.items()}


@pytest.fixture(scope="session")
def key_witnesses():
    return {t: history(t, *ops) for t, ops in KEY_WITNESSES.items()}
