"""Shape classification and the two-node base patterns fixing epsilon.

A first two-node graph in a construction history always shows the (-1) in
one of two positions relative to the far node: as a leaf on a -2 node, or
riding a branch of a node of weight -e with e >= 3.  Each comes in an
H-shaped variant (near node of valency 3, two leaf weights out of a triple)
and a key-shaped variant (near node of valency 4 with the full triple and
weight -d, d >= 3).  The key-shaped patterns carry one extra modulus, which
is what the constant epsilon records.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import WeightedGraph, minus_one_vertices, nodes, validate

H_BRANCH = "H_BRANCH"
H_LEAF = "H_LEAF"
KEY_BRANCH = "KEY_BRANCH"
KEY_LEAF = "KEY_LEAF"

# admissible leaf-weight triples at the near node (sorted ascending)
TRIPLES = ((3, 3, 3), (2, 4, 4), (2, 3, 6))


class MatchError(ValueError):
    pass


@dataclass(frozen=True)
class ShapeClass:
    tag: str  # linear | star | h_shaped | key_shaped | other
    node_valency: int | None = None


@dataclass(frozen=True)
class LemmaMatch:
    lemma: str | None
    bindings: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.lemma is not None


NO_MATCH = LemmaMatch(None)


def classify_shape(g: WeightedGraph) -> ShapeClass:
    ns = nodes(g)
    if not ns:
        return ShapeClass("linear")
    if len(ns) == 1:
        return ShapeClass("star", g.valency(ns[0]))
    if len(ns) == 2:
        vals = sorted(g.valency(v) for v in ns)
        if vals == [3, 3]:
            return ShapeClass("h_shaped")
        if vals == [3, 4]:
            return ShapeClass("key_shaped")
    return ShapeClass("other")


def _path(g: WeightedGraph, a: int, b: int) -> list[int]:
    parent = {a: None}
    stack = [a]
    while stack:
        v = stack.pop()
        if v == b:
            break
        for u in g.neighbors(v):
            if u not in parent:
                parent[u] = v
                stack.append(u)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return path[::-1]


def _triple_subset(weights: list[int]) -> list[tuple[int, ...]]:
    """Triples containing the given weights as a multisubset."""
    out = []
    for triple in TRIPLES:
        pool = list(triple)
        if all(w in pool and (pool.remove(w) or True) for w in weights):
            out.append(triple)
    return out


def match_lemma(g: WeightedGraph) -> LemmaMatch:
    """Match a non-minimal two-node graph against the four base patterns.

    Returns NO_MATCH when the graph fits none of them; that is a reportable
    event for graphs arising from the enumeration, never a guess.
    """
    m1s = minus_one_vertices(g)
    if len(m1s) != 1:
        raise MatchError(f"need a unique (-1)-vertex, found {len(m1s)}")
    ns = nodes(g)
    if len(ns) != 2:
        raise MatchError(f"need exactly two nodes, found {len(ns)}")
    m1 = m1s[0]
    if m1 in ns:
        return NO_MATCH
    # near node carries the (-1); it is the closer of the two
    d0 = len(_path(g, m1, ns[0]))
    d1 = len(_path(g, m1, ns[1]))
    if d0 == d1:
        return NO_MATCH
    near, far = (ns[0], ns[1]) if d0 < d1 else (ns[1], ns[0])
    if near not in _path(g, m1, far):
        # the (-1) sits on the inter-node path; no pattern covers that
        return NO_MATCH

    if g.valency(m1) == 1:
        if g.neighbors(m1)[0] != near or g.weight(near) != -2:
            return NO_MATCH
        variant_leaf = True
    elif g.valency(m1) == 2:
        if g.weight(near) > -3:
            return NO_MATCH
        variant_leaf = False
    else:
        return NO_MATCH

    # the far node carries the leaf weights of the seed triple
    inter = _path(g, far, near)
    arm_leaves = [u for u in g.neighbors(far) if u != inter[1]]
    if any(g.valency(u) != 1 for u in arm_leaves):
        return NO_MATCH
    leaf_weights = sorted(-g.weight(u) for u in arm_leaves)
    d = -g.weight(far)
    bindings = {}
    if g.valency(far) == 3:
        triples = _triple_subset(leaf_weights)
        if not triples:
            return NO_MATCH
        lemma = H_LEAF if variant_leaf else H_BRANCH
        bindings["a"], bindings["b"] = leaf_weights
        bindings["triples"] = triples
    elif g.valency(far) == 4:
        if d < 3 or tuple(leaf_weights) not in TRIPLES:
            return NO_MATCH
        lemma = KEY_LEAF if variant_leaf else KEY_BRANCH
        bindings["a"], bindings["b"], bindings["c"] = leaf_weights
        bindings["triples"] = [tuple(leaf_weights)]
    else:
        return NO_MATCH
    bindings["d"] = d
    bindings["e"] = -g.weight(near)
    bindings["adjacent_nodes"] = len(inter) == 2
    return LemmaMatch(lemma, bindings)


def epsilon_of(match: LemmaMatch) -> int:
    """0 for the H-shaped patterns, 1 for the key-shaped ones."""
    if not match:
        raise MatchError("no pattern matched; epsilon undefined")
    return 1 if match.lemma in (KEY_BRANCH, KEY_LEAF) else 0


def h1_expected(match: LemmaMatch) -> int:
    """Stabilized h^1 of the corresponding minimal graph: 0 for H-shaped,
    1 for key-shaped (the calibration oracle for the cohomology module)."""
    if not match:
        raise MatchError("no pattern matched; h^1 oracle undefined")
    return epsilon_of(match)
