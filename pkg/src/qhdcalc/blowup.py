"""The graph rewriting system behind the three seed families.

Seeds are the three-armed stars with a central (-1)-vertex.  Two moves act on
a graph with a unique (-1)-vertex: blowing up the vertex itself (a new (-1)
leaf sprouts and the old vertex drops to -2) and blowing up an edge at the
vertex (a new (-1) is inserted, the old vertex drops to -2, the far endpoint
loses one).  Trading the final (-1) for a type-dependent weight produces the
minimal graphs that the smoothing criterion consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graph import (
    CrossRatio,
    WeightedGraph,
    canonical_key,
    minus_one_vertices,
)

TYPE_A = "A"
TYPE_B = "B"
TYPE_C = "C"
SEED_TYPES = (TYPE_A, TYPE_B, TYPE_C)

_SEED_LEAVES = {TYPE_A: (-3, -3, -3), TYPE_B: (-4, -4, -2), TYPE_C: (-6, -3, -2)}
_MODIFIED_WEIGHT = {TYPE_A: -4, TYPE_B: -3, TYPE_C: -2}
# chain appended behind the anchor by augment(): the (-1) plus trailing (-2)s
_AUGMENT_CHAIN = {TYPE_A: 3, TYPE_B: 2, TYPE_C: 1}


class BlowupError(ValueError):
    pass


@dataclass(frozen=True)
class BlowUpOp:
    kind: str  # "B1" | "B2"
    edge: tuple[int, int] | None = None

    def __post_init__(self):
        if self.kind not in ("B1", "B2"):
            raise ValueError(f"unknown op kind {self.kind!r}")
        if self.kind == "B2":
            if self.edge is None:
                raise ValueError("B2 needs a target edge")
            a, b = self.edge
            object.__setattr__(self, "edge", (a, b) if a < b else (b, a))
        elif self.edge is not None:
            raise ValueError("B1 takes no edge")

    def to_text(self) -> str:
        if self.kind == "B1":
            return "B1"
        return f"B2@{self.edge[0]}-{self.edge[1]}"

    @staticmethod
    def parse(tok: str) -> "BlowUpOp":
        if tok == "B1":
            return BlowUpOp("B1")
        if tok.startswith("B2@"):
            a, _, b = tok[3:].partition("-")
            return BlowUpOp("B2", (int(a), int(b)))
        raise ValueError(f"bad op token {tok!r}")


@dataclass(frozen=True)
class ConstructionHistory:
    seed: str
    ops: tuple[BlowUpOp, ...] = ()
    modified: bool = False

    def __post_init__(self):
        if self.seed not in SEED_TYPES:
            raise ValueError(f"unknown seed type {self.seed!r}")
        object.__setattr__(self, "ops", tuple(self.ops))

    def to_text(self) -> str:
        ops = ",".join(op.to_text() for op in self.ops) or "-"
        mod = "yes" if self.modified else "no"
        return f"seed={self.seed} ops={ops} mod={mod}"

    @staticmethod
    def parse(text: str) -> "ConstructionHistory":
        fields = dict(
            part.split("=", 1) for part in text.split() if "=" in part
        )
        try:
            seed = fields["seed"]
            opstr = fields["ops"]
            mod = fields["mod"]
        except KeyError as exc:
            raise ValueError(f"history needs seed=/ops=/mod=: {text!r}") from exc
        ops = ()
        if opstr != "-":
            ops = tuple(BlowUpOp.parse(tok) for tok in opstr.split(","))
        if mod not in ("yes", "no"):
            raise ValueError(f"mod must be yes or no, got {mod!r}")
        return ConstructionHistory(seed, ops, mod == "yes")


def seed_graph(t: str) -> WeightedGraph:
    """Three-armed star: center 1 with weight -1, leaves 2..4."""
    leaves = _SEED_LEAVES[t]
    weights = {1: -1, 2: leaves[0], 3: leaves[1], 4: leaves[2]}
    return WeightedGraph(weights, [(1, 2), (1, 3), (1, 4)])


def modified_center_weight(t: str) -> int:
    return _MODIFIED_WEIGHT[t]


def _unique_minus_one(g: WeightedGraph) -> int:
    m1 = minus_one_vertices(g)
    if len(m1) != 1:
        raise BlowupError(
            f"graph needs exactly one (-1)-vertex, found {len(m1)}"
        )
    return m1[0]


def apply_b1(g: WeightedGraph) -> WeightedGraph:
    v = _unique_minus_one(g)
    w = max(g.vertices) + 1
    weights = dict(g.weights)
    weights[v] = -2
    weights[w] = -1
    return g.replace(weights=weights, edges=list(g.edges) + [(v, w)])


def apply_b2(g: WeightedGraph, edge: tuple[int, int]) -> WeightedGraph:
    a, b = edge
    edge = (a, b) if a < b else (b, a)
    if edge not in g.edges:
        raise BlowupError(f"no edge {edge} in graph")
    v = _unique_minus_one(g)
    if v not in edge:
        raise BlowupError(f"edge {edge} is not incident to the (-1)-vertex {v}")
    u = edge[0] if edge[1] == v else edge[1]
    w = max(g.vertices) + 1
    weights = dict(g.weights)
    weights[v] = -2
    weights[u] = g.weight(u) - 1
    weights[w] = -1
    edges = [e for e in g.edges if e != edge] + [(v, w), (w, u)]
    return g.replace(weights=weights, edges=edges)


def apply_m(g: WeightedGraph, t: str) -> WeightedGraph:
    v = _unique_minus_one(g)
    weights = dict(g.weights)
    weights[v] = _MODIFIED_WEIGHT[t]
    return g.replace(weights=weights)


def blow_down(g: WeightedGraph, v: int) -> WeightedGraph:
    if g.weight(v) != -1:
        raise BlowupError(f"vertex {v} has weight {g.weight(v)}, not -1")
    nbs = g.neighbors(v)
    if len(nbs) > 2:
        raise BlowupError(f"vertex {v} has valency {len(nbs)} > 2")
    weights = {u: w + 1 if u in nbs else w for u, w in g.weights.items()}
    del weights[v]
    edges = [e for e in g.edges if v not in e]
    if len(nbs) == 2:
        edges.append(nbs)
    cross = g.cross_ratio
    if cross is not None and not any(
        sum(1 for e in edges if u in e) == 4 for u in weights
    ):
        cross = None
    return WeightedGraph(weights, edges, cross)


def augment(g: WeightedGraph, t: str) -> WeightedGraph:
    """One vertex blow-up followed by the type-dependent edge blow-ups.

    The old (-1)-vertex ends at the modified weight and carries a pendant
    chain ((-1) then -2s) whose removal recovers the minimal graph.
    """
    v = _unique_minus_one(g)
    out = apply_b1(g)
    for _ in range(_AUGMENT_CHAIN[t] - 1):
        out = apply_b2(out, (_unique_minus_one(out), v))
    return out


def minimalize(g_sharp: WeightedGraph, t: str) -> WeightedGraph:
    """Delete the pendant chain of an augmented graph, recovering the
    minimal graph (same result as apply_m on the pre-augmentation graph)."""
    w = _unique_minus_one(g_sharp)
    anchor_weight = _MODIFIED_WEIGHT[t]
    chain = [w]
    nbs = g_sharp.neighbors(w)
    anchors = [u for u in nbs if g_sharp.weight(u) == anchor_weight]
    tail = [u for u in nbs if g_sharp.weight(u) == -2 and u not in anchors]
    if len(anchors) != 1 or len(nbs) != len(anchors) + len(tail):
        raise BlowupError("augmentation chain not present")
    prev = w
    while tail:
        cur = tail[0]
        chain.append(cur)
        nxt = [u for u in g_sharp.neighbors(cur) if u != prev]
        if any(g_sharp.weight(u) != -2 for u in nxt):
            raise BlowupError("augmentation chain not present")
        prev, tail = cur, nxt
    if len(chain) != _AUGMENT_CHAIN[t]:
        raise BlowupError(
            f"augmentation chain has {len(chain)} vertices, "
            f"expected {_AUGMENT_CHAIN[t]} for type {t}"
        )
    weights = {u: wt for u, wt in g_sharp.weights.items() if u not in chain}
    edges = [e for e in g_sharp.edges if e[0] not in chain and e[1] not in chain]
    out = WeightedGraph(weights, edges, g_sharp.cross_ratio)
    if out.cross_ratio is not None and not any(
        out.valency(v) == 4 for v in out.vertices
    ):
        out = out.replace(cross_ratio=None)
    return out


def replay(
    h: ConstructionHistory, cross_ratio: Fraction | None = None
) -> WeightedGraph:
    """Deterministic rebuild: seed, ops in order, final modification.

    A rational ``cross_ratio`` is attached the moment a valency-4 vertex
    appears; with ``None`` the graph is left without one (validate will
    flag it, which is sometimes the point).
    """
    g = seed_graph(h.seed)
    for i, op in enumerate(h.ops):
        try:
            if op.kind == "B1":
                g = apply_b1(g)
            else:
                g = apply_b2(g, op.edge)
        except BlowupError as exc:
            raise BlowupError(f"op {i} ({op.to_text()}): {exc}") from None
        if (
            cross_ratio is not None
            and g.cross_ratio is None
            and any(g.valency(v) == 4 for v in g.vertices)
        ):
            g = g.replace(cross_ratio=CrossRatio.rational(cross_ratio))
    if h.modified:
        g = apply_m(g, h.seed)
    return g


def replay_states(
    h: ConstructionHistory, cross_ratio: Fraction | None = None
) -> list[WeightedGraph]:
    """All intermediate pre-modification graphs, seed first."""
    states = [seed_graph(h.seed)]
    for i, op in enumerate(h.ops):
        g = states[-1]
        try:
            g = apply_b1(g) if op.kind == "B1" else apply_b2(g, op.edge)
        except BlowupError as exc:
            raise BlowupError(f"op {i} ({op.to_text()}): {exc}") from None
        if (
            cross_ratio is not None
            and g.cross_ratio is None
            and any(g.valency(v) == 4 for v in g.vertices)
        ):
            g = g.replace(cross_ratio=CrossRatio.rational(cross_ratio))
        states.append(g)
    return states


@dataclass(frozen=True)
class GraphClass:
    """One isomorphism class of minimal graphs with its witness histories."""

    key: str
    graph: WeightedGraph
    witness: ConstructionHistory
    histories: tuple[ConstructionHistory, ...] = field(repr=False, default=())


def _admissible_ops(g: WeightedGraph) -> list[BlowUpOp]:
    v = _unique_minus_one(g)
    ops = []
    # B1 raises the valency of the (-1)-vertex by one; never allow a second
    # valency-4 vertex or any valency 5.
    val4 = sum(1 for u in g.vertices if g.valency(u) == 4)
    if g.valency(v) < 4 and not (g.valency(v) == 3 and val4 > 0):
        ops.append(BlowUpOp("B1"))
    for e in g.edges:
        if v in e:
            ops.append(BlowUpOp("B2", e))
    return ops


def enumerate_classes(
    seed: str, max_ops: int, cross_ratio: Fraction = Fraction(-1)
) -> list[GraphClass]:
    """All minimal graphs reachable with at most ``max_ops`` blow-ups,
    de-duplicated up to decorated-graph isomorphism.

    Emission order is fixed by the canonical encoding; the witness history
    is the lexicographically least serialization in its class.
    """
    if max_ops < 0:
        raise ValueError("max_ops must be >= 0")
    by_key: dict[str, list[ConstructionHistory]] = {}
    graphs: dict[str, WeightedGraph] = {}

    def visit(g: WeightedGraph, ops: tuple[BlowUpOp, ...]):
        h = ConstructionHistory(seed, ops, modified=True)
        gm = apply_m(g, seed)
        key = canonical_key(gm)
        by_key.setdefault(key, []).append(h)
        graphs.setdefault(key, gm)
        if len(ops) < max_ops:
            for op in _admissible_ops(g):
                nxt = apply_b1(g) if op.kind == "B1" else apply_b2(g, op.edge)
                if (
                    nxt.cross_ratio is None
                    and any(nxt.valency(u) == 4 for u in nxt.vertices)
                ):
                    nxt = nxt.replace(cross_ratio=CrossRatio.rational(cross_ratio))
                visit(nxt, ops + (op,))

    visit(seed_graph(seed), ())
    out = []
    for key in sorted(by_key):
        hs = sorted(by_key[key], key=lambda h: h.to_text())
        out.append(GraphClass(key, graphs[key], hs[0], tuple(hs)))
    return out


def enumerate_graphs(
    seed: str, max_ops: int, cross_ratio: Fraction = Fraction(-1)
):
    """Stream of (witness history, minimal graph) per isomorphism class."""
    for cls in enumerate_classes(seed, max_ops, cross_ratio):
        yield cls.witness, cls.graph
