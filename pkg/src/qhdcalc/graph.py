"""Weighted resolution graphs: trees decorated with self-intersection numbers.

A graph holds vertices with integer weights -d_i <= -1, tree edges, and an
optional cross ratio attached when (and only when) a valency-4 vertex is
present.  Everything is immutable; operations build new graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import elim

ANHARMONIC = "anharmonic"
HARMONIC = "harmonic"


@dataclass(frozen=True)
class CrossRatio:
    """Modulus of the four intersection points on a valency-4 curve.

    ``rational`` carries an exact value (never 0 or 1).  ``anharmonic`` and
    ``harmonic`` are classification tags for the special weighted-homogeneous
    families; they take part in no arithmetic.
    """

    tag: str
    value: Fraction | None = None

    @staticmethod
    def rational(q) -> "CrossRatio":
        q = Fraction(q)
        if q == 0 or q == 1:
            raise ValueError("cross ratio must avoid 0 and 1")
        return CrossRatio("rational", q)

    @staticmethod
    def anharmonic() -> "CrossRatio":
        return CrossRatio(ANHARMONIC)

    @staticmethod
    def harmonic() -> "CrossRatio":
        return CrossRatio(HARMONIC)

    def __str__(self) -> str:
        if self.tag == "rational":
            return f"{self.value.numerator}/{self.value.denominator}"
        return self.tag


class WeightedGraph:
    """Immutable decorated tree.  Vertex ids are integers."""

    __slots__ = ("weights", "edges", "cross_ratio", "_adj")

    def __init__(self, weights, edges, cross_ratio=None):
        object.__setattr__(self, "weights", dict(weights))
        norm = []
        for a, b in edges:
            if a == b:
                raise ValueError(f"loop edge at vertex {a}")
            norm.append((a, b) if a < b else (b, a))
        norm.sort()
        object.__setattr__(self, "edges", tuple(norm))
        object.__setattr__(self, "cross_ratio", cross_ratio)
        adj = {v: [] for v in self.weights}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(
            self, "_adj", {v: tuple(sorted(ns)) for v, ns in adj.items()}
        )

    def __setattr__(self, name, value):
        raise AttributeError("WeightedGraph is immutable")

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.weights))

    def weight(self, v: int) -> int:
        return self.weights[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def valency(self, v: int) -> int:
        return len(self._adj[v])

    def __len__(self) -> int:
        return len(self.weights)

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.weights == other.weights
            and self.edges == other.edges
            and self.cross_ratio == other.cross_ratio
        )

    def __hash__(self):
        return hash(
            (tuple(sorted(self.weights.items())), self.edges, self.cross_ratio)
        )

    def __repr__(self):
        ws = ",".join(f"{v}:{w}" for v, w in sorted(self.weights.items()))
        cr = f" c={self.cross_ratio}" if self.cross_ratio else ""
        return f"WeightedGraph({ws}; {len(self.edges)} edges{cr})"

    def replace(self, weights=None, edges=None, cross_ratio=...):
        return WeightedGraph(
            self.weights if weights is None else weights,
            self.edges if edges is None else edges,
            self.cross_ratio if cross_ratio is ... else cross_ratio,
        )


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()


@dataclass(frozen=True)
class IntersectionMatrix:
    """Symmetric integer matrix in a fixed vertex order (ascending ids)."""

    entries: tuple[tuple[int, ...], ...]
    ordering: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.ordering)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def _is_tree(g: WeightedGraph) -> bool:
    vs = g.vertices
    if not vs:
        return False
    if len(g.edges) != len(vs) - 1:
        return False
    seen = {vs[0]}
    stack = [vs[0]]
    while stack:
        v = stack.pop()
        for u in g.neighbors(v):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(vs)


def validate(g: WeightedGraph) -> ValidationReport:
    """Check the decorated-tree invariants; returns all violations found."""
    problems = []
    for a, b in g.edges:
        if a not in g.weights or b not in g.weights:
            problems.append(f"edge ({a},{b}) has an endpoint that is not a vertex")
    if problems:
        return ValidationReport(False, tuple(problems))
    if not _is_tree(g):
        problems.append("edge set is not a tree on the vertex set")
    for v in g.vertices:
        if g.weight(v) > -1:
            problems.append(f"vertex {v} has weight {g.weight(v)} > -1")
    high = [v for v in g.vertices if g.valency(v) > 4]
    for v in high:
        problems.append(f"vertex {v} has valency {g.valency(v)} > 4")
    val4 = [v for v in g.vertices if g.valency(v) == 4]
    if len(val4) > 1:
        problems.append(f"more than one valency-4 vertex: {val4}")
    cr = g.cross_ratio
    if val4 and cr is None:
        problems.append("valency-4 vertex present but no cross ratio attached")
    if not val4 and cr is not None:
        problems.append("cross ratio attached but no valency-4 vertex")
    if cr is not None and cr.tag == "rational" and cr.value in (0, 1):
        problems.append(f"cross ratio {cr.value} is forbidden")
    return ValidationReport(not problems, tuple(problems))


def intersection_matrix(g: WeightedGraph) -> IntersectionMatrix:
    rep = validate(g)
    if not rep.ok:
        raise ValueError(f"invalid graph: {'; '.join(rep.violations)}")
    order = g.vertices
    idx = {v: i for i, v in enumerate(order)}
    n = len(order)
    m = [[0] * n for _ in range(n)]
    for i, v in enumerate(order):
        m[i][i] = g.weight(v)
    for a, b in g.edges:
        m[idx[a]][idx[b]] = 1
        m[idx[b]][idx[a]] = 1
    return IntersectionMatrix(tuple(tuple(r) for r in m), order)


def determinant(m: IntersectionMatrix) -> int:
    return elim.det_bareiss(m.rows())


def is_negative_definite(m: IntersectionMatrix) -> bool:
    """Sylvester test: leading principal minors alternate sign, starting < 0."""
    minors = elim.leading_minors(m.rows())
    for k, d in enumerate(minors, start=1):
        if d == 0 or (d > 0) != (k % 2 == 0):
            return False
    return True


def nodes(g: WeightedGraph) -> tuple[int, ...]:
    """Vertices of valency >= 3."""
    return tuple(v for v in g.vertices if g.valency(v) >= 3)


def is_minimal(g: WeightedGraph) -> bool:
    """No contractible vertex: weight -1 together with valency <= 2."""
    return not any(
        g.weight(v) == -1 and g.valency(v) <= 2 for v in g.vertices
    )


def minus_one_vertices(g: WeightedGraph) -> tuple[int, ...]:
    return tuple(v for v in g.vertices if g.weight(v) == -1)


# ---------------------------------------------------------------------------
# Canonical form.  AHU-style encoding of the decorated tree rooted at its
# centroid; the cross ratio is appended verbatim.  Equal strings <=> the
# decorated graphs are isomorphic.


def _subtree_sizes(g: WeightedGraph, root: int) -> dict[int, int]:
    size = {}
    order = []
    stack = [(root, None)]
    while stack:
        v, parent = stack.pop()
        order.append((v, parent))
        for u in g.neighbors(v):
            if u != parent:
                stack.append((u, v))
    for v, parent in reversed(order):
        size[v] = 1 + sum(size[u] for u in g.neighbors(v) if u != parent)
    return size


def _centroids(g: WeightedGraph) -> list[int]:
    vs = g.vertices
    n = len(vs)
    root = vs[0]
    size = _subtree_sizes(g, root)
    best, cents = None, []
    for v in vs:
        # component sizes when v is removed, seen from the DFS tree at root
        comp = [size[u] for u in g.neighbors(v) if size[u] < size[v]]
        parent_side = n - size[v]
        if parent_side:
            comp.append(parent_side)
        m = max(comp) if comp else 0
        if best is None or m < best:
            best, cents = m, [v]
        elif m == best:
            cents.append(v)
    return cents


def _encode(g: WeightedGraph, v: int, parent: int | None) -> str:
    children = sorted(
        _encode(g, u, v) for u in g.neighbors(v) if u != parent
    )
    return f"({g.weight(v)}" + "".join(children) + ")"


def canonical_key(g: WeightedGraph) -> str:
    """Isomorphism-invariant string for the decorated graph."""
    enc = min(_encode(g, c, None) for c in _centroids(g))
    if g.cross_ratio is not None:
        enc += f"|c={g.cross_ratio}"
    return enc


def relabel(g: WeightedGraph, mapping: dict[int, int]) -> WeightedGraph:
    return WeightedGraph(
        {mapping[v]: w for v, w in g.weights.items()},
        [(mapping[a], mapping[b]) for a, b in g.edges],
        g.cross_ratio,
    )


def isomorphic(g: WeightedGraph, h: WeightedGraph) -> bool:
    return canonical_key(g) == canonical_key(h)


# ---------------------------------------------------------------------------
# Text format.  One record per line:
#   v <id> <weight>
#   e <id> <id>
#   c <p>/<q> | c anharmonic | c harmonic


class GraphParseError(ValueError):
    pass


def parse_graph(text: str, check: bool = True) -> WeightedGraph:
    """Parse the text format; with ``check`` the graph must also validate."""
    weights: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    cross: CrossRatio | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "v" and len(parts) == 3:
                vid, w = int(parts[1]), int(parts[2])
                if vid in weights:
                    raise ValueError(f"duplicate vertex {vid}")
                weights[vid] = w
            elif kind == "e" and len(parts) == 3:
                edges.append((int(parts[1]), int(parts[2])))
            elif kind == "c" and len(parts) == 2:
                if cross is not None:
                    raise ValueError("duplicate cross ratio")
                tok = parts[1]
                if tok == ANHARMONIC:
                    cross = CrossRatio.anharmonic()
                elif tok == HARMONIC:
                    cross = CrossRatio.harmonic()
                else:
                    cross = CrossRatio.rational(Fraction(tok))
            else:
                raise ValueError(f"unrecognized record {line!r}")
        except (ValueError, ZeroDivisionError) as exc:
            raise GraphParseError(f"line {lineno}: {exc}") from None
    for a, b in edges:
        if a not in weights or b not in weights:
            raise GraphParseError(
                f"edge ({a},{b}) references an undeclared vertex"
            )
    if not weights:
        raise GraphParseError("empty graph")
    g = WeightedGraph(weights, edges, cross)
    if check:
        rep = validate(g)
        if not rep.ok:
            raise GraphParseError("; ".join(rep.violations))
    return g


def format_graph(g: WeightedGraph) -> str:
    lines = [f"v {v} {g.weight(v)}" for v in g.vertices]
    lines += [f"e {a} {b}" for a, b in g.edges]
    if g.cross_ratio is not None:
        lines.append(f"c {g.cross_ratio}")
    return "\n".join(lines) + "\n"


def to_dot(g: WeightedGraph) -> str:
    lines = ["graph resolution {"]
    for v in g.vertices:
        lines.append(f'  "{v}" [label="{v}:{g.weight(v)}"];')
    for a, b in g.edges:
        lines.append(f'  "{a}" -- "{b}";')
    if g.cross_ratio is not None:
        lines.append(f'  label="cross ratio {g.cross_ratio}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
