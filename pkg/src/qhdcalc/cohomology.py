"""h^1 of the tangent sheaf on non-reduced plumbing curves, exactly.

The curve attached to a graph and a multiplicity vector s is covered by one
chart pair per vertex; vector fields live in local coordinates (x, y) with x
running along the curve and y along the fiber.  Charts of one vertex are glued
by (x, y) -> (1/x, x^d y); across an edge the base and fiber coordinates are
interchanged.  Neighbours of a vertex sit at x=0, x=infinity, x=1 and x=c (the
cross ratio), assigned in ascending vertex order.

h^1 is the number of window monomials at the intersection points minus the
rank of the matrix of restrictions of the global section basis; both are
computed over exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm

from . import elim
from .graph import WeightedGraph, intersection_matrix, is_negative_definite

Coeffs = dict[tuple[int, int], Fraction]


class CohomologyError(ValueError):
    pass


class StabilizationError(RuntimeError):
    """h^1 did not settle within the multiplier cap; never guess silently."""


@dataclass(frozen=True)
class TruncatedVectorField:
    """Finite coefficient tables of f(x,y) d/dx + g(x,y) d/dy in one chart.

    Keys are (x-exponent, y-exponent); x-exponents may go negative while a
    germ is being pushed through a chart transition.
    """

    coeff_x: Coeffs
    coeff_y: Coeffs

    def is_zero(self) -> bool:
        return not self.coeff_x and not self.coeff_y


def _require_multiplicities(g: WeightedGraph, s: dict[int, int]) -> None:
    for v in g.vertices:
        if s.get(v, 0) < 1:
            raise CohomologyError(f"multiplicity at vertex {v} must be >= 1")


def _cross_value(g: WeightedGraph) -> Fraction | None:
    cr = g.cross_ratio
    if cr is None:
        return None
    if cr.tag != "rational":
        raise CohomologyError(
            f"cross ratio tag {cr.tag!r} carries no number; substitute a "
            "rational test value (h^1 does not depend on the choice)"
        )
    return cr.value


def ample_cycle(g: WeightedGraph) -> dict[int, int]:
    """Smallest s >= 1 with (intersection matrix) . s < 0 componentwise.

    Incremental search: bump any vertex whose pairing is still >= 0.  For a
    negative definite graph this terminates at the componentwise minimum.
    """
    m = intersection_matrix(g)
    if not is_negative_definite(m):
        raise CohomologyError("graph is not negative definite, no ample cycle")
    s = {v: 1 for v in g.vertices}

    def pairing(v: int) -> int:
        return g.weight(v) * s[v] + sum(s[u] for u in g.neighbors(v))

    guard = 0
    while True:
        bumped = False
        for v in g.vertices:
            if pairing(v) >= 0:
                s[v] += 1
                bumped = True
        if not bumped:
            return s
        guard += 1
        if guard > 10_000:
            raise CohomologyError("ample cycle search did not terminate")


def section_basis(
    g: WeightedGraph, v: int, s: dict[int, int]
) -> list[TruncatedVectorField]:
    """Basis of the vector fields on the curve neighbourhood of one vertex,
    written in its first chart and truncated to fiber exponents below s_v.

    The exponent windows depend on the valency t and the weight -d:

      * x^a y^b d/dy           for 0 <= a <= d(b-1), b > 0   (any t)
      * x^a y^b d/dx           for 0 < a <= db+1, b >= 0     (t <= 2)
      * (x^d y)^b d/dx         for b >= 0                    (t == 1)
      * x^a y^b (x-1) d/dx     for 0 < a <= db, b > 0        (t == 3)
      * x^a y^b (x-1)(x-c) d/dx for 0 < a <= db-1, b > 0     (t == 4)
    """
    _require_multiplicities(g, s)
    d = -g.weight(v)
    t = g.valency(v)
    si = s[v]
    one = Fraction(1)
    out: list[TruncatedVectorField] = []
    for b in range(1, si):
        for a in range(0, d * (b - 1) + 1):
            out.append(TruncatedVectorField({}, {(a, b): one}))
    if t <= 2:
        for b in range(0, si):
            for a in range(1, d * b + 2):
                out.append(TruncatedVectorField({(a, b): one}, {}))
        if t == 1:
            # second chart is unmarked, so the germ y2^b d/dx2 is global;
            # written in the first chart: -x^(db+2) y^b d/dx + d x^(db+1) y^(b+1) d/dy
            for b in range(0, si):
                out.append(
                    TruncatedVectorField(
                        {(d * b + 2, b): -one},
                        {(d * b + 1, b + 1): Fraction(d)},
                    )
                )
    elif t == 3:
        for b in range(1, si):
            for a in range(1, d * b + 1):
                out.append(
                    TruncatedVectorField({(a + 1, b): one, (a, b): -one}, {})
                )
    elif t == 4:
        c = _cross_value(g)
        if c is None:
            raise CohomologyError(
                f"vertex {v} has valency 4 but the graph has no cross ratio"
            )
        for b in range(1, si):
            for a in range(1, d * b):
                out.append(
                    TruncatedVectorField(
                        {
                            (a + 2, b): one,
                            (a + 1, b): -(1 + c),
                            (a, b): Fraction(c),
                        },
                        {},
                    )
                )
    return out


def _add(table: Coeffs, key: tuple[int, int], val: Fraction) -> None:
    cur = table.get(key)
    if cur is None:
        table[key] = val
    else:
        cur += val
        if cur:
            table[key] = cur
        else:
            del table[key]


def _recenter(field: TruncatedVectorField, k: Fraction) -> TruncatedVectorField:
    """Substitute x -> x + k (d/dx is translation invariant)."""
    out_x: Coeffs = {}
    out_y: Coeffs = {}
    for out, table in ((out_x, field.coeff_x), (out_y, field.coeff_y)):
        for (a, b), co in table.items():
            for j in range(a + 1):
                _add(out, (j, b), co * comb(a, j) * k ** (a - j))
    return TruncatedVectorField(out_x, out_y)


def _to_second_chart(field: TruncatedVectorField, d: int) -> TruncatedVectorField:
    """Push through (x, y) -> (1/x, x^d y).

    d/dx maps to -u^2 d/du + d u v d/dv and d/dy to u^(-d) d/dv in the new
    coordinates (u, v); monomials transform by x^a y^b = u^(db-a) v^b.
    """
    out_x: Coeffs = {}
    out_y: Coeffs = {}
    for (a, b), co in field.coeff_x.items():
        _add(out_x, (d * b - a + 2, b), -co)
        if d:
            _add(out_y, (d * b - a + 1, b + 1), d * co)
    for (a, b), co in field.coeff_y.items():
        _add(out_y, (d * (b - 1) - a, b), co)
    return TruncatedVectorField(out_x, out_y)


def _swap(field: TruncatedVectorField) -> TruncatedVectorField:
    """Cross an edge: base and fiber coordinates interchange."""
    return TruncatedVectorField(
        {(b, a): co for (a, b), co in field.coeff_y.items()},
        {(b, a): co for (a, b), co in field.coeff_x.items()},
    )


def _local_at_neighbor(
    g: WeightedGraph, field: TruncatedVectorField, v: int, u: int
) -> TruncatedVectorField:
    """Rewrite a chart-1 field of vertex v in its local coordinates at the
    intersection point with neighbor u."""
    pos = g.neighbors(v).index(u)
    if pos == 0:
        return field
    if pos == 1:
        return _to_second_chart(field, -g.weight(v))
    if pos == 2:
        return _recenter(field, Fraction(1))
    c = _cross_value(g)
    return _recenter(field, c)


def edge_rows(s_own: int, s_other: int) -> list[tuple[str, int, int]]:
    """Window monomials at one intersection point, in the chart of the
    designated side (own fiber multiplicity s_own, neighbor s_other)."""
    rows = [
        ("x", a, b)
        for a in range(1, s_other)
        for b in range(0, s_own)
    ]
    rows += [
        ("y", a, b)
        for a in range(0, s_other)
        for b in range(1, s_own)
    ]
    return rows


def restrict_to_edge(
    g: WeightedGraph,
    field: TruncatedVectorField,
    from_vertex: int,
    edge: tuple[int, int],
    s: dict[int, int],
) -> dict[tuple[str, int, int], Fraction]:
    """Coefficients of a section of ``from_vertex`` on the row monomials of
    an incident edge.  Rows live in the chart of the smaller endpoint; the
    other endpoint's germs are carried across by the coordinate swap."""
    a, b = edge
    edge = (a, b) if a < b else (b, a)
    if edge not in g.edges or from_vertex not in edge:
        raise CohomologyError(f"edge {edge} not incident to vertex {from_vertex}")
    i, j = edge
    other = j if from_vertex == i else i
    local = _local_at_neighbor(g, field, from_vertex, other)
    if from_vertex != i:
        local = _swap(local)
    out: dict[tuple[str, int, int], Fraction] = {}
    si, sj = s[i], s[j]
    for (alpha, beta), co in local.coeff_x.items():
        if 1 <= alpha <= sj - 1 and 0 <= beta <= si - 1:
            out[("x", alpha, beta)] = co
    for (alpha, beta), co in local.coeff_y.items():
        if 0 <= alpha <= sj - 1 and 1 <= beta <= si - 1:
            out[("y", alpha, beta)] = co
    return out


@dataclass(frozen=True)
class CechMatrix:
    """Restriction matrix: rows indexed by (edge, window monomial), columns
    by (vertex, basis index); entries exact rationals."""

    row_labels: tuple
    col_labels: tuple
    entries: tuple

    @property
    def nrows(self) -> int:
        return len(self.row_labels)

    @property
    def ncols(self) -> int:
        return len(self.col_labels)

    def rank(self) -> int:
        rows = []
        for row in self.entries:
            den = lcm(*(co.denominator for co in row)) if row else 1
            rows.append([int(co * den) for co in row])
        return elim.rank_ff(rows)

    def dump_triplets(self) -> str:
        """Sparse text dump, one ``row col numerator/denominator`` per line."""
        lines = []
        for r, row in enumerate(self.entries):
            for c, co in enumerate(row):
                if co:
                    lines.append(f"{r} {c} {co.numerator}/{co.denominator}")
        return "\n".join(lines) + ("\n" if lines else "")


def expected_row_count(g: WeightedGraph, s: dict[int, int]) -> int:
    return sum(
        (s[j] - 1) * s[i] + s[j] * (s[i] - 1) for i, j in g.edges
    )


def cech_matrix(
    g: WeightedGraph, s: dict[int, int], order: str = "default"
) -> CechMatrix:
    """Assemble the full restriction matrix for the curve of multiplicity s.

    ``order="alternate"`` reverses the block orders (a determinism probe:
    the rank must not depend on assembly order).
    """
    _require_multiplicities(g, s)
    edges = list(g.edges)
    sections = [
        (v, k, f)
        for v in g.vertices
        for k, f in enumerate(section_basis(g, v, s))
    ]
    if order == "alternate":
        edges.reverse()
        sections.reverse()
    elif order != "default":
        raise ValueError(f"unknown assembly order {order!r}")

    row_labels = []
    row_index = {}
    for e in edges:
        i, j = e
        block = edge_rows(s[i], s[j])
        if order == "alternate":
            block = block[::-1]
        for mono in block:
            row_index[(e, mono)] = len(row_labels)
            row_labels.append((e, mono))

    col_labels = []
    cols = []
    zero = Fraction(0)
    for v, k, f in sections:
        col = [zero] * len(row_labels)
        for e in edges:
            if v in e:
                for mono, co in restrict_to_edge(g, f, v, e, s).items():
                    col[row_index[(e, mono)]] = co
        col_labels.append((v, k))
        cols.append(col)

    entries = tuple(
        tuple(cols[c][r] for c in range(len(cols)))
        for r in range(len(row_labels))
    )
    return CechMatrix(tuple(row_labels), tuple(col_labels), entries)


def component_h1(g: WeightedGraph) -> int:
    """Cohomology carried by the chart neighbourhoods themselves.

    The fiber-order-0 tangent layer of a valency-t component is O(2-t) on
    the projective line, so only a valency-4 vertex contributes (h^1 of
    O(-2) is 1: the modulus of its four marked points).  All other layers
    have degree >= 0.  The intersection-point matrix cannot see this class,
    so it enters h^1 as a separate summand.
    """
    return sum(1 for v in g.vertices if g.valency(v) == 4)


def h1_of_cycle(g: WeightedGraph, s: dict[int, int]) -> int:
    """Obstruction dimension of the curve with multiplicities s: window
    rows minus restriction rank, plus the component term."""
    m = cech_matrix(g, s)
    h1 = m.nrows - m.rank() + component_h1(g)
    assert h1 >= 0
    return h1


def h1_log(
    g: WeightedGraph,
    max_multiplier: int = 8,
    return_trace: bool = False,
):
    """Stabilized h^1: the common value of h1_of_cycle along multiples of the
    smallest ample cycle, maximal over all analytic structures on the graph.

    Starts at twice the ample cycle and accepts the first value attained at
    two consecutive multipliers; raises StabilizationError at the cap.
    """
    if max_multiplier < 3:
        raise ValueError("max_multiplier must be >= 3")
    s0 = ample_cycle(g)
    trace = []
    prev = None
    for m in range(2, max_multiplier + 1):
        val = h1_of_cycle(g, {v: m * s0[v] for v in s0})
        trace.append((m, val))
        if val == prev:
            return (val, trace) if return_trace else val
        prev = val
    raise StabilizationError(
        f"h^1 did not stabilize up to multiplier {max_multiplier}: {trace}"
    )
