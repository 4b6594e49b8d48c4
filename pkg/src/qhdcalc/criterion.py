"""The smoothing-dimension criterion and the census that sweeps it.

A rational-homology-disk smoothing component has dimension
h^1 + sum(d_i - 3); nonpositive means no such smoothing exists.  For the
graphs built by the blow-up calculus the bound can be evaluated two ways:

* bookkeeping mode walks the construction history: the matched two-node
  base pattern fixes epsilon, every later vertex blow-up raises the h^1
  bound by one and lowers the weight sum by one, so the total lands on 0;
* cohomology mode computes the stabilized h^1 on the plumbing curve.

The census runs the three seed families to a depth, evaluates every class,
and reports anomalies loudly; an empty anomaly section is the machine-checked
form of the two-node nonexistence statement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .blowup import (
    ConstructionHistory,
    SEED_TYPES,
    enumerate_classes,
    replay,
    replay_states,
)
from .cohomology import StabilizationError, h1_log
from .cyclic import recognize_qhd_linear
from .graph import (
    WeightedGraph,
    determinant,
    intersection_matrix,
    is_negative_definite,
    nodes,
)
from .shapes import LemmaMatch, classify_shape, epsilon_of, match_lemma

STAGE_PATTERN = "pattern"  # the history ends on a matched two-node graph
STAGE_EXTENDED = "extended"  # blow-ups continue past the matched stage

VERDICT_NO_QHD = "no_qhd_smoothing"
VERDICT_INCONCLUSIVE = "inconclusive"

MODE_BOOKKEEPING = "bookkeeping"
MODE_COHOMOLOGY = "cohomology"

# the star-shaped families with a valency-4 node, handled by the separate
# weighted-homogeneous classification: (leaf triple; node weight, cross ratio)
VALENCY4_STAR_FAMILIES = (
    ((3, 3, 3), 4, "anharmonic"),
    ((2, 4, 4), 3, "harmonic"),
    ((2, 3, 6), 2, "9"),
)


class AnnotationError(ValueError):
    pass


class PatternMissError(AnnotationError):
    """The first two-node graph of a history fits no base pattern.

    ``out_of_scope`` marks the one legitimate cause: a valency-4 vertex of
    weight -2, which no resolution graph of a rational surface singularity
    can carry.  Anything else is a genuine anomaly.
    """

    def __init__(self, msg: str, graph: WeightedGraph, out_of_scope: bool):
        super().__init__(msg)
        self.graph = graph
        self.out_of_scope = out_of_scope


@dataclass(frozen=True)
class LedgerAnnotation:
    epsilon: int
    m: int
    match: LemmaMatch
    stage: str
    pattern_index: int  # replay index of the last matched state


@dataclass(frozen=True)
class QhdVerdict:
    mode: str
    sum_d3: int
    h1_bound: int
    dim_bound: int
    verdict: str
    epsilon: int | None = None
    m: int | None = None
    stage: str | None = None

    def __post_init__(self):
        assert self.dim_bound == self.h1_bound + self.sum_d3
        assert (self.verdict == VERDICT_NO_QHD) == (self.dim_bound <= 0)


def sum_d_minus_3(g: WeightedGraph) -> int:
    """sum of (d_i - 3) over the vertices, weights being -d_i."""
    return sum(-w - 3 for w in g.weights.values())


def blowup_h1_step(bound: int, op) -> int:
    """How the h^1 upper bound moves under one blow-up: +1 for a vertex
    blow-up (smooth center), unchanged for an edge blow-up (node center)."""
    return bound + 1 if op.kind == "B1" else bound


def annotate(
    h: ConstructionHistory, cross_ratio: Fraction = Fraction(-1)
) -> LedgerAnnotation:
    """Locate the two-node base stage of a history and read off epsilon and
    the number m of later vertex blow-ups.

    The scan asserts what the calculus guarantees instead of assuming it:
    node counts never drop, the first two-node graph matches a base pattern,
    matches form one contiguous stretch, and the op leaving the matched
    stretch is a vertex blow-up.
    """
    states = replay_states(h, cross_ratio)
    counts = [len(nodes(st)) for st in states]
    for i in range(1, len(counts)):
        if counts[i] < counts[i - 1]:
            raise AnnotationError(f"node count dropped at op {i - 1}")
    first = next((i for i, c in enumerate(counts) if c >= 2), None)
    if first is None:
        raise AnnotationError("history never reaches two nodes")
    matches = {
        i: match_lemma(states[i]) if counts[i] == 2 else LemmaMatch(None)
        for i in range(first, len(states))
    }
    if not matches[first]:
        g1 = states[first]
        oos = any(
            g1.valency(v) == 4 and g1.weight(v) == -2 for v in g1.vertices
        )
        raise PatternMissError(
            "first two-node graph matches no base pattern"
            + (" (valency-4 vertex of weight -2)" if oos else ""),
            g1,
            oos,
        )
    last = max(i for i, mt in matches.items() if mt)
    if any(not matches[i] for i in range(first, last + 1)):
        raise AnnotationError("pattern matches are not contiguous")
    eps = epsilon_of(matches[last])
    b1_total = sum(1 for op in h.ops if op.kind == "B1")
    if last == len(states) - 1:
        if b1_total != 1 + eps:
            raise AnnotationError(
                f"vertex blow-up count {b1_total} != {1 + eps} at base stage"
            )
        return LedgerAnnotation(eps, 0, matches[last], STAGE_PATTERN, last)
    if h.ops[last].kind != "B1":
        raise AnnotationError(
            "the op leaving the matched stage is not a vertex blow-up"
        )
    m = sum(1 for op in h.ops[last + 1 :] if op.kind == "B1")
    if b1_total != 2 + eps + m:
        raise AnnotationError(
            f"vertex blow-up count {b1_total} != {2 + eps + m} past the base stage"
        )
    return LedgerAnnotation(eps, m, matches[last], STAGE_EXTENDED, last)


def ledger_check(
    h: ConstructionHistory, cross_ratio: Fraction = Fraction(-1)
) -> bool:
    """Verify sum(d_i - 3) = -epsilon - 1 - m on the minimal graph, the
    weight sum computed independently of the history walk."""
    ann = annotate(h, cross_ratio)
    if ann.stage != STAGE_EXTENDED:
        raise ValueError("ledger identity applies past the base stage only")
    g = replay(h, cross_ratio)
    if not h.modified:
        g = replay(
            ConstructionHistory(h.seed, h.ops, True), cross_ratio
        )
    return sum_d_minus_3(g) == -ann.epsilon - 1 - ann.m


def dimension_bound(
    h: ConstructionHistory,
    mode: str = MODE_BOOKKEEPING,
    cross_ratio: Fraction = Fraction(-1),
    max_multiplier: int = 8,
) -> QhdVerdict:
    """Evaluate the smoothing-dimension bound for a history's minimal graph."""
    if mode not in (MODE_BOOKKEEPING, MODE_COHOMOLOGY):
        raise ValueError(f"unknown mode {mode!r}")
    if not h.modified:
        h = ConstructionHistory(h.seed, h.ops, True)
    ann = annotate(h, cross_ratio)
    g = replay(h, cross_ratio)
    sd3 = sum_d_minus_3(g)
    if mode == MODE_BOOKKEEPING:
        if ann.stage == STAGE_PATTERN:
            h1b = ann.epsilon
        else:
            h1b = ann.epsilon + ann.m + 1
    else:
        h1b = h1_log(g, max_multiplier)
    dim = h1b + sd3
    verdict = VERDICT_NO_QHD if dim <= 0 else VERDICT_INCONCLUSIVE
    return QhdVerdict(mode, sd3, h1b, dim, verdict, ann.epsilon, ann.m, ann.stage)


@dataclass(frozen=True)
class RunConfig:
    max_ops: int = 6
    max_multiplier: int = 8
    cross_ratio_default: Fraction = Fraction(-1)
    seeds: tuple = SEED_TYPES
    cohomology: bool = False  # also run the slow mode on every eligible class

    def __post_init__(self):
        if self.max_ops < 0:
            raise ValueError("max_ops must be >= 0")
        if self.max_multiplier < 3:
            raise ValueError("max_multiplier must be >= 3")
        if self.cross_ratio_default in (0, 1):
            raise ValueError("cross_ratio_default must avoid 0 and 1")
        for s in self.seeds:
            if s not in SEED_TYPES:
                raise ValueError(f"unknown seed type {s!r}")


@dataclass
class CensusReport:
    records: list
    anomalies: list
    summary: dict

    def to_jsonl(self) -> str:
        lines = [json.dumps(rec, sort_keys=False) for rec in self.records]
        lines.append(json.dumps({"summary": self.summary}, sort_keys=False))
        return "\n".join(lines) + "\n"


def _record_for_class(cls, cfg: RunConfig) -> dict:
    g = cls.graph
    mat = intersection_matrix(g)
    shape = classify_shape(g)
    rec = {
        "type": cls.witness.seed,
        "key": cls.key,
        "n": len(g),
        "weights": sorted(g.weights.values(), reverse=True),
        "det": determinant(mat),
        "negdef": is_negative_definite(mat),
        "shape": shape.tag,
        "node_count": len(nodes(g)),
        "sum_d3": sum_d_minus_3(g),
        "witness": cls.witness.to_text(),
        "history_count": len(cls.histories),
        "status": "ok",
    }
    if shape.tag == "star":
        rec["node_valency"] = shape.node_valency
        rec["note"] = (
            "star-shaped: outside the two-node criterion; see the "
            "weighted-homogeneous classification"
        )
        return rec
    if shape.tag == "linear":
        w = recognize_qhd_linear(g)
        rec["qhd_linear"] = [w.p, w.q] if w else None
        return rec

    # two or more nodes: evaluate the criterion on every retained history
    verdicts = []
    for hist in cls.histories:
        try:
            v = dimension_bound(
                hist, MODE_BOOKKEEPING, cfg.cross_ratio_default
            )
        except PatternMissError as exc:
            if exc.out_of_scope:
                rec["status"] = "out_of_scope"
                rec["reason"] = (
                    "valency-4 vertex of weight -2: no rational surface "
                    "singularity has this resolution graph"
                )
                return rec
            rec["status"] = "anomaly"
            rec["reason"] = str(exc)
            return rec
        except AnnotationError as exc:
            rec["status"] = "anomaly"
            rec["reason"] = str(exc)
            return rec
        if v.stage == STAGE_EXTENDED and not ledger_check(
            hist, cfg.cross_ratio_default
        ):
            rec["status"] = "anomaly"
            rec["reason"] = f"ledger identity failed for {hist.to_text()}"
            return rec
        verdicts.append(v)
    dims = sorted({v.dim_bound for v in verdicts})
    if len(dims) != 1:
        rec["status"] = "anomaly"
        rec["reason"] = f"histories disagree on the bound: {dims}"
        return rec
    v = verdicts[0]
    rec.update(
        epsilon=v.epsilon,
        m=v.m,
        stage=v.stage,
        h1_bound=v.h1_bound,
        dim_bound=v.dim_bound,
        verdict=v.verdict,
    )
    if v.verdict != VERDICT_NO_QHD:
        rec["status"] = "anomaly"
        rec["reason"] = f"bookkeeping bound is positive: {v.dim_bound}"
        return rec
    if cfg.cohomology:
        try:
            vc = dimension_bound(
                cls.witness,
                MODE_COHOMOLOGY,
                cfg.cross_ratio_default,
                cfg.max_multiplier,
            )
        except StabilizationError as exc:
            rec["status"] = "anomaly"
            rec["reason"] = str(exc)
            return rec
        rec["h1_log"] = vc.h1_bound
        rec["dim_cohomology"] = vc.dim_bound
        if vc.verdict != v.verdict:
            rec["status"] = "anomaly"
            rec["reason"] = "modes disagree on the verdict"
    return rec


def run_census(cfg: RunConfig) -> CensusReport:
    """Enumerate, classify and evaluate everything; collect anomalies.

    One bad record never aborts the run: it lands in the anomaly section,
    which acceptance requires to be empty.
    """
    records = []
    for seed in cfg.seeds:
        for cls in enumerate_classes(seed, cfg.max_ops, cfg.cross_ratio_default):
            try:
                rec = _record_for_class(cls, cfg)
            except Exception as exc:  # never abort the census
                rec = {
                    "type": seed,
                    "key": cls.key,
                    "status": "anomaly",
                    "reason": f"unexpected {type(exc).__name__}: {exc}",
                }
            records.append(rec)
    records.sort(key=lambda r: (r["type"], r["key"]))
    anomalies = [r for r in records if r["status"] == "anomaly"]
    shape_counts: dict[str, int] = {}
    dim_counts: dict[str, int] = {}
    for r in records:
        shape_counts[r.get("shape", "?")] = shape_counts.get(r.get("shape", "?"), 0) + 1
        if "dim_bound" in r:
            key = str(r["dim_bound"])
            dim_counts[key] = dim_counts.get(key, 0) + 1
    summary = {
        "classes": len(records),
        "shapes": dict(sorted(shape_counts.items())),
        "dim_bounds": dict(sorted(dim_counts.items())),
        "out_of_scope": sum(1 for r in records if r["status"] == "out_of_scope"),
        "anomaly_count": len(anomalies),
        "anomalies": [
            {"type": r["type"], "key": r["key"], "reason": r.get("reason", "")}
            for r in anomalies
        ],
    }
    return CensusReport(records, anomalies, summary)
