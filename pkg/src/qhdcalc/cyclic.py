"""Continued fractions with all terms >= 2 and the linear chains they encode.

A chain of weights (-a_1, ..., -a_k) evaluates to the fraction
a_1 - 1/(a_2 - 1/(...)); the chains whose fraction is p^2/(pq-1) are exactly
the linear graphs carrying a rational-homology-disk smoothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .graph import WeightedGraph, nodes


@dataclass(frozen=True)
class HJExpansion:
    terms: tuple[int, ...]
    value: Fraction

    def __post_init__(self):
        if not self.terms or any(t < 2 for t in self.terms):
            raise ValueError("expansion terms must all be >= 2")


@dataclass(frozen=True)
class QhdLinearWitness:
    p: int
    q: int

    def __post_init__(self):
        if not (self.p > self.q > 0 and gcd(self.p, self.q) == 1):
            raise ValueError(f"need coprime p > q > 0, got ({self.p},{self.q})")


def hj_expand(p: int, q: int) -> HJExpansion:
    """The unique expansion of p/q with every term >= 2 (p > q >= 1 coprime)."""
    if not (p > q >= 1):
        raise ValueError(f"need p > q >= 1, got ({p},{q})")
    if gcd(p, q) != 1:
        raise ValueError(f"need gcd(p,q)=1, got ({p},{q})")
    value = Fraction(p, q)
    terms = []
    while q:
        a = -(-p // q)  # ceiling
        terms.append(a)
        p, q = q, a * q - p
    return HJExpansion(tuple(terms), value)


def evaluate_terms(terms) -> Fraction:
    """Evaluate a_1 - 1/(a_2 - 1/(...)) to an exact fraction."""
    val = Fraction(terms[-1])
    for a in reversed(terms[:-1]):
        val = a - 1 / val
    return val


def chain_graph(e: HJExpansion) -> WeightedGraph:
    weights = {i + 1: -t for i, t in enumerate(e.terms)}
    edges = [(i + 1, i + 2) for i in range(len(e.terms) - 1)]
    return WeightedGraph(weights, edges)


def chain_terms(g: WeightedGraph) -> list[int]:
    """Weights of a linear graph read end to end (one of two orientations)."""
    if nodes(g):
        raise ValueError("graph is not linear")
    vs = g.vertices
    if len(vs) == 1:
        return [-g.weight(vs[0])]
    start = min(v for v in vs if g.valency(v) == 1)
    order = [start]
    prev = None
    while len(order) < len(vs):
        nxt = [u for u in g.neighbors(order[-1]) if u != prev]
        prev = order[-1]
        order.append(nxt[0])
    return [-g.weight(v) for v in order]


def recognize_qhd_linear(g: WeightedGraph) -> QhdLinearWitness | None:
    """Recover (p, q) if the chain is the resolution of 1/p^2(1, pq-1).

    The fraction of the chain must be a perfect square over pq-1.  The two
    orientations of one chain witness q and p-q; the lexicographically
    smaller pair is returned.
    """
    terms = chain_terms(g)
    if any(t < 2 for t in terms):
        raise ValueError("chain weights must all be <= -2")
    found = []
    for cand in (terms, terms[::-1]):
        frac = evaluate_terms(cand)
        big_p, big_q = frac.numerator, frac.denominator
        p = isqrt(big_p)
        if p * p != big_p or big_q == 0:
            continue
        if (big_q + 1) % p:
            continue
        q = (big_q + 1) // p
        if 0 < q < p and gcd(p, q) == 1:
            found.append((p, q))
    if not found:
        return None
    p, q = min(found)
    return QhdLinearWitness(p, q)
