"""Accuracy metrics for a learned local structure against a known DAG.

All scores compare the oriented output (parents, children, undecided)
for one target with the true parents and children. Spouses are not
scored; they only serve orientation. Conventions for empty outputs are
pinned here so aggregation never divides by zero.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, fields
from typing import Iterable

from .bnet import Dag


@dataclass(frozen=True)
class LocalScore:
    """Scores for one learned target.

    arr_p: fraction of output members placed in the correct role.
    arr_r: fraction of true parents and children recovered with the
        correct role.
    shd: undirected-but-true + reversed + missing + extra members.
    fdr: fraction of output members that are not true PC members
        (adjacency only; orientation does not matter here).
    """

    arr_p: float
    arr_r: float
    shd: int
    fdr: float
    ci_tests: int = 0
    time_ms: float = 0.0


def score_local(parents: Iterable[int], children: Iterable[int],
                undecided: Iterable[int], truth: Dag, target: int,
                ci_tests: int = 0, time_ms: float = 0.0) -> LocalScore:
    """Score one oriented output against the DAG that generated the data.

    Empty-output conventions: with no output members, arr_p is 1 when
    the true PC set is empty too (nothing to orient, nothing wrong) and
    0 otherwise, and fdr is 0. With an empty true PC set, arr_r is 1.
    """
    p, c, un = set(parents), set(children), set(undecided)
    if (p & c) or (p & un) or (c & un):
        raise ValueError("parents, children and undecided must be disjoint")
    if target in p | c | un:
        raise ValueError("target cannot be in its own output")
    tp = set(truth.parents[target])
    tc = set(truth.children[target])
    true_pc = tp | tc
    out = p | c | un
    o = len(out)

    correct = len(p & tp) + len(c & tc)
    false_adj = len(out - true_pc)
    assert correct + false_adj <= o

    arr_p = (1.0 if not true_pc else 0.0) if o == 0 else correct / o
    arr_r = 1.0 if not true_pc else correct / len(true_pc)
    fdr = 0.0 if o == 0 else false_adj / o
    shd = (len(un & true_pc)          # adjacent but left undirected
           + len(p & tc) + len(c & tp)  # oriented backwards
           + len(true_pc - out)         # missing
           + false_adj)                 # extra
    return LocalScore(arr_p=arr_p, arr_r=arr_r, shd=shd, fdr=fdr,
                      ci_tests=ci_tests, time_ms=time_ms)


def aggregate(scores: Iterable[LocalScore]) -> dict[str, dict[str, float]]:
    """Mean and population standard deviation per score field."""
    scores = list(scores)
    if not scores:
        raise ValueError("nothing to aggregate")
    out: dict[str, dict[str, float]] = {}
    for f in fields(LocalScore):
        vals = [float(getattr(s, f.name)) for s in scores]
        out[f.name] = {"mean": statistics.fmean(vals),
                       "std": statistics.pstdev(vals)}
    return out
