"""Directed acyclic graphs, CPT networks, d-separation and sampling."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .data import Dataset


class CycleError(ValueError):
    """The graph contains a directed cycle."""


@dataclass(frozen=True)
class Dag:
    """Directed acyclic graph over named variables.

    ``parents[i]`` is the set of parent indexes of variable ``i``.
    Acyclicity is checked at construction.
    """

    names: tuple[str, ...]
    parents: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.names) != len(self.parents):
            raise ValueError("names and parents must align")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        n = len(self.names)
        for i, ps in enumerate(self.parents):
            if i in ps or any(not 0 <= p < n for p in ps):
                raise ValueError(f"bad parent set for variable {self.names[i]!r}")
        topo_order(self)  # raises CycleError on a cycle

    @classmethod
    def from_edges(cls, names: Iterable[str], edges: Iterable[tuple[str, str]]) -> "Dag":
        names = tuple(names)
        index = {nm: i for i, nm in enumerate(names)}
        parents = [set() for _ in names]
        for src, dst in edges:
            parents[index[dst]].add(index[src])
        return cls(names, tuple(frozenset(p) for p in parents))

    @property
    def n_vars(self) -> int:
        return len(self.names)

    @cached_property
    def children(self) -> tuple[frozenset[int], ...]:
        ch = [set() for _ in self.names]
        for i, ps in enumerate(self.parents):
            for p in ps:
                ch[p].add(i)
        return tuple(frozenset(c) for c in ch)

    @property
    def n_edges(self) -> int:
        return sum(len(p) for p in self.parents)

    def edges(self) -> list[tuple[int, int]]:
        return [(p, i) for i in range(self.n_vars) for p in sorted(self.parents[i])]

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def descendants(self, v: int) -> frozenset[int]:
        seen: set[int] = set()
        stack = list(self.children[v])
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(self.children[u])
        return frozenset(seen)


def topo_order(dag: Dag) -> list[int]:
    """Topological order by Kahn's algorithm, lowest index first among
    ready variables, so the order is unique and stable."""
    n = len(dag.parents)
    indeg = [len(p) for p in dag.parents]
    children = [[] for _ in range(n)]
    for i, ps in enumerate(dag.parents):
        for p in ps:
            children[p].append(i)
    ready = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for c in children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(ready, c)
    if len(order) != n:
        stuck = [dag.names[i] for i in range(n) if indeg[i] > 0]
        raise CycleError(f"directed cycle through {', '.join(sorted(stuck))}")
    return order


def d_separated(dag: Dag, x: int, y: int, z: Iterable[int] = ()) -> bool:
    """True when x and y are d-separated by z.

    Linear-time ball-passing reachability: a trail is extended through a
    non-collider only when the node is outside z, and through a collider
    only when the node or one of its descendants is in z.
    """
    z = frozenset(z)
    if x == y or x in z or y in z:
        raise ValueError("x, y and z must be distinct")
    # z together with its ancestors: exactly the colliders that are open.
    open_colliders = set()
    stack = list(z)
    while stack:
        v = stack.pop()
        if v not in open_colliders:
            open_colliders.add(v)
            stack.extend(dag.parents[v])
    # States are (node, direction): "up" means the trail leaves v toward
    # its parents' side (arrived from a child or at the start), "down"
    # means the trail arrived from a parent.
    seen = set()
    stack = [(x, True)]
    while stack:
        v, up = stack.pop()
        if (v, up) in seen:
            continue
        seen.add((v, up))
        if v == y:
            return False
        if up and v not in z:
            for p in dag.parents[v]:
                stack.append((p, True))
            for c in dag.children[v]:
                stack.append((c, False))
        elif not up:
            if v not in z:
                for c in dag.children[v]:
                    stack.append((c, False))
            if v in open_colliders:
                for p in dag.parents[v]:
                    stack.append((p, True))
    return True


class TrueMb(NamedTuple):
    pc: frozenset[int]
    spouses: frozenset[int]
    mb: frozenset[int]


def true_mb(dag: Dag, t: int) -> TrueMb:
    """Parents-and-children, spouses and Markov blanket of t in ``dag``."""
    pc = dag.parents[t] | dag.children[t]
    spouses = set()
    for c in dag.children[t]:
        spouses |= dag.parents[c]
    spouses -= pc | {t}
    return TrueMb(frozenset(pc), frozenset(spouses), frozenset(pc | spouses))


@dataclass(frozen=True)
class CptNetwork:
    """DAG plus one conditional probability table per variable.

    ``cpts[i]`` has shape (number of parent configurations, r_i); rows
    follow C-order (ravel) over the parent values taken in ascending
    parent index. Every row sums to 1.
    """

    dag: Dag
    cardinalities: tuple[int, ...]
    cpts: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        if len(self.cardinalities) != self.dag.n_vars or len(self.cpts) != self.dag.n_vars:
            raise ValueError("cardinalities and cpts must cover every variable")
        if any(r < 2 for r in self.cardinalities):
            raise ValueError("every cardinality must be at least 2")
        for i, cpt in enumerate(self.cpts):
            rows = 1
            for p in sorted(self.dag.parents[i]):
                rows *= self.cardinalities[p]
            if cpt.shape != (rows, self.cardinalities[i]):
                raise ValueError(f"cpt shape mismatch for {self.dag.names[i]!r}")
            if (cpt < 0).any() or not np.allclose(cpt.sum(axis=1), 1.0, atol=1e-9):
                raise ValueError(f"cpt rows for {self.dag.names[i]!r} must sum to 1")

    @property
    def names(self) -> tuple[str, ...]:
        return self.dag.names


def sample(net: CptNetwork, n: int, seed: int) -> Dataset:
    """Draw ``n`` rows by forward (ancestral) sampling.

    Determinism contract: the generator is NumPy's PCG64 seeded with
    ``seed``; variables consume draws in topological order (ties broken
    by lowest index) and, within a variable, in row order. Identical
    (net, n, seed) therefore always produce the identical dataset, and
    cardinalities are copied from the network, never re-inferred.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = np.random.Generator(np.random.PCG64(seed))
    order = topo_order(net.dag)
    columns = np.zeros((net.dag.n_vars, n), dtype=np.int32)
    for v in order:
        u = rng.random(n)
        ps = sorted(net.dag.parents[v])
        if ps:
            dims = tuple(net.cardinalities[p] for p in ps)
            rows = np.ravel_multi_index(columns[ps].astype(np.int64), dims)
            probs = net.cpts[v][rows]
        else:
            probs = np.broadcast_to(net.cpts[v][0], (n, net.cardinalities[v]))
        cdf = np.cumsum(probs, axis=1)
        codes = (u[:, None] > cdf).sum(axis=1)
        columns[v] = np.minimum(codes, net.cardinalities[v] - 1)
    return Dataset(net.dag.names, tuple(net.cardinalities), columns)
