import numpy as np
import pytest

from localcausal import (
    CptNetwork,
    CycleError,
    Dag,
    d_separated,
    sample,
    topo_order,
    true_mb,
)

from oracles import d_separated_paths, random_dag, random_network


def diamond():
    # a -> b, a -> c, b -> d, c -> d
    return Dag.from_edges("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])


def test_dag_construction_and_views():
    dag = diamond()
    assert dag.n_vars == 4
    assert dag.n_edges == 4
    assert dag.parents[3] == frozenset({1, 2})
    assert dag.children[0] == frozenset({1, 2})
    assert dag.edges() == [(0, 1), (0, 2), (1, 3), (2, 3)]
    assert dag.index_of("d") == 3
    with pytest.raises(KeyError):
        dag.index_of("zz")
    assert dag.descendants(0) == frozenset({1, 2, 3})
    assert dag.descendants(3) == frozenset()


def test_dag_rejects_bad_input():
    with pytest.raises(ValueError, match="duplicate"):
        Dag(("a", "a"), (frozenset(), frozenset()))
    with pytest.raises(ValueError, match="align"):
        Dag(("a", "b"), (frozenset(),))
    with pytest.raises(ValueError, match="bad parent set"):
        Dag(("a",), (frozenset({0}),))
    with pytest.raises(ValueError, match="bad parent set"):
        Dag(("a", "b"), (frozenset({5}), frozenset()))


def test_dag_rejects_cycles():
    with pytest.raises(CycleError, match="directed cycle through a, b"):
        Dag(("a", "b"), (frozenset({1}), frozenset({0})))


def test_topo_order_is_stable():
    dag = diamond()
    assert topo_order(dag) == [0, 1, 2, 3]
    # among simultaneously ready variables the lowest index goes first
    flat = Dag(("x", "y", "z"), (frozenset(), frozenset(), frozenset()))
    assert topo_order(flat) == [0, 1, 2]


def test_d_separation_chain_fork_collider():
    chain = Dag.from_edges("abc", [("a", "b"), ("b", "c")])
    assert not d_separated(chain, 0, 2)
    assert d_separated(chain, 0, 2, (1,))

    fork = Dag.from_edges("abc", [("b", "a"), ("b", "c")])
    assert not d_separated(fork, 0, 2)
    assert d_separated(fork, 0, 2, (1,))

    collider = Dag.from_edges("abc", [("a", "b"), ("c", "b")])
    assert d_separated(collider, 0, 2)
    assert not d_separated(collider, 0, 2, (1,))


def test_d_separation_opens_collider_via_descendant():
    # a -> b <- c, b -> d: conditioning on d opens the collider at b
    dag = Dag.from_edges("abcd", [("a", "b"), ("c", "b"), ("b", "d")])
    assert d_separated(dag, 0, 2)
    assert not d_separated(dag, 0, 2, (3,))


def test_d_separation_rejects_overlap():
    dag = diamond()
    with pytest.raises(ValueError):
        d_separated(dag, 0, 0)
    with pytest.raises(ValueError):
        d_separated(dag, 0, 1, (0,))


def test_d_separation_trace_facts(trace_net):
    dag = trace_net.dag
    ix = dag.index_of
    t, c, d, e, a, j, k, i_, l_ = map(ix, "TCDEAJKIL")
    assert not d_separated(dag, c, t)
    assert d_separated(dag, c, t, (e,))
    assert not d_separated(dag, c, t, (e, a))
    assert d_separated(dag, d, t)
    assert not d_separated(dag, d, t, (k,))
    assert d_separated(dag, e, j)
    assert not d_separated(dag, e, j, (t,))
    assert d_separated(dag, l_, e, (t,))
    assert d_separated(dag, i_, t, (k, d))
    assert not d_separated(dag, i_, t, (k,))


def test_d_separation_matches_path_enumeration():
    rng = np.random.Generator(np.random.PCG64(21))
    for _ in range(200):
        dag = random_dag(rng)
        n = dag.n_vars
        for _ in range(20):
            x, y = rng.choice(n, size=2, replace=False)
            pool = [v for v in range(n) if v not in (x, y)]
            size = int(rng.integers(0, min(3, len(pool)) + 1))
            z = tuple(int(v) for v in rng.choice(pool, size=size, replace=False))
            got = d_separated(dag, int(x), int(y), z)
            want = d_separated_paths(dag, int(x), int(y), z)
            assert got == want


def test_true_mb_trace(trace_net):
    dag = trace_net.dag
    names = dag.names
    mb = true_mb(dag, dag.index_of("T"))
    assert {names[i] for i in mb.pc} == {"A", "B", "E", "J", "K", "L"}
    assert {names[i] for i in mb.spouses} == {"C", "D"}
    assert {names[i] for i in mb.mb} == {"A", "B", "C", "D", "E", "J", "K", "L"}


def test_true_mb_collider_chain(collider_chain_net):
    dag = collider_chain_net.dag
    names = dag.names
    mb_t = true_mb(dag, dag.index_of("T"))
    assert {names[i] for i in mb_t.mb} == {"Y", "Z"}
    assert mb_t.spouses == frozenset()
    mb_y = true_mb(dag, dag.index_of("Y"))
    assert {names[i] for i in mb_y.pc} == {"F", "X", "T"}
    assert mb_y.spouses == frozenset()


def test_cpt_network_validation():
    dag = Dag.from_edges("ab", [("a", "b")])
    good_a = np.array([[0.3, 0.7]])
    good_b = np.array([[0.2, 0.8], [0.6, 0.4]])
    CptNetwork(dag, (2, 2), (good_a, good_b))
    with pytest.raises(ValueError, match="shape"):
        CptNetwork(dag, (2, 2), (good_a, good_a))
    with pytest.raises(ValueError, match="sum to 1"):
        CptNetwork(dag, (2, 2), (np.array([[0.5, 0.6]]), good_b))
    with pytest.raises(ValueError, match="cover every"):
        CptNetwork(dag, (2,), (good_a, good_b))


def test_sample_deterministic(trace_net):
    a = sample(trace_net, 100, seed=42)
    b = sample(trace_net, 100, seed=42)
    c = sample(trace_net, 100, seed=43)
    assert np.array_equal(a.columns, b.columns)
    assert not np.array_equal(a.columns, c.columns)
    assert a.cardinalities == trace_net.cardinalities
    assert a.names == trace_net.names


def test_sample_empty_and_negative(trace_net):
    empty = sample(trace_net, 0, seed=1)
    assert empty.n_rows == 0
    with pytest.raises(ValueError):
        sample(trace_net, -1, seed=1)


def test_sample_matches_cpts_empirically(trace_net):
    data = sample(trace_net, 40000, seed=7)
    dag = trace_net.dag
    c = dag.index_of("C")
    e = dag.index_of("E")
    # root marginal
    p_c1 = data.column(c).mean()
    assert p_c1 == pytest.approx(0.45, abs=0.01)
    # conditional row: P(E=1 | C=0) = 0.25, P(E=1 | C=1) = 0.75
    mask0 = data.column(c) == 0
    assert data.column(e)[mask0].mean() == pytest.approx(0.25, abs=0.015)
    assert data.column(e)[~mask0].mean() == pytest.approx(0.75, abs=0.015)


def test_sample_random_networks_round_trip():
    rng = np.random.Generator(np.random.PCG64(3))
    for _ in range(5):
        dag = random_dag(rng)
        net = random_network(rng, dag)
        data = sample(net, 50, seed=2)
        assert data.n_vars == dag.n_vars
        assert data.n_rows == 50
        for v in range(dag.n_vars):
            assert data.column(v).max() < net.cardinalities[v]
