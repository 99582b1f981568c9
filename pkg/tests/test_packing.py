import itertools
import random

from nonzero_cycles import groups
from nonzero_cycles.cycles import enumerate_cycles
from nonzero_cycles.graphs import Edge, LabeledGraph
from nonzero_cycles.packing import (
    a_path_pack_and_cover,
    enumerate_nonzero_a_paths,
    pack_and_cover,
    verify_packing,
    verify_transversal,
)

ZZ = groups.direct_sum(groups.cyclic(3), groups.cyclic(3))
Z3 = groups.cyclic(3)


def random_graph(desc, rng, n_max=7, m_max=11):
    n = rng.randint(2, n_max)
    m = rng.randint(1, m_max)
    edges = [
        Edge(i, rng.randrange(n), rng.randrange(n), groups.random_element(desc, rng))
        for i in range(m)
    ]
    return LabeledGraph(desc, range(n), edges)


def brute_force_nu(graph, max_use):
    cycles = [c for c in enumerate_cycles(graph) if c.doubly_nonzero]
    best = 0
    for k in range(len(cycles), 0, -1):
        for combo in itertools.combinations(cycles, k):
            usage = {}
            ok = True
            for c in combo:
                for v in c.rep.vertex_set():
                    usage[v] = usage.get(v, 0) + 1
                    if usage[v] > max_use:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return k
    return best


def brute_force_tau(graph):
    cycles = [c.rep.vertex_set() for c in enumerate_cycles(graph) if c.doubly_nonzero]
    if not cycles:
        return 0
    universe = sorted(set().union(*cycles))
    for k in range(0, len(universe) + 1):
        for combo in itertools.combinations(universe, k):
            s = set(combo)
            if all(s & c for c in cycles):
                return k
    return len(universe)


def test_pack_and_cover_matches_brute_force():
    rng = random.Random(21)
    done = 0
    while done < 60:
        g = random_graph(ZZ, rng)
        cycles = [c for c in enumerate_cycles(g) if c.doubly_nonzero]
        if len(cycles) > 12:
            continue
        done += 1
        report = pack_and_cover(g)
        assert report.nu == brute_force_nu(g, 1)
        assert report.nu_half == brute_force_nu(g, 2)
        assert report.tau == brute_force_tau(g)
        assert verify_packing(g, report.packing, max_use=1)
        assert verify_packing(g, report.half_packing, max_use=2)
        assert verify_transversal(g, report.transversal)
        # structural relations
        assert report.nu <= report.nu_half
        assert report.nu <= report.tau


def test_pack_and_cover_empty():
    g = LabeledGraph(ZZ, [0, 1], [Edge(0, 0, 1, groups.identity(ZZ))])
    report = pack_and_cover(g)
    assert (report.nu, report.nu_half, report.tau) == (0, 0, 0)


def test_pack_deterministic():
    rng = random.Random(5)
    g = random_graph(ZZ, rng)
    a = pack_and_cover(g)
    b = pack_and_cover(g)
    assert a == b


def brute_force_apath_nu(paths):
    best = 0
    for k in range(len(paths), 0, -1):
        for combo in itertools.combinations(paths, k):
            used = set()
            ok = True
            for p in combo:
                vs = set(p.vertices)
                if used & vs:
                    ok = False
                    break
                used |= vs
            if ok:
                return k
    return best


def test_a_paths_enumeration_and_duality():
    rng = random.Random(8)
    done = 0
    while done < 60:
        g = random_graph(Z3, rng, n_max=7, m_max=10)
        terms = sorted(rng.sample(sorted(g.vertices), min(len(g.vertices), rng.randint(2, 4))))
        paths = enumerate_nonzero_a_paths(g, terms)
        if len(paths) > 14:
            continue
        done += 1
        for p in paths:
            assert p.start in terms and p.end in terms and p.start != p.end
            assert not any(v in terms for v in p.vertices[1:-1])
            assert p.is_path()
        report = a_path_pack_and_cover(g, terms)
        assert report.nu == brute_force_apath_nu(paths)
        # min-max duality: covering needs at most twice the packing number
        assert report.duality_ok
        rest = g.without_vertices(report.cover)
        surviving_terms = [t for t in terms if t in rest.vertices]
        assert not enumerate_nonzero_a_paths(rest, surviving_terms)
