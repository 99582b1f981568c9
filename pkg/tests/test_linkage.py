import itertools
import random

import pytest

from nonzero_cycles.linkage import (
    CROSSING,
    NESTED,
    SERIES,
    LinkPath,
    LinkageError,
    classify_pair,
    extract_pure,
    is_pure,
    linkage_type,
    satisfies_interval_clause,
    satisfies_separation_clause,
    separate_linkages,
)


def lp(l, r):
    return LinkPath(l, r)


def test_classify_pair():
    assert classify_pair(lp(0, 1), lp(2, 3)) == SERIES
    assert classify_pair(lp(0, 3), lp(1, 2)) == NESTED
    assert classify_pair(lp(1, 2), lp(0, 3)) == NESTED
    assert classify_pair(lp(0, 2), lp(1, 3)) == CROSSING
    with pytest.raises(LinkageError):
        classify_pair(lp(0, 1), lp(1, 2))


def test_linkage_type():
    assert linkage_type([lp(0, 1), lp(2, 3), lp(4, 5)]) == SERIES
    assert linkage_type([lp(0, 5), lp(1, 4), lp(2, 3)]) == NESTED
    assert linkage_type([lp(0, 3), lp(1, 4), lp(2, 5)]) == CROSSING
    assert linkage_type([lp(0, 3), lp(1, 2), lp(4, 5)]) is None
    assert is_pure([lp(0, 9)])


def random_linkage(rng, n, spread=1000):
    ends = rng.sample(range(spread), 2 * n)
    rng.shuffle(ends)
    return [lp(min(a, b), max(a, b)) for a, b in zip(ends[::2], ends[1::2])]


def brute_force_pure(paths, t):
    for combo in itertools.combinations(paths, t):
        if linkage_type(combo) is not None:
            return True
    return False


def test_extract_pure_small_exhaustive():
    rng = random.Random(13)
    for t in (1, 2, 3):
        for _ in range(40):
            paths = random_linkage(rng, t**3)
            kind, chosen = extract_pure(paths, t)
            assert len(chosen) == t
            assert linkage_type(chosen) == kind or len(chosen) < 2
            assert all(any(c is p for p in paths) for c in chosen)


def test_extract_pure_matches_brute_force_existence():
    # anything extract_pure returns must be confirmed pure by brute force
    rng = random.Random(14)
    paths = random_linkage(rng, 27)
    kind, chosen = extract_pure(paths, 3)
    assert linkage_type(chosen) == kind
    assert brute_force_pure(paths, 3)


def test_extract_pure_requires_cube():
    with pytest.raises(LinkageError):
        extract_pure([lp(0, 1)] , 2)


def test_extract_pure_prefers_series_then_crossing():
    # three disjoint intervals exist: series is returned
    paths = [lp(0, 1), lp(2, 3), lp(4, 5), lp(6, 7)] + [lp(8 + i, 100 - i) for i in range(4)]
    kind, chosen = extract_pure(paths, 2)
    assert kind == SERIES
    # force overlap: all intervals share a point, increasing rights available
    paths = [lp(i, 50 + i) for i in range(8)]
    kind, chosen = extract_pure(paths, 2)
    assert kind == CROSSING


def pure_family(rng, kind, n, lo, hi):
    slots = sorted(rng.sample(range(lo, hi), 2 * n))
    if kind == SERIES:
        return [lp(slots[2 * i], slots[2 * i + 1]) for i in range(n)]
    lefts, rights = slots[:n], slots[n:]
    if kind == NESTED:
        return [lp(lefts[i], rights[n - 1 - i]) for i in range(n)]
    return [lp(lefts[i], rights[i]) for i in range(n)]


def test_separate_linkages_fuzz():
    rng = random.Random(99)
    for trial in range(200):
        t = rng.choice([1, 2])
        tp = rng.choice([SERIES, NESTED, CROSSING])
        tq = rng.choice([SERIES, NESTED, CROSSING])
        # lay the two families over interleaved random slots
        slots = rng.sample(range(10000), 16 * t)
        slots_p = sorted(rng.sample(slots, 8 * t))
        slots_q = sorted(set(slots) - set(slots_p))
        ps = _family_from_slots(slots_p, tp, 4 * t)
        qs = _family_from_slots(slots_q, tq, 4 * t)
        p_sel, q_sel = separate_linkages(ps, qs, t)
        assert len(p_sel) == t and len(q_sel) == t
        assert all(any(x is p for p in ps) for x in p_sel)
        assert all(any(x is q for q in qs) for x in q_sel)
        assert linkage_type(p_sel) is not None and linkage_type(q_sel) is not None
        assert satisfies_separation_clause(p_sel, q_sel, tp, tq)


def _family_from_slots(slots, kind, n):
    if kind == SERIES:
        return [LinkPath(slots[2 * i], slots[2 * i + 1]) for i in range(n)]
    lefts, rights = slots[:n], slots[n:]
    if kind == NESTED:
        return [LinkPath(lefts[i], rights[n - 1 - i]) for i in range(n)]
    return [LinkPath(lefts[i], rights[i]) for i in range(n)]


def test_separate_linkages_series_prefix_example():
    ps = [lp(0, 1), lp(2, 3), lp(4, 5), lp(6, 7)]
    qs = [lp(10, 11), lp(12, 13), lp(14, 15), lp(16, 17)]
    p_sel, q_sel = separate_linkages(ps, qs, 1)
    assert satisfies_separation_clause(p_sel, q_sel, SERIES, SERIES)


def test_separate_linkages_rejects_impure():
    ps = [lp(0, 3), lp(1, 2), lp(4, 5), lp(6, 7)]
    qs = [lp(10, 11), lp(12, 13), lp(14, 15), lp(16, 17)]
    with pytest.raises(LinkageError):
        separate_linkages(ps, qs, 1)


def test_interval_clause():
    ps = [lp(0, 1), lp(2, 3)]
    qs = [lp(4, 5), lp(6, 7)]
    assert satisfies_interval_clause(ps, qs)
    assert not satisfies_interval_clause(qs, ps)
    # strict interleave, neither series
    ps = [lp(0, 5), lp(1, 4)]
    qs = [lp(2, 7), lp(3, 6)]
    assert satisfies_interval_clause(ps, qs)
    # interleave with a series family fails
    ps = [lp(0, 4), lp(1, 5)]
    qs = [lp(2, 6), lp(3, 7)]
    assert satisfies_interval_clause(ps, qs)  # both crossing: fine
    qs_series = [lp(2, 3), lp(6, 7)]
    assert not satisfies_interval_clause([lp(0, 4), lp(1, 5)], qs_series)
