import random

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from hypothesis import given, settings
from hypothesis import strategies as st

from nonzero_cycles import groups
from nonzero_cycles.groups import (
    GroupParseError,
    cyclic,
    decode_element,
    direct_sum,
    element,
    encode_element,
    format_descriptor,
    free_abelian,
    free_group,
    identity,
    integers,
    inv,
    is_zero,
    op,
    parse_descriptor,
    project,
    quotient,
    quotient_with_projection,
    smith_normal_form,
)

DESCRIPTORS = [
    integers(),
    cyclic(2),
    cyclic(5),
    free_abelian(3),
    free_group(2),
    direct_sum(cyclic(2), cyclic(3)),
    direct_sum(free_group(2), integers()),
    quotient([2, 4, 0]),
]


def random_elements(desc, count=40, seed=7):
    rng = random.Random(seed)
    return [groups.random_element(desc, rng) for _ in range(count)]


@pytest.mark.parametrize("desc", DESCRIPTORS, ids=str)
def test_group_axioms(desc):
    xs = random_elements(desc)
    e = identity(desc)
    for a in xs:
        assert op(a, e) == a
        assert op(e, a) == a
        assert is_zero(op(a, inv(a)))
        assert is_zero(op(inv(a), a))
    for a, b, c in zip(xs, xs[1:], xs[2:]):
        assert op(op(a, b), c) == op(a, op(b, c))


@pytest.mark.parametrize("desc", DESCRIPTORS, ids=str)
def test_inverse_is_antihomomorphism(desc):
    xs = random_elements(desc, seed=11)
    for a, b in zip(xs, xs[1:]):
        assert inv(op(a, b)) == op(inv(b), inv(a))


def test_free_group_is_not_abelian():
    desc = free_group(2)
    a = element(desc, [1])
    b = element(desc, [2])
    assert op(a, b) != op(b, a)
    assert not desc.is_abelian
    assert free_group(1).is_abelian


def test_free_group_reduction():
    desc = free_group(2)
    assert element(desc, [1, -1]).payload == ()
    assert element(desc, [1, 2, -2, -1, 1]).payload == (1,)
    assert op(element(desc, [1, 2]), element(desc, [-2, -1])).payload == ()


def test_cyclic_wraps():
    desc = cyclic(5)
    assert element(desc, 7).payload == 2
    assert op(element(desc, 3), element(desc, 4)).payload == 2


def test_direct_sum_projection():
    desc = direct_sum(cyclic(2), cyclic(3))
    a = element(desc, (1, 2))
    assert project(a, 0).payload == 1
    assert project(a, 1).payload == 2
    with pytest.raises(GroupParseError):
        project(element(cyclic(2), 1), 0)


def test_quotient_canonicalisation():
    # factors equal to 1 vanish; equal invariant factors mean equal groups
    assert quotient([1, 2, 6]) == quotient([2, 6])
    assert quotient([1, 1]) == quotient([])
    with pytest.raises(GroupParseError):
        quotient([2, 3])  # not a divisibility chain


@pytest.mark.parametrize("desc", DESCRIPTORS, ids=str)
def test_grammar_round_trip(desc):
    assert parse_descriptor(format_descriptor(desc)) == desc


def test_grammar_examples():
    assert parse_descriptor("z") == integers()
    assert parse_descriptor("z5") == cyclic(5)
    assert parse_descriptor("za3") == free_abelian(3)
    assert parse_descriptor("free2") == free_group(2)
    assert parse_descriptor("sum(z2,sum(z,free1))") == direct_sum(
        cyclic(2), direct_sum(integers(), free_group(1))
    )
    with pytest.raises(GroupParseError):
        parse_descriptor("nope")
    with pytest.raises(GroupParseError):
        parse_descriptor("z2junk")


@pytest.mark.parametrize("desc", DESCRIPTORS, ids=str)
def test_element_json_round_trip(desc):
    for a in random_elements(desc, seed=3):
        assert decode_element(desc, encode_element(a)) == a


def test_integers_encode_as_strings():
    big = element(integers(), 2**200)
    assert encode_element(big) == str(2**200)
    assert decode_element(integers(), encode_element(big)) == big


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(min_value=-9, max_value=9), min_size=1, max_size=5),
        min_size=1,
        max_size=5,
    ).filter(lambda m: len({len(r) for r in m}) == 1)
)
def test_smith_normal_form_properties(matrix):
    u, s, v = smith_normal_form(matrix)
    m = sympy.Matrix(matrix)
    su = sympy.Matrix(u)
    sv = sympy.Matrix(v)
    assert su * m * sv == sympy.Matrix(s)
    assert abs(su.det()) == 1
    assert abs(sv.det()) == 1
    diag = [s[i][i] for i in range(min(len(s), len(s[0])))]
    for i in range(len(s)):
        for j in range(len(s[0])):
            if i != j:
                assert s[i][j] == 0
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            assert b == 0
        else:
            assert a > 0 and b % a == 0
    # invariant factors must agree with an independent implementation
    nonzero = [d for d in diag if d != 0]
    expected = [int(x) for x in sympy_snf(m).diagonal()]
    expected_nonzero = [abs(d) for d in expected if d != 0]
    assert nonzero == expected_nonzero


def test_quotient_with_projection_torus_like():
    # Z^2 with no relations: free abelian of rank 2
    desc, proj = quotient_with_projection([[0, 0]], 2)
    assert desc == quotient([0, 0])
    a = proj([1, 0])
    b = proj([0, 1])
    assert not is_zero(a) and not is_zero(b) and a != b


def test_quotient_with_projection_projective_plane_like():
    # Z / <2> gives Z_2
    desc, proj = quotient_with_projection([[2]], 1)
    assert desc == quotient([2])
    a = proj([1])
    assert not is_zero(a)
    assert is_zero(op(a, a))


def test_quotient_with_projection_kills_relations():
    rng = random.Random(5)
    for _ in range(25):
        ncols = rng.randint(1, 4)
        rel = [[rng.randint(-3, 3) for _ in range(ncols)] for _ in range(rng.randint(1, 4))]
        desc, proj = quotient_with_projection(rel, ncols)
        for row in rel:
            assert is_zero(proj(row))
        # projection is a homomorphism
        x = [rng.randint(-5, 5) for _ in range(ncols)]
        y = [rng.randint(-5, 5) for _ in range(ncols)]
        assert proj([a + b for a, b in zip(x, y)]) == op(proj(x), proj(y))
