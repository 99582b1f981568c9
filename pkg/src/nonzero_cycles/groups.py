"""Group arithmetic for edge labels.

Supported groups: the integers, integers mod n, free abelian groups of
finite rank, free (non-abelian) groups on finitely many generators,
direct sums of two groups, and finitely generated abelian groups given
as quotients of Z^k (canonicalised through invariant factors).

Elements are immutable and hashable; all arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Tuple

KIND_INTEGERS = "Z"
KIND_CYCLIC = "Zn"
KIND_FREE_ABELIAN = "ZA"
KIND_FREE_GROUP = "F"
KIND_DIRECT_SUM = "SUM"
KIND_QUOTIENT = "Q"


class GroupParseError(ValueError):
    """Raised when a group or element description cannot be parsed."""


@dataclass(frozen=True)
class GroupDescriptor:
    """Identifies a concrete group; `n` is a modulus/rank/generator count
    depending on kind, `parts` holds summands (direct sum) or invariant
    factors (quotient)."""

    kind: str
    n: int = 0
    parts: tuple = ()

    def __post_init__(self):
        if self.kind == KIND_CYCLIC and self.n < 1:
            raise GroupParseError("cyclic modulus must be >= 1")
        if self.kind == KIND_FREE_ABELIAN and self.n < 0:
            raise GroupParseError("free abelian rank must be >= 0")
        if self.kind == KIND_FREE_GROUP and self.n < 0:
            raise GroupParseError("free group needs >= 0 generators")
        if self.kind == KIND_DIRECT_SUM and len(self.parts) != 2:
            raise GroupParseError("direct sum takes exactly two summands")

    @property
    def is_abelian(self) -> bool:
        if self.kind == KIND_FREE_GROUP:
            return self.n <= 1
        if self.kind == KIND_DIRECT_SUM:
            return self.parts[0].is_abelian and self.parts[1].is_abelian
        return True

    def __str__(self) -> str:
        return format_descriptor(self)


@dataclass(frozen=True)
class GroupElement:
    """An element of the group named by `descriptor`; payload layout is
    kind-specific and always a canonical hashable value."""

    descriptor: GroupDescriptor
    payload: object

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return op(self, other)

    def __neg__(self) -> "GroupElement":
        return inv(self)

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return op(self, inv(other))

    @property
    def is_zero(self) -> bool:
        return is_zero(self)

    def __str__(self) -> str:
        return repr(self.payload)


def integers() -> GroupDescriptor:
    return GroupDescriptor(KIND_INTEGERS)


def cyclic(n: int) -> GroupDescriptor:
    return GroupDescriptor(KIND_CYCLIC, n=n)


def free_abelian(k: int) -> GroupDescriptor:
    return GroupDescriptor(KIND_FREE_ABELIAN, n=k)


def free_group(g: int) -> GroupDescriptor:
    return GroupDescriptor(KIND_FREE_GROUP, n=g)


def direct_sum(left: GroupDescriptor, right: GroupDescriptor) -> GroupDescriptor:
    return GroupDescriptor(KIND_DIRECT_SUM, parts=(left, right))


def quotient(factors: Iterable[int]) -> GroupDescriptor:
    """Abelian group with the given invariant factors (0 = a free Z summand).

    Factors equal to 1 are dropped; two quotient descriptors are equal
    exactly when their canonical factor tuples agree.
    """
    kept = tuple(d for d in factors if d != 1)
    for d in kept:
        if d < 0:
            raise GroupParseError("invariant factors must be >= 0")
    fin = [d for d in kept if d > 0]
    for a, b in zip(fin, fin[1:]):
        if b % a != 0:
            raise GroupParseError("invariant factors must form a divisibility chain")
    ordered = tuple(fin) + tuple(0 for d in kept if d == 0)
    return GroupDescriptor(KIND_QUOTIENT, parts=ordered)


def identity(desc: GroupDescriptor) -> GroupElement:
    k = desc.kind
    if k == KIND_INTEGERS:
        return GroupElement(desc, 0)
    if k == KIND_CYCLIC:
        return GroupElement(desc, 0)
    if k == KIND_FREE_ABELIAN:
        return GroupElement(desc, (0,) * desc.n)
    if k == KIND_FREE_GROUP:
        return GroupElement(desc, ())
    if k == KIND_DIRECT_SUM:
        return GroupElement(desc, (identity(desc.parts[0]), identity(desc.parts[1])))
    if k == KIND_QUOTIENT:
        return GroupElement(desc, (0,) * len(desc.parts))
    raise GroupParseError(f"unknown group kind {k!r}")


def element(desc: GroupDescriptor, payload) -> GroupElement:
    """Build an element from a raw payload, normalising to canonical form."""
    k = desc.kind
    if k == KIND_INTEGERS:
        return GroupElement(desc, int(payload))
    if k == KIND_CYCLIC:
        return GroupElement(desc, int(payload) % desc.n)
    if k == KIND_FREE_ABELIAN:
        vec = tuple(int(x) for x in payload)
        if len(vec) != desc.n:
            raise GroupParseError("free abelian payload has wrong length")
        return GroupElement(desc, vec)
    if k == KIND_FREE_GROUP:
        word = tuple(int(x) for x in payload)
        for x in word:
            if x == 0 or abs(x) > desc.n:
                raise GroupParseError("free group letter out of range")
        return GroupElement(desc, _reduce_word(word))
    if k == KIND_DIRECT_SUM:
        a, b = payload
        if not isinstance(a, GroupElement):
            a = element(desc.parts[0], a)
        if not isinstance(b, GroupElement):
            b = element(desc.parts[1], b)
        if a.descriptor != desc.parts[0] or b.descriptor != desc.parts[1]:
            raise GroupParseError("direct sum components in wrong groups")
        return GroupElement(desc, (a, b))
    if k == KIND_QUOTIENT:
        vec = tuple(int(x) for x in payload)
        if len(vec) != len(desc.parts):
            raise GroupParseError("quotient payload has wrong length")
        return GroupElement(desc, tuple(x % d if d else x for x, d in zip(vec, desc.parts)))
    raise GroupParseError(f"unknown group kind {k!r}")


def _reduce_word(word: Sequence[int]) -> Tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def op(a: GroupElement, b: GroupElement) -> GroupElement:
    if a.descriptor != b.descriptor:
        raise GroupParseError("operands live in different groups")
    desc = a.descriptor
    k = desc.kind
    if k == KIND_INTEGERS:
        return GroupElement(desc, a.payload + b.payload)
    if k == KIND_CYCLIC:
        return GroupElement(desc, (a.payload + b.payload) % desc.n)
    if k == KIND_FREE_ABELIAN:
        return GroupElement(desc, tuple(x + y for x, y in zip(a.payload, b.payload)))
    if k == KIND_FREE_GROUP:
        return GroupElement(desc, _reduce_word(a.payload + b.payload))
    if k == KIND_DIRECT_SUM:
        return GroupElement(desc, (op(a.payload[0], b.payload[0]), op(a.payload[1], b.payload[1])))
    if k == KIND_QUOTIENT:
        return GroupElement(
            desc,
            tuple((x + y) % d if d else x + y for x, y, d in zip(a.payload, b.payload, desc.parts)),
        )
    raise GroupParseError(f"unknown group kind {k!r}")


def inv(a: GroupElement) -> GroupElement:
    desc = a.descriptor
    k = desc.kind
    if k == KIND_INTEGERS:
        return GroupElement(desc, -a.payload)
    if k == KIND_CYCLIC:
        return GroupElement(desc, (-a.payload) % desc.n)
    if k == KIND_FREE_ABELIAN:
        return GroupElement(desc, tuple(-x for x in a.payload))
    if k == KIND_FREE_GROUP:
        # inversion reverses the word and negates each letter
        return GroupElement(desc, tuple(-x for x in reversed(a.payload)))
    if k == KIND_DIRECT_SUM:
        return GroupElement(desc, (inv(a.payload[0]), inv(a.payload[1])))
    if k == KIND_QUOTIENT:
        return GroupElement(desc, tuple((-x) % d if d else -x for x, d in zip(a.payload, desc.parts)))
    raise GroupParseError(f"unknown group kind {k!r}")


def is_zero(a: GroupElement) -> bool:
    return a == identity(a.descriptor)


def project(a: GroupElement, side: int) -> GroupElement:
    """Coordinate projection of a direct-sum element (side 0 or 1)."""
    if a.descriptor.kind != KIND_DIRECT_SUM:
        raise GroupParseError("projection needs a direct-sum element")
    if side not in (0, 1):
        raise GroupParseError("side must be 0 or 1")
    return a.payload[side]


def accumulate(desc: GroupDescriptor, items: Iterable[GroupElement]) -> GroupElement:
    total = identity(desc)
    for x in items:
        total = op(total, x)
    return total


def random_element(desc: GroupDescriptor, rng, span: int = 4) -> GroupElement:
    """Draw a pseudo-random element (used by generators and fuzz tests)."""
    k = desc.kind
    if k == KIND_INTEGERS:
        return GroupElement(desc, rng.randint(-span, span))
    if k == KIND_CYCLIC:
        return GroupElement(desc, rng.randrange(desc.n))
    if k == KIND_FREE_ABELIAN:
        return GroupElement(desc, tuple(rng.randint(-span, span) for _ in range(desc.n)))
    if k == KIND_FREE_GROUP:
        length = rng.randint(0, span)
        word = []
        for _ in range(length):
            g = rng.randint(1, desc.n) if desc.n else 0
            if g == 0:
                break
            word.append(g if rng.random() < 0.5 else -g)
        return element(desc, word)
    if k == KIND_DIRECT_SUM:
        return GroupElement(
            desc,
            (random_element(desc.parts[0], rng, span), random_element(desc.parts[1], rng, span)),
        )
    if k == KIND_QUOTIENT:
        return element(desc, tuple(rng.randint(-span, span) for _ in desc.parts))
    raise GroupParseError(f"unknown group kind {k!r}")


# ---------------------------------------------------------------------------
# descriptor grammar: z | z<n> | free<g> | za<k> | sum(<d>,<d>) | q(<d1>,...)


def format_descriptor(desc: GroupDescriptor) -> str:
    k = desc.kind
    if k == KIND_INTEGERS:
        return "z"
    if k == KIND_CYCLIC:
        return f"z{desc.n}"
    if k == KIND_FREE_ABELIAN:
        return f"za{desc.n}"
    if k == KIND_FREE_GROUP:
        return f"free{desc.n}"
    if k == KIND_DIRECT_SUM:
        return f"sum({format_descriptor(desc.parts[0])},{format_descriptor(desc.parts[1])})"
    if k == KIND_QUOTIENT:
        return "q(" + ",".join(str(d) for d in desc.parts) + ")"
    raise GroupParseError(f"unknown group kind {k!r}")


def parse_descriptor(text: str) -> GroupDescriptor:
    desc, rest = _parse_desc(text.strip().lower())
    if rest:
        raise GroupParseError(f"trailing characters in group description: {rest!r}")
    return desc


def _parse_desc(text: str) -> tuple[GroupDescriptor, str]:
    if text.startswith("sum("):
        left, rest = _parse_desc(text[4:])
        if not rest.startswith(","):
            raise GroupParseError("sum(...) expects two comma-separated groups")
        right, rest = _parse_desc(rest[1:])
        if not rest.startswith(")"):
            raise GroupParseError("unterminated sum(...)")
        return direct_sum(left, right), rest[1:]
    if text.startswith("q("):
        body, _, rest = text[2:].partition(")")
        if _ != ")":
            raise GroupParseError("unterminated q(...)")
        factors = [int(x) for x in body.split(",")] if body else []
        return quotient(factors), rest
    if text.startswith("free"):
        num, rest = _take_int(text[4:])
        return free_group(num), rest
    if text.startswith("za"):
        num, rest = _take_int(text[2:])
        return free_abelian(num), rest
    if text.startswith("z"):
        body = text[1:]
        if not body or not body[0].isdigit():
            return integers(), body
        num, rest = _take_int(body)
        return cyclic(num), rest
    raise GroupParseError(f"cannot parse group description: {text!r}")


def _take_int(text: str) -> tuple[int, str]:
    i = 0
    while i < len(text) and text[i].isdigit():
        i += 1
    if i == 0:
        raise GroupParseError(f"expected a number at {text!r}")
    return int(text[:i]), text[i:]


# ---------------------------------------------------------------------------
# JSON payload encoding


def encode_element(a: GroupElement):
    k = a.descriptor.kind
    if k == KIND_INTEGERS:
        return str(a.payload)  # decimal string keeps arbitrary precision portable
    if k == KIND_CYCLIC:
        return a.payload
    if k in (KIND_FREE_ABELIAN, KIND_FREE_GROUP, KIND_QUOTIENT):
        return list(a.payload)
    if k == KIND_DIRECT_SUM:
        return [encode_element(a.payload[0]), encode_element(a.payload[1])]
    raise GroupParseError(f"unknown group kind {k!r}")


def decode_element(desc: GroupDescriptor, data) -> GroupElement:
    k = desc.kind
    try:
        if k == KIND_INTEGERS:
            return element(desc, int(data))
        if k == KIND_CYCLIC:
            return element(desc, int(data))
        if k in (KIND_FREE_ABELIAN, KIND_FREE_GROUP, KIND_QUOTIENT):
            return element(desc, data)
        if k == KIND_DIRECT_SUM:
            return element(
                desc,
                (decode_element(desc.parts[0], data[0]), decode_element(desc.parts[1], data[1])),
            )
    except (TypeError, ValueError) as exc:
        raise GroupParseError(f"bad element payload {data!r}: {exc}") from exc
    raise GroupParseError(f"unknown group kind {k!r}")


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(matrix: Sequence[Sequence[int]]):
    """Return (U, S, V) with U*M*V = S, U and V unimodular, S diagonal with
    each diagonal entry dividing the next; exact integer arithmetic."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    s = [list(map(int, row)) for row in matrix]
    for row in s:
        if len(row) != cols:
            raise ValueError("ragged matrix")
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_op(i, j, q):  # row_i -= q * row_j
        for c in range(cols):
            s[i][c] -= q * s[j][c]
        for c in range(rows):
            u[i][c] -= q * u[j][c]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(rows):
            s[r][i] -= q * s[r][j]
        for r in range(cols):
            v[r][i] -= q * v[r][j]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(rows):
            s[r][i], s[r][j] = s[r][j], s[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    def negate_row(i):
        for c in range(cols):
            s[i][c] = -s[i][c]
        for c in range(rows):
            u[i][c] = -u[i][c]

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if s[i][j] != 0 and (best is None or abs(s[i][j]) < best):
                    best = abs(s[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear column t below the pivot
            dirty = False
            for i in range(t + 1, rows):
                if s[i][t] != 0:
                    q = s[i][t] // s[t][t]
                    row_op(i, t, q)
                    if s[i][t] != 0:
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, cols):
                if s[t][j] != 0:
                    q = s[t][j] // s[t][t]
                    col_op(j, t, q)
                    if s[t][j] != 0:
                        swap_cols(j, t)
                        dirty = True
            if not dirty:
                break
        if s[t][t] < 0:
            negate_row(t)
        # enforce divisibility: pivot must divide every remaining entry
        fixed = False
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if s[i][j] % s[t][t] != 0:
                    row_op(t, i, -1)  # add row i to row t, then restart block
                    fixed = True
                    break
            if fixed:
                break
        if not fixed:
            t += 1
    return u, s, v


def quotient_with_projection(
    relations: Sequence[Sequence[int]], ncols: int
) -> tuple[GroupDescriptor, Callable[[Sequence[int]], GroupElement]]:
    """Group Z^ncols modulo the row span of `relations`, together with the
    projection map from raw coordinate vectors to canonical elements."""
    rel = [list(map(int, row)) for row in relations]
    for row in rel:
        if len(row) != ncols:
            raise ValueError("relation rows must have length ncols")
    if not rel:
        rel = [[0] * ncols]
    _, s, v = smith_normal_form(rel)
    diag = [s[i][i] for i in range(min(len(rel), ncols))]
    factors = [diag[i] if i < len(diag) else 0 for i in range(ncols)]
    desc = quotient(factors)
    kept = [i for i, d in enumerate(factors) if d != 1]

    def proj(coords: Sequence[int]) -> GroupElement:
        if len(coords) != ncols:
            raise ValueError("coordinate vector has wrong length")
        image = [sum(coords[r] * v[r][c] for r in range(ncols)) for c in range(ncols)]
        return element(desc, tuple(image[i] for i in kept))

    return desc, proj
