"""Finite groups, their modifications, and the structure of a modification.

A modification of a finite group ``G`` is a semigroup on ``G`` plus an
absorbing zero in which every product ``x*y`` is either the group product or
zero, and the group identity stays an identity.  It is stored as the group
together with the set of "zeroed" pairs of non-identity elements.

Element indices are 0-based with the identity at index 0.  The zero of a
modification is the sentinel :data:`ZERO` and never a group element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    GroupMismatch,
    GroupTooLarge,
    IdentityPairErased,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotCongruence,
    NotLatin,
    NotNormal,
)

ZERO = -1
DEFAULT_MAX_ORDER = 8

Pair = tuple[int, int]


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    table: tuple[tuple[int, ...], ...]
    names: tuple[str, ...]
    identity: int = 0

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        inv = []
        for x in range(self.order):
            inv.append(self.table[x].index(0))
        return tuple(inv)

    def inverse(self, x: int) -> int:
        return self.inverses[x]

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[x][y] == t[y][x] for x in range(self.order) for y in range(x))

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.table[y][x]
            k += 1
        return k

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "names": list(self.names),
            "table": [list(row) for row in self.table],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroup":
        group = group_from_table(data["table"], data.get("names"))
        if "order" in data and data["order"] != group.order:
            raise NotLatin(f"declared order {data['order']} but table has {group.order} rows")
        return group


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be at least 1")
    names = ["1", "g"] + [f"g^{k}" for k in range(2, n)]
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return FiniteGroup(n, table, tuple(names[:n]))


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of an n-gon, order 2n; element ``r^k s^e`` has index ``k + n*e``."""
    if n < 1:
        raise ValueError("dihedral group needs n >= 1")

    def decode(i):
        return i % n, i // n

    def encode(k, e):
        return k % n + n * e

    table = []
    for i in range(2 * n):
        k1, e1 = decode(i)
        row = []
        for j in range(2 * n):
            k2, e2 = decode(j)
            # r^k1 s^e1 r^k2 s^e2 = r^(k1 + (-1)^e1 k2) s^(e1+e2)
            k = k1 + (-k2 if e1 else k2)
            row.append(encode(k, (e1 + e2) % 2))
        table.append(row)
    names = []
    for i in range(2 * n):
        k, e = decode(i)
        part = "" if k == 0 else ("r" if k == 1 else f"r^{k}")
        part += "s" if e else ""
        names.append(part or "1")
    return group_from_table(table, names)


def klein_four_group() -> FiniteGroup:
    table = [[i ^ j for j in range(4)] for i in range(4)]
    return group_from_table(table, ["1", "a", "b", "ab"])


def group_from_table(table: Sequence[Sequence[int]], names: Sequence[str] | None = None) -> FiniteGroup:
    """Validate a Cayley table and return it with the identity moved to index 0."""
    n = len(table)
    if n == 0:
        raise NotLatin("empty table")
    rows = [list(r) for r in table]
    for i, row in enumerate(rows):
        if len(row) != n:
            raise NotLatin(f"row {i} has length {len(row)}, expected {n}")
        for v in row:
            if not isinstance(v, (int, np.integer)) or not 0 <= v < n:
                raise NotLatin(f"entry {v!r} in row {i} is not an element index")
    full = set(range(n))
    for i in range(n):
        if set(rows[i]) != full:
            raise NotLatin(f"row {i} is not a permutation")
        if {rows[j][i] for j in range(n)} != full:
            raise NotLatin(f"column {i} is not a permutation")
    identity = None
    for e in range(n):
        if rows[e] == list(range(n)) and all(rows[j][e] == j for j in range(n)):
            identity = e
            break
    if identity is None:
        raise NoIdentity("no two-sided identity element")
    for x, y, z in product(range(n), repeat=3):
        if rows[rows[x][y]][z] != rows[x][rows[y][z]]:
            raise NotAssociative(f"(x*y)*z != x*(y*z) for triple {(x, y, z)}", (x, y, z))
    for x in range(n):
        if not any(rows[x][y] == identity and rows[y][x] == identity for y in range(n)):
            raise NoInverse(f"element {x} has no inverse")
    if names is None:
        names = [str(i) for i in range(n)]
    names = list(names)
    if identity != 0:
        # swap the labels 0 and identity
        perm = list(range(n))
        perm[0], perm[identity] = identity, 0
        rows = [[perm[rows[perm[i]][perm[j]]] for j in range(n)] for i in range(n)]
        names[0], names[identity] = names[identity], names[0]
    return FiniteGroup(n, tuple(tuple(int(v) for v in r) for r in rows), tuple(names))


def subgroup(G: FiniteGroup, elements: Iterable[int]) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Relabel a subgroup as a standalone group; returns it and the list of original indices."""
    elems = tuple(sorted(set(elements)))
    if not elems or elems[0] != 0:
        raise ValueError("a subgroup must contain the identity")
    pos = {x: i for i, x in enumerate(elems)}
    table = []
    for x in elems:
        row = []
        for y in elems:
            xy = G.mul(x, y)
            if xy not in pos:
                raise ValueError(f"{elems} is not closed under multiplication")
            row.append(pos[xy])
        table.append(tuple(row))
    return FiniteGroup(len(elems), tuple(table), tuple(G.names[x] for x in elems)), elems


# ---------------------------------------------------------------------------
# Modifications


def _erasable_pairs(G: FiniteGroup) -> list[Pair]:
    return [(i, j) for i in range(1, G.order) for j in range(1, G.order)]


def _product_table(G: FiniteGroup, zero_pairs: frozenset) -> tuple[tuple[int, ...], ...]:
    return tuple(
        tuple(ZERO if (x, y) in zero_pairs else G.table[x][y] for y in range(G.order))
        for x in range(G.order)
    )


def _associativity_witness(G: FiniteGroup, prod_table) -> tuple[int, int, int] | None:
    n = G.order

    def star(x, y):
        if x == ZERO or y == ZERO:
            return ZERO
        return prod_table[x][y]

    for x, y, z in product(range(n), repeat=3):
        if star(star(x, y), z) != star(x, star(y, z)):
            return (x, y, z)
    return None


@dataclass(frozen=True)
class Modification:
    """A group with some products of non-identity elements replaced by zero.

    Construct through :func:`modification_from_zero_set`, which validates
    associativity; the raw constructor does not.
    """

    group: FiniteGroup
    zero_pairs: tuple[Pair, ...]

    @cached_property
    def zero_set(self) -> frozenset:
        return frozenset(self.zero_pairs)

    @cached_property
    def table(self) -> tuple[tuple[int, ...], ...]:
        return _product_table(self.group, self.zero_set)

    @property
    def order(self) -> int:
        """Number of nonzero elements."""
        return self.group.order

    def star(self, x: int, y: int) -> int:
        if x == ZERO or y == ZERO:
            return ZERO
        return self.table[x][y]

    def product_of(self, elems: Iterable[int]) -> int:
        acc = 0
        for s in elems:
            acc = self.star(acc, s)
            if acc == ZERO:
                return ZERO
        return acc

    def is_full(self) -> bool:
        return not self.zero_pairs

    def name(self, x: int) -> str:
        return "0" if x == ZERO else self.group.names[x]

    def to_json(self, include_group: bool = True) -> dict:
        out: dict = {"zero_pairs": [list(p) for p in self.zero_pairs]}
        if include_group:
            out["group"] = self.group.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict, group: FiniteGroup | None = None) -> "Modification":
        if group is None:
            group = FiniteGroup.from_json(data["group"])
        return modification_from_zero_set(group, [tuple(p) for p in data["zero_pairs"]])


def _canonical_pairs(pairs: Iterable) -> tuple[Pair, ...]:
    return tuple(sorted({(int(a), int(b)) for a, b in pairs}))


def modification_from_zero_set(G: FiniteGroup, zero_pairs: Iterable) -> Modification:
    pairs = _canonical_pairs(zero_pairs)
    for a, b in pairs:
        if not (0 <= a < G.order and 0 <= b < G.order):
            raise ValueError(f"pair {(a, b)} references an element outside the group")
        if a == 0 or b == 0:
            raise IdentityPairErased(f"pair {(a, b)} involves the identity")
    S = Modification(G, pairs)
    witness = _associativity_witness(G, S.table)
    if witness is not None:
        x, y, z = witness
        lhs = S.star(S.star(x, y), z)
        rhs = S.star(x, S.star(y, z))
        raise NotAssociative(
            f"not associative at {witness}: "
            f"({S.name(x)}*{S.name(y)})*{S.name(z)} = {S.name(lhs)} but "
            f"{S.name(x)}*({S.name(y)}*{S.name(z)}) = {S.name(rhs)}",
            witness,
        )
    return S


def canonical_modification(G: FiniteGroup, kind: str = "full") -> Modification:
    if kind == "full":
        return modification_from_zero_set(G, ())
    if kind == "annihilator":
        return modification_from_zero_set(G, _erasable_pairs(G))
    raise ValueError(f"unknown modification kind {kind!r}")


def has_weak_cancellation(S: Modification) -> bool:
    n = S.order
    for z in range(n):
        seen_right: dict[int, int] = {}
        seen_left: dict[int, int] = {}
        for x in range(n):
            xz = S.star(x, z)
            if xz != ZERO:
                if seen_right.setdefault(xz, x) != x:
                    return False
            zx = S.star(z, x)
            if zx != ZERO:
                if seen_left.setdefault(zx, x) != x:
                    return False
    return True


# -- enumeration --------------------------------------------------------------


def _triple_constraints(G: FiniteGroup) -> list[tuple[int, int]]:
    """Bitmask constraints ``(left, right)``: a zero set ``Z`` is associative
    iff for every constraint, ``Z & left`` and ``Z & right`` are both empty or
    both nonempty."""
    pairs = _erasable_pairs(G)
    bit = {p: 1 << k for k, p in enumerate(pairs)}
    out = set()
    n = G.order
    for x, y, z in product(range(1, n), repeat=3):
        xy, yz = G.mul(x, y), G.mul(y, z)
        left = bit.get((x, y), 0) | bit.get((xy, z), 0)
        right = bit.get((y, z), 0) | bit.get((x, yz), 0)
        if left != right:
            out.add((left, right))
    return sorted(out)


def _mask_to_pairs(pairs: list[Pair], mask: int) -> tuple[Pair, ...]:
    return tuple(p for k, p in enumerate(pairs) if mask >> k & 1)


def _sort_key(S: Modification):
    return (len(S.zero_pairs), S.zero_pairs)


def _search_masks(G: FiniteGroup) -> list[int]:
    pairs = _erasable_pairs(G)
    k = len(pairs)
    by_depth: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    for left, right in _triple_constraints(G):
        by_depth[(left | right).bit_length() - 1].append((left, right))
    found = []

    def dfs(depth, mask):
        if depth == k:
            found.append(mask)
            return
        for choice in (0, 1):
            m = mask | (choice << depth)
            if all(bool(m & l) == bool(m & r) for l, r in by_depth[depth]):
                dfs(depth + 1, m)

    if k == 0:
        return [0]
    dfs(0, 0)
    return found


def _naive_masks(G: FiniteGroup, chunk: int = 1 << 21) -> list[int]:
    """Test every one of the 2^k candidate zero sets against every triple."""
    k = len(_erasable_pairs(G))
    constraints = _triple_constraints(G)
    found: list[int] = []
    total = 1 << k
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
        for left, right in constraints:
            ok = ((masks & left) != 0) == ((masks & right) != 0)
            masks = masks[ok]
            if masks.size == 0:
                break
        found.extend(int(m) for m in masks)
    return found


def enumerate_modifications(
    G: FiniteGroup, max_order: int = DEFAULT_MAX_ORDER, strategy: str = "search"
) -> list[Modification]:
    """All modifications of ``G``, sorted by (number of zero pairs, pairs).

    ``strategy="search"`` prunes a depth-first search over the erasable
    pairs; ``strategy="naive"`` checks all 2^k candidate zero sets and is
    kept as an oracle.
    """
    if G.order > max_order:
        raise GroupTooLarge(f"group of order {G.order} exceeds the bound {max_order}")
    if strategy == "search":
        masks = _search_masks(G)
    elif strategy == "naive":
        masks = _naive_masks(G)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    pairs = _erasable_pairs(G)
    mods = [modification_from_zero_set(G, _mask_to_pairs(pairs, m)) for m in masks]
    mods.sort(key=_sort_key)
    return mods


# -- units, ideal, order ------------------------------------------------------


@dataclass(frozen=True)
class UnitIdealSplit:
    units: tuple[int, ...]
    ideal: tuple[int, ...]  # non-units, ZERO listed first
    nilpotency_index: int

    @property
    def nonzero_ideal(self) -> tuple[int, ...]:
        return tuple(x for x in self.ideal if x != ZERO)


def unit_group(S: Modification) -> UnitIdealSplit:
    G = S.group
    units = tuple(
        x
        for x in range(G.order)
        if S.star(x, G.inverse(x)) == 0 and S.star(G.inverse(x), x) == 0
    )
    unit_set = set(units)
    ideal = (ZERO,) + tuple(x for x in range(G.order) if x not in unit_set)
    # smallest k with I^k = {0}
    ideal_set = set(ideal)
    power = set(ideal_set)
    k = 1
    while power != {ZERO}:
        power = {S.star(a, b) for a in power for b in ideal_set}
        k += 1
        if k > G.order + 1:
            raise AssertionError(f"ideal of {S.zero_pairs} is not nilpotent within |G|+1 steps")
    return UnitIdealSplit(units, ideal, k)


def is_normal_units(S: Modification, split: UnitIdealSplit | None = None) -> bool:
    split = split or unit_group(S)
    units = set(split.units)
    for x in range(S.order):
        left = {S.star(x, a) for a in units}
        right = {S.star(a, x) for a in units}
        if left != right:
            return False
    return True


def conjugation_witness(S: Modification, a: int, x: int, split: UnitIdealSplit | None = None) -> int:
    """The unique unit ``a_x`` with ``a*x = x*a_x``."""
    split = split or unit_group(S)
    units = set(split.units)
    if a not in units:
        raise ValueError(f"{a} is not a unit")
    if x == ZERO:
        raise ValueError("x must be nonzero")
    G = S.group
    ax = G.mul(G.mul(G.inverse(x), a), x)
    if ax not in units:
        raise NotNormal(f"x^-1 a x = {ax} is not a unit for a={a}, x={x}")
    lhs = S.star(a, x)
    candidates = [b for b in split.units if S.star(x, b) == lhs and lhs != ZERO]
    assert candidates == [ax], (a, x, candidates)
    return ax


def _check_same_group(S: Modification, T: Modification):
    if S.group != T.group:
        raise GroupMismatch("modifications of different groups")


def is_preceq(S: Modification, T: Modification) -> bool:
    """True when every product vanishing in ``T`` also vanishes in ``S``."""
    _check_same_group(S, T)
    return T.zero_set <= S.zero_set


def meet(S: Modification, T: Modification) -> Modification:
    _check_same_group(S, T)
    try:
        return modification_from_zero_set(S.group, S.zero_set | T.zero_set)
    except NotAssociative as exc:  # pragma: no cover - the union is always associative
        raise AssertionError(f"meet of two modifications is not associative: {exc}") from exc


# -- quotient by units --------------------------------------------------------


@dataclass(frozen=True)
class QuotientModification:
    source: Modification
    quotient: Modification
    projection: tuple[int, ...]  # element of S -> coset index; ZERO is mapped separately
    cosets: tuple[tuple[int, ...], ...]

    def project(self, x: int) -> int:
        return ZERO if x == ZERO else self.projection[x]

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.cosets)


def quotient_by_units(S: Modification, split: UnitIdealSplit | None = None) -> QuotientModification:
    split = split or unit_group(S)
    if not is_normal_units(S, split):
        raise NotNormal(f"units {split.units} are not normal in modification {S.zero_pairs}")
    G = S.group
    seen: dict[int, int] = {}
    cosets = []
    for x in range(G.order):
        if x in seen:
            continue
        coset = tuple(sorted(G.mul(a, x) for a in split.units))
        for y in coset:
            seen[y] = len(cosets)
        cosets.append(coset)
    projection = tuple(seen[x] for x in range(G.order))
    reps = [c[0] for c in cosets]
    qtable = tuple(
        tuple(projection[G.mul(r, s)] for s in reps) for r in reps
    )
    names = tuple(f"[{G.names[r]}]" for r in reps)
    QG = FiniteGroup(len(cosets), qtable, names)
    zero_pairs = set()
    for x in range(G.order):
        for y in range(G.order):
            cx, cy = projection[x], projection[y]
            zeroed = S.star(x, y) == ZERO
            rep_zeroed = S.star(reps[cx], reps[cy]) == ZERO
            if zeroed != rep_zeroed:
                raise NotCongruence(
                    f"cosets of {S.name(x)} and {S.name(y)} do not multiply uniformly", (x, y)
                )
            if zeroed:
                zero_pairs.add((cx, cy))
            elif projection[S.star(x, y)] != qtable[cx][cy]:
                raise NotCongruence(f"product of cosets is not a coset at {(x, y)}", (x, y))
    quotient = modification_from_zero_set(QG, zero_pairs)
    return QuotientModification(S, quotient, projection, tuple(cosets))


# -- spec strings -------------------------------------------------------------


def parse_group_spec(spec: str) -> FiniteGroup:
    """Parse ``C<n>``, ``D<n>`` (order 2n), ``S3``, ``V4``."""
    s = spec.strip()
    upper = s.upper()
    if upper == "S3":
        return dihedral_group(3)
    if upper in ("V4", "K4"):
        return klein_four_group()
    if upper[:1] in ("C", "D") and upper[1:].isdigit():
        n = int(upper[1:])
        if n < 1:
            raise ValueError(f"bad group order in {spec!r}")
        return cyclic_group(n) if upper[0] == "C" else dihedral_group(n)
    raise ValueError(f"unrecognised group spec {spec!r}")
