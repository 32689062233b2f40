from itertools import chain, combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semibrauer.algebra import (
    ZERO,
    FiniteGroup,
    Modification,
    canonical_modification,
    conjugation_witness,
    cyclic_group,
    dihedral_group,
    enumerate_modifications,
    group_from_table,
    has_weak_cancellation,
    is_normal_units,
    is_preceq,
    klein_four_group,
    meet,
    modification_from_zero_set,
    parse_group_spec,
    quotient_by_units,
    subgroup,
    unit_group,
)
from semibrauer.errors import (
    GroupMismatch,
    GroupTooLarge,
    IdentityPairErased,
    NoIdentity,
    NotAssociative,
    NotLatin,
    NotNormal,
)

# counts confirmed by both the pruned search and the 2^k scan
MODIFICATION_COUNTS = {"C1": 1, "C2": 2, "C3": 4, "C4": 14, "V4": 14, "C5": 56, "S3": 262, "C6": 284}


def subsets(items):
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def modifications_by_table(G: FiniteGroup):
    """Oracle: try every zero set and test associativity on the full table."""
    pairs = [(a, b) for a in range(1, G.order) for b in range(1, G.order)]
    found = []
    for zs in subsets(pairs):
        zs = set(zs)

        def star(x, y):
            if x == ZERO or y == ZERO or (x, y) in zs:
                return ZERO
            return G.mul(x, y)

        elems = list(range(G.order)) + [ZERO]
        if all(star(star(x, y), z) == star(x, star(y, z)) for x, y, z in product(elems, repeat=3)):
            found.append(tuple(sorted(zs)))
    return sorted(found, key=lambda p: (len(p), p))


@pytest.mark.parametrize("spec", ["C1", "C2", "C3", "C4", "V4"])
def test_enumeration_matches_table_oracle(spec):
    G = parse_group_spec(spec)
    mods = enumerate_modifications(G)
    assert [S.zero_pairs for S in mods] == modifications_by_table(G)


@pytest.mark.parametrize("spec,count", sorted(MODIFICATION_COUNTS.items()))
def test_modification_counts(spec, count):
    G = parse_group_spec(spec)
    assert len(enumerate_modifications(G)) == count


@pytest.mark.parametrize("spec", ["C4", "V4", "C5"])
def test_search_and_naive_agree(spec):
    G = parse_group_spec(spec)
    a = enumerate_modifications(G, strategy="search")
    b = enumerate_modifications(G, strategy="naive")
    assert [S.zero_pairs for S in a] == [S.zero_pairs for S in b]


def test_small_listings():
    assert [S.zero_pairs for S in enumerate_modifications(cyclic_group(2))] == [(), ((1, 1),)]
    assert enumerate_modifications(cyclic_group(1))[0].is_full


def test_enumeration_bound():
    with pytest.raises(GroupTooLarge):
        enumerate_modifications(cyclic_group(9))
    with pytest.raises(ValueError):
        enumerate_modifications(cyclic_group(2), strategy="guess")


def test_groups():
    for G in (cyclic_group(5), dihedral_group(4), klein_four_group(), parse_group_spec("S3")):
        assert all(G.mul(x, G.inverse(x)) == 0 for x in range(G.order))
        assert FiniteGroup.from_json(G.to_json()) == G
    assert dihedral_group(3).order == 6 and not dihedral_group(3).is_abelian()
    assert cyclic_group(6).element_order(2) == 3
    H, elems = subgroup(cyclic_group(6), [0, 3])
    assert H.order == 2 and elems == (0, 3)


def test_group_from_table_moves_identity():
    # identity of Z/2 placed at index 1
    G = group_from_table([[1, 0], [0, 1]], ["a", "e"])
    assert G.names[0] == "e"
    assert G.mul(1, 1) == 0


def test_group_from_table_errors():
    with pytest.raises(NotLatin):
        group_from_table([[0, 0], [0, 0]])
    with pytest.raises(NoIdentity):
        # x*y = -x-y on Z/3 is a latin square without identity
        group_from_table([[0, 2, 1], [2, 1, 0], [1, 0, 2]])


def test_parse_errors():
    for bad in ["Q8", "C0", "", "C"]:
        with pytest.raises(ValueError):
            parse_group_spec(bad)


def test_construction_errors():
    G = cyclic_group(3)
    with pytest.raises(IdentityPairErased):
        modification_from_zero_set(G, [(0, 1)])
    with pytest.raises(NotAssociative) as exc:
        modification_from_zero_set(G, [(1, 1)])
    assert len(exc.value.witness) == 3
    with pytest.raises(ValueError):
        modification_from_zero_set(G, [(5, 1)])


def test_canonical_modifications():
    G = cyclic_group(4)
    full = canonical_modification(G, "full")
    ann = canonical_modification(G, "annihilator")
    assert full.is_full and len(ann.zero_pairs) == 9
    assert is_preceq(ann, full) and not is_preceq(full, ann)
    assert unit_group(ann).units == (0,)
    assert unit_group(full).units == tuple(range(4))
    with pytest.raises(ValueError):
        canonical_modification(G, "other")


def test_json_round_trip():
    for S in enumerate_modifications(cyclic_group(4)):
        assert Modification.from_json(S.to_json()).zero_pairs == S.zero_pairs


@pytest.fixture(scope="module")
def c4_mods():
    return enumerate_modifications(cyclic_group(4))


def test_every_modification_is_weakly_cancellative(c4_mods):
    assert all(has_weak_cancellation(S) for S in c4_mods)


def test_meet_is_greatest_lower_bound(c4_mods):
    for S, T in product(c4_mods, repeat=2):
        m = meet(S, T)
        assert is_preceq(m, S) and is_preceq(m, T)
        for L in c4_mods:
            if is_preceq(L, S) and is_preceq(L, T):
                assert is_preceq(L, m)


def test_preorder_is_partial_order(c4_mods):
    for S, T in product(c4_mods, repeat=2):
        if is_preceq(S, T) and is_preceq(T, S):
            assert S.zero_pairs == T.zero_pairs


def test_meet_needs_same_group():
    with pytest.raises(GroupMismatch):
        meet(canonical_modification(cyclic_group(2)), canonical_modification(cyclic_group(3)))


@pytest.mark.parametrize("spec", ["C4", "V4", "C6"])
def test_units_and_quotient(spec):
    for S in enumerate_modifications(parse_group_spec(spec)):
        split = unit_group(S)
        assert 0 in split.units
        assert split.ideal[0] == ZERO
        assert set(split.units).isdisjoint(split.nonzero_ideal)
        if not split.nonzero_ideal:
            assert split.nilpotency_index == 1
        assert is_normal_units(S, split)
        q = quotient_by_units(S, split)
        assert q.quotient.order * len(split.units) == S.order
        assert q.project(ZERO) == ZERO
        # the projection respects nonzero products
        for x, y in product(range(S.order), repeat=2):
            xy = S.star(x, y)
            qxy = q.quotient.star(q.project(x), q.project(y))
            assert q.project(xy) == qxy
        # units of S/U are trivial
        assert unit_group(q.quotient).units == (0,)


def test_conjugation_witness():
    S = canonical_modification(cyclic_group(4), "full")
    assert conjugation_witness(S, 1, 2) == 1
    with pytest.raises(ValueError):
        conjugation_witness(S, 1, ZERO)


def test_non_normal_units_in_s3():
    bad = [S for S in enumerate_modifications(parse_group_spec("S3")) if not is_normal_units(S)]
    assert len(bad) == 3
    with pytest.raises(NotNormal):
        quotient_by_units(bad[0])


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_product_of_is_left_fold(data):
    mods = enumerate_modifications(cyclic_group(4))
    S = data.draw(st.sampled_from(mods))
    word = data.draw(st.lists(st.integers(0, 3), min_size=1, max_size=5))
    acc = word[0]
    for w in word[1:]:
        acc = S.star(acc, w)
    assert S.product_of(word) == acc
