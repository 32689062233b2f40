import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semibrauer.algebra import cyclic_group, enumerate_modifications, canonical_modification, unit_group
from semibrauer.cohomology import cohomology, group_cohomology
from semibrauer.errors import NotDivisible, NotPrime, ParseError, TooLarge
from semibrauer.fields import (
    ConcreteField,
    concrete_field,
    crosscheck_frobenius,
    extension,
    fixed_data,
    galois_module,
    galois_quotient,
    is_prime,
    parse_extension,
    unit_subgroup,
)


def test_is_prime():
    assert [k for k in range(30) if is_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_parse_extension_forms():
    e = parse_extension("4:16")
    assert (e.p, e.m, e.n, e.d, e.q) == (2, 2, 4, 2, 16)
    assert parse_extension("p=2,m=2,n=4") == e
    assert parse_extension(" 2 : 8 ").label == "2:8"
    assert parse_extension("3:3").d == 1


@pytest.mark.parametrize(
    "spec,err",
    [
        ("6:36", ParseError),
        ("2:27", ParseError),
        ("4:8", NotDivisible),
        ("2:131072", TooLarge),
        ("p=4,m=1,n=2", NotPrime),
        ("banana", ParseError),
        ("1:2", ParseError),
    ],
)
def test_parse_extension_errors(spec, err):
    with pytest.raises(err):
        parse_extension(spec)


def test_galois_module():
    gm = galois_module(parse_extension("2:16"))
    assert gm.orders == (15,)
    assert gm.multiplier == 2
    assert gm.group.order == 4
    S = canonical_modification(gm.group)
    M = gm(S)
    assert [M.act(k, (1,)) for k in range(4)] == [(1,), (2,), (4,), (8,)]
    with pytest.raises(ValueError):
        gm.module_for(canonical_modification(cyclic_group(3)))


def test_degenerate_extension_f2():
    gm = galois_module(parse_extension("2:2"))
    assert gm.orders == (1,)
    S = canonical_modification(gm.group)
    assert cohomology(gm(S), 2).is_trivial()


def test_unit_subgroup():
    assert unit_subgroup(6, 3) == (0, 2, 4)
    assert unit_subgroup(6, 1) == (0,)
    with pytest.raises(NotDivisible):
        unit_subgroup(6, 4)


@pytest.mark.parametrize("spec", ["2:16", "2:64", "3:81", "4:256", "5:625"])
def test_fixed_field_orders(spec):
    e = parse_extension(spec)
    for u in range(1, e.d + 1):
        if e.d % u == 0:
            data = fixed_data(e, u)
            assert data.P_order == e.p ** (e.n // u) - 1
            assert data.P_order * data.embedding_index == e.q - 1
            # multiples of the index are exactly the elements fixed by the subgroup
            fx = data.fixed_submodule()
            assert fx.embed((1,), (e.q - 1,)) == (data.embedding_index % (e.q - 1),)


def test_galois_quotient_module():
    e = parse_extension("2:16")
    for S in enumerate_modifications(galois_module(e).group):
        q, qm, data = galois_quotient(e, S)
        assert qm.semigroup == q.quotient
        assert qm.orders == (data.P_order,)
        assert data.subgroup_order == len(unit_group(S).units)


@pytest.mark.parametrize("spec", ["2:4", "2:8", "2:16", "4:16", "3:9", "3:27", "5:25"])
def test_hilbert_90_and_brauer_triviality(spec):
    e = parse_extension(spec)
    for u in range(1, e.d + 1):
        if e.d % u:
            continue
        step = e.d // u
        action = lambda k: pow(e.p, e.m * step * k, e.q - 1)
        assert group_cohomology(cyclic_group(u), (e.q - 1,), action, 1).is_trivial()
        assert group_cohomology(cyclic_group(u), (e.q - 1,), action, 2).is_trivial()


def test_concrete_field_small():
    F = concrete_field(2, 2)
    assert F.modulus == (1, 1, 1)  # x^2 + x + 1
    assert sorted(F.dlog.values()) == [0, 1, 2]
    assert F.mul(2, 2) == 3  # x * x = x + 1
    with pytest.raises(TooLarge):
        concrete_field(2, 20)
    with pytest.raises(NotPrime):
        concrete_field(9, 1)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([(2, 3), (3, 2), (2, 4), (5, 2)]), st.data())
def test_concrete_field_is_a_field(pn, data):
    F = concrete_field(*pn)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(a, b) == F.mul(b, a)
    if a:
        assert F.pow(a, F.q - 1) == 1
    assert F.pow(F.add(a, b), F.p) == F.add(F.pow(a, F.p), F.pow(b, F.p))


@pytest.mark.parametrize("spec", ["2:4", "2:16", "4:16", "3:9", "2:64"])
def test_crosscheck_frobenius(spec):
    assert crosscheck_frobenius(parse_extension(spec))


def test_concrete_field_rejects_reducible_modulus():
    with pytest.raises(AssertionError):
        ConcreteField(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2
