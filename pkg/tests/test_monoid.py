import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semibrauer.algebra import cyclic_group, modification_from_zero_set
from semibrauer.cohomology import power_module
from semibrauer.errors import ForeignElement, NotComparable
from semibrauer.fields import galois_module, parse_extension
from semibrauer.monoid import (
    MonoidElement,
    build_monoid,
    idempotents,
    multiply,
    verify_clifford,
)


def field_monoid(spec, **kw):
    gm = galois_module(parse_extension(spec))
    return build_monoid(gm.group, gm, **kw)


@pytest.fixture(scope="module")
def m16():
    return field_monoid("2:16")


def test_small_monoid_shape():
    M = field_monoid("2:4")
    assert len(M) == 2
    assert M.element_count() == 2
    assert M.identity() == MonoidElement(0, ())
    assert M.top == 0


def test_idempotents_are_zero_classes(m16):
    for e in idempotents(m16):
        assert multiply(m16, e, e) == e


@pytest.mark.parametrize("spec", ["2:4", "2:8", "3:9"])
def test_clifford_exhaustive(spec):
    report = verify_clifford(field_monoid(spec))
    assert report.mode == "exhaustive"
    assert report.passed, report.violations


def test_clifford_sampled(m16):
    report = verify_clifford(m16, exhaustive_bound=0, samples=500, seed=3)
    assert report.mode == "sampled"
    assert report.triples_checked == 500
    assert report.passed


@pytest.mark.parametrize("d,m,nontrivial", [(3, 3, 1), (4, 2, 5)])
def test_nontrivial_components_with_trivial_coefficients(d, m, nontrivial):
    # several nonzero components, so the restriction maps are not all zero
    M = build_monoid(cyclic_group(d), lambda S: power_module(S, m, 1))
    assert M.nontriviality()["nontrivial_components"] == nontrivial
    report = verify_clifford(M, exhaustive_bound=10**4)
    assert report.mode == "exhaustive" and report.passed


M16 = field_monoid("2:16")


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_product_lives_at_the_meet(data):
    m16 = M16
    elems = list(m16.elements())
    x = data.draw(st.sampled_from(elems))
    y = data.draw(st.sampled_from(elems))
    z = multiply(m16, x, y)
    assert z.modification_id == m16.meet_id(x.modification_id, y.modification_id)
    assert m16.preceq(z.modification_id, x.modification_id)


def test_eps_requires_comparability(m16):
    full, bottom = m16.top, len(m16) - 1
    assert m16.preceq(bottom, full)
    with pytest.raises(NotComparable):
        m16.eps(bottom, full)


def test_foreign_elements(m16):
    with pytest.raises(ForeignElement):
        multiply(m16, MonoidElement(99, ()), m16.identity())
    with pytest.raises(ForeignElement):
        m16.element(0, (1, 2, 3))
    with pytest.raises(ForeignElement):
        m16.index_of(modification_from_zero_set(cyclic_group(3), []))


def test_lazy_and_eager_agree():
    lazy = field_monoid("2:16", eager=False)
    eager = field_monoid("2:16", eager=True)
    assert lazy.to_json() == eager.to_json()


def test_json_export(m16):
    data = m16.to_json()
    assert len(data["components"]) == len(data["modifications"]) == 14
    assert len(data["eps"]) == len(m16.comparable_pairs())
    assert data["summary"]["idempotents"] == 14


# invariant-factor census of the components, recorded once the exact-sequence
# check confirmed each against the quotient side
COMPONENT_CENSUS = {
    "2:8": {(): 4},
    "2:16": {(): 13, (3,): 1},
    "3:81": {(): 11, (2,): 2, (4,): 1},
    "2:64": {(): 249, (3,): 14, (7,): 10, (63,): 10, (63, 63): 1},
}


@pytest.mark.parametrize("spec", sorted(COMPONENT_CENSUS))
def test_component_census(spec):
    M = field_monoid(spec, eager=False)
    census = {}
    for c in M.components:
        key = tuple(c.invariant_factors)
        census[key] = census.get(key, 0) + 1
    assert census == COMPONENT_CENSUS[spec]


def test_monoid_c6_has_one_component_per_modification():
    data = field_monoid("2:64", eager=False).to_json()
    assert len(data["components"]) == 284
    assert data["summary"] == {"idempotents": 284, "nontrivial_components": 35}
