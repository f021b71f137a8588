import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from powgraph.errors import InvalidSpec, TableNotGroup
from powgraph.groups import (
    ALEPH0,
    GroupSpec,
    abelian,
    alternating_group,
    amalgam,
    build_group,
    cyclic,
    cyclic_subgroup,
    dicyclic,
    dihedral,
    dihedral_perm,
    element_order,
    enumerate_elements,
    is_power_member,
    q_subgroup_window,
    quaternion_perm,
    symmetric_group,
    table,
    z_window,
)

FINITE = [
    cyclic(1), cyclic(6), cyclic(12), dihedral(5), dicyclic(3), abelian([2, 4]),
    symmetric_group(4), alternating_group(4), dihedral_perm(4), quaternion_perm(),
]


# -- enumerate_elements ----------------------------------------------------


def test_cyclic_elements_in_order():
    assert enumerate_elements(build_group(cyclic(6))) == [0, 1, 2, 3, 4, 5]


def test_amalgam_radius_two_has_nine_elements():
    # a^i for |i| <= 2 and b^j for |j| <= 2; only b^0 = a^0 merges at this radius
    els = enumerate_elements(build_group(amalgam(2, 3, 2)))
    assert len(els) == 9
    assert els[0] == ("a", 0)
    assert len(set(els)) == 9


def test_amalgam_canonicalizes_b_multiples_of_q():
    g = build_group(amalgam(2, 3, 6))
    assert ("b", 3) not in g
    assert g.power(("b", 1), 3) == ("a", 2)
    assert g.power(("b", 1), -6) == ("a", -4)


def test_dihedral3_has_six_elements():
    assert len(enumerate_elements(build_group(dihedral(3)))) == 6


@pytest.mark.parametrize("spec", FINITE, ids=lambda s: s.label)
def test_identity_first(spec):
    g = build_group(spec)
    e = g.elements[0]
    assert all(g.mul(e, x) == x == g.mul(x, e) for x in g.elements)


def test_table_not_group():
    bad = [[0, 1, 2], [1, 0, 2], [2, 2, 0]]
    with pytest.raises(TableNotGroup):
        build_group(table(bad))
    nonassoc = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(TableNotGroup):
        build_group(table(nonassoc))


def test_table_identity_moved_to_front():
    # Z3 written with identity at position 2
    rows = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
    g = build_group(table(rows))
    assert g.elements[0] == 2
    assert element_order(g, 0) == 3


# -- element_order -----------------------------------------------------------


def test_element_order_examples():
    assert element_order(build_group(cyclic(6)), 2) == 3
    assert element_order(build_group(z_window(30)), 5) is ALEPH0
    g = build_group(dicyclic(3))
    assert element_order(g, g.parse("x")) == 4


@pytest.mark.parametrize("spec", FINITE, ids=lambda s: s.label)
def test_lagrange(spec):
    g = build_group(spec)
    assert all(len(g) % element_order(g, x) == 0 for x in g.elements)


def test_aleph0_arithmetic():
    assert ALEPH0 > 10**30
    assert ALEPH0 - 7 is ALEPH0
    assert not (ALEPH0 < 5)
    assert str(ALEPH0) == "aleph0"


# -- cyclic_subgroup ---------------------------------------------------------


def test_cyclic_subgroup_examples():
    assert cyclic_subgroup(build_group(cyclic(12)), 4).elements == {0, 4, 8}
    sub = cyclic_subgroup(build_group(z_window(30)), 7)
    assert sub.elements == {0, 7, -7, 14, -14, 21, -21, 28, -28}
    assert sub.truncated
    g = build_group(amalgam(2, 3, 6))
    got = cyclic_subgroup(g, ("a", 2)).elements
    assert got == {("a", k) for k in (0, 2, -2, 4, -4, 6, -6)}


@pytest.mark.parametrize("spec", FINITE, ids=lambda s: s.label)
def test_subgroup_of_inverse(spec):
    g = build_group(spec)
    for x in g.elements:
        assert cyclic_subgroup(g, x).elements == cyclic_subgroup(g, g.inverse(x)).elements


# -- is_power_member ---------------------------------------------------------


def test_is_power_member_examples():
    assert is_power_member(build_group(z_window(30)), 4, 12)
    g = build_group(amalgam(2, 3, 9))
    assert not is_power_member(g, ("a", 1), ("b", 1))
    for spec in (cyclic(5), z_window(5), amalgam(2, 3, 4)):
        m = build_group(spec)
        e = m.identity
        assert is_power_member(m, e, e)
        assert not any(is_power_member(m, e, y) for y in m.elements[1:])


@pytest.mark.parametrize("spec", FINITE[:6], ids=lambda s: s.label)
def test_membership_transitive(spec):
    g = build_group(spec)
    els = g.elements
    mem = np.array([[g.contains(x, y) for y in els] for x in els])
    assert mem.diagonal().all()
    # y in <x> and z in <y> gives z in <x>
    two_step = (mem.astype(int) @ mem.astype(int)) > 0
    assert not (two_step & ~mem).any()


@given(st.integers(1, 4), st.integers(-2, 2), st.integers(-2, 2))
def test_amalgam_identification(k, m, sign):
    p, q = 2, 3
    g = build_group(amalgam(p, q, 40))
    ak = g.canon("a", p * k)
    bq = g.canon("b", q * k * m) if m else g.identity
    if bq in g and m:
        assert is_power_member(g, ak, bq)
    assert g.canon("b", q * k) == ak


def test_window_membership_is_arithmetic():
    g = build_group(z_window(10))
    # 30 is outside the window but membership is still decided exactly
    assert g.contains(3, 30)
    q = build_group(q_subgroup_window({2: 2, 3: 1}, 48))
    assert q.contains(Fraction(1, 12), Fraction(1, 4))
    assert not q.contains(Fraction(1, 4), Fraction(1, 12))


# -- specs -------------------------------------------------------------------


@pytest.mark.parametrize(
    "spec",
    [cyclic(6), dihedral(9), dicyclic(3), abelian([2, 6]), quaternion_perm(), z_window(30),
     q_subgroup_window({2: 2, 3: 1}, 48), amalgam(2, 3, 24), table([[0, 1], [1, 0]])],
    ids=lambda s: s.label,
)
def test_spec_json_roundtrip_is_byte_stable(spec):
    text = spec.to_json()
    again = GroupSpec.from_json(text)
    assert again == spec
    assert again.to_json() == text


@pytest.mark.parametrize(
    "bad",
    [
        '{"kind": "cyclic"}',
        '{"kind": "cyclic", "n": 0}',
        '{"kind": "dihedral", "n": -1}',
        '{"kind": "amalgam", "p": 1, "q": 3, "N": 4}',
        '{"kind": "permutation", "degree": 3, "generators": [[0, 0, 1]]}',
        '{"kind": "nope"}',
        "not json",
        "[1, 2]",
    ],
)
def test_invalid_specs(bad):
    with pytest.raises(InvalidSpec):
        build_group(GroupSpec.from_json(bad))


def test_named_permutation_groups():
    orders = {s.label: len(build_group(s)) for s in (symmetric_group(3), symmetric_group(4), alternating_group(4), alternating_group(5), dihedral_perm(4), quaternion_perm())}
    assert orders == {"S3": 6, "S4": 24, "A4": 12, "A5": 60, "D4": 8, "Q8": 8}
    q8 = build_group(quaternion_perm())
    assert sorted(element_order(q8, x) for x in q8.elements) == [1, 2, 4, 4, 4, 4, 4, 4]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(FINITE), st.data())
def test_power_is_repeated_multiplication(spec, data):
    g = build_group(spec)
    x = data.draw(st.sampled_from(g.elements))
    n = data.draw(st.integers(-7, 7))
    y = g.identity
    step = x if n >= 0 else g.inverse(x)
    for _ in range(abs(n)):
        y = g.mul(y, step)
    assert g.power(x, n) == y
