import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sigma_forge.catalog import build
from sigma_forge.errors import DomainError, ResourceLimitError
from sigma_forge.groups import FiniteGroup, group_from_permutations, quotient_group
from sigma_forge.subgroups import generated, trivial, whole

from conftest import element


def test_closure_examples():
    assert group_from_permutations(3, [[1, 0, 2], [1, 2, 0]]).order == 6
    assert group_from_permutations(1, []).order == 1
    V = group_from_permutations(4, [[1, 0, 3, 2], [2, 3, 0, 1]])
    assert V.order == 4 and V.exponent() == 2


def test_closure_errors():
    with pytest.raises(DomainError):
        group_from_permutations(3, [[0, 0, 1]])
    with pytest.raises(ResourceLimitError):
        group_from_permutations(6, [[1, 0, 2, 3, 4, 5], [1, 2, 3, 4, 5, 0]], limit=100)


def test_element_orders(s3):
    assert s3.element_order(0) == 1
    assert s3.element_order(element(s3, [1, 0, 2])) == 2
    assert s3.element_order(element(s3, [1, 2, 0])) == 3


def test_conjugate_examples(s3):
    c, t = element(s3, [1, 2, 0]), element(s3, [1, 0, 2])
    assert s3.conjugate(c, 0) == c
    assert s3.conjugate(c, t) == s3.inverse[c]
    C6 = build("C(6)")
    assert all(C6.conjugate(x, g) == x for x in range(6) for g in range(6))


def test_product_convention(s3):
    # left-to-right: (a*b)[i] = b[a[i]]
    a, b = element(s3, [1, 0, 2]), element(s3, [0, 2, 1])
    ab = s3.perms[s3.mul(a, b)]
    assert ab.tolist() == [s3.perms[b][s3.perms[a][i]] for i in range(3)]


def test_quotient_examples(s3):
    Q, hom = quotient_group(s3, trivial(s3))
    assert Q.order == 6 and sorted(Q.element_orders.tolist()) == sorted(s3.element_orders.tolist())
    assert quotient_group(s3, whole(s3))[0].order == 1
    C3 = generated(s3, [element(s3, [1, 2, 0])])
    assert quotient_group(s3, C3)[0].order == 2
    with pytest.raises(DomainError):
        quotient_group(s3, generated(s3, [element(s3, [1, 0, 2])]))


@pytest.mark.parametrize("expr", ["S(4)", "Q8", "D(12)", "SDC(7,3,2)", "A(5)"])
def test_catalog_groups_validate(expr):
    build(expr).validate()


def test_validate_rejects_bad_table():
    t = np.array([[0, 1, 2], [1, 0, 2], [2, 2, 0]])
    with pytest.raises(DomainError):
        FiniteGroup.from_table(t).validate()


G4 = build("S(4)")


@given(st.integers(0, 23), st.integers(0, 23), st.integers(0, 23))
def test_conjugation_composes(x, g, h):
    G = G4
    assert G.conjugate(G.conjugate(x, g), h) == G.conjugate(x, G.mul(g, h))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["S(4)", "D(12)", "A(4)", "SDC(5,2,4)"]), st.data())
def test_quotient_orders_divide(expr, data):
    from sigma_forge.subgroups import normal_subgroups
    G = build(expr)
    N = data.draw(st.sampled_from(normal_subgroups(G)))
    Q, hom = quotient_group(G, N)
    orders = G.element_orders
    assert all(orders[x] % Q.element_orders[hom(x)] == 0 for x in range(G.order))


@pytest.mark.parametrize("expr", ["S(4)", "Q8", "SDC(11,5,3)"])
def test_regular_rep_rebuild(expr):
    G = build(expr)
    H = FiniteGroup.from_table(G.table)
    R = FiniteGroup.from_permutation_list(H.perms)
    assert sorted(R.element_orders.tolist()) == sorted(G.element_orders.tolist())
    assert R.center_size() == G.center_size()


def test_large_group_without_table():
    from sigma_forge.catalog import example12_full
    G, a, b = example12_full()
    assert G.order == 51030 and not G.has_table
    assert G.element_order(a) == 2 and G.element_order(b) == 3
    with pytest.raises(ResourceLimitError):
        G.table
    # the closure of <a> under conjugation by the generators is the dihedral factor of order 10
    seen, frontier = {a}, [a]
    gens = G.lookup(G.perms[[a, b]])  # any elements work as conjugators for a sanity check
    rng = np.random.default_rng(0)
    conjugators = list(gens) + rng.integers(0, G.order, 40).tolist()
    while frontier:
        x = frontier.pop()
        for g in conjugators:
            y = G.conjugate(x, int(g))
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    assert len(generated(G, sorted(seen)).elements) == 10
