import numpy as np
import pytest

import oracles
from helpers import EXTRASPECIAL_27, KLEIN, catalog, from_text, group
from mipkit.algebra import (
    AlgebraElement,
    AlgebraError,
    AlgebraSubspace,
    augmentation_filtration,
    augmentation_ideal,
    augmentation_powers,
    central_augmentation_elements,
    class_sum_ideal,
    derived_ideal_product,
    derived_min_generators_algebra,
    dimension_subgroup,
    ideal_closure,
    ideal_of_normal_subgroup,
    lie_commutator_subspace,
    multiply,
    subspace_product,
    unit_group_class,
)
from mipkit.groups import center, derived_subgroup, generate, subgroup_product
from mipkit.invariants import derived_min_generators, jennings_series

D3 = "<a,b| a^4=1, b^2=1, b^-1*a*b=a^-1>"
C2 = "<a| a^2>"


def e(G, *terms, p=2):
    return AlgebraElement.from_terms(G, dict(terms), p)


def test_multiplication_basics():
    G = from_text(C2)
    a = G.generators[0]
    one_plus_a = e(G, (0, 1), (a, 1))
    assert multiply(one_plus_a, one_plus_a).is_zero()
    x = e(G, (a, 1))
    assert multiply(AlgebraElement.basis(G, 0), x) == x
    K = from_text(KLEIN)
    a, b = K.generators
    prod = multiply(e(K, (0, 1), (a, 1)), e(K, (0, 1), (b, 1)))
    assert set(prod.support()) == {0, a, b, K.mul(a, b)}


def test_multiplication_is_associative_and_matches_naive_convolution():
    G = group("G26", 5)
    rng = np.random.default_rng(1)
    xs = [AlgebraElement(G, rng.integers(0, 2, G.order), 2) for _ in range(3)]
    x, y, z = xs
    assert (x * y) * z == x * (y * z)
    naive = np.zeros(G.order, dtype=np.int64)
    for g in np.flatnonzero(x.coeffs):
        for h in np.flatnonzero(y.coeffs):
            naive[G.mul(int(g), int(h))] += 1
    assert np.array_equal(naive % 2, (x * y).coeffs)


def test_mixing_groups_fails():
    with pytest.raises(AlgebraError):
        multiply(AlgebraElement.basis(from_text(C2), 0), AlgebraElement.basis(from_text(KLEIN), 0))


def test_augmentation_ideal_dimensions():
    assert augmentation_ideal(from_text(C2)).dim == 1
    assert augmentation_ideal(group("G1", 6)).dim == 63
    assert augmentation_ideal(from_text("<a| a^1=1>")).dim == 0


def test_subspace_products():
    C4 = group("C", 2)
    full, delta = augmentation_powers(C4)[:2]
    assert subspace_product(full, delta) == delta
    assert subspace_product(delta, delta).dim == 2
    G = from_text(C2)
    d = augmentation_ideal(G)
    assert subspace_product(d, d).dim == 0


def test_filtrations():
    assert augmentation_filtration(from_text(C2)).dims == [2, 1, 0]
    assert augmentation_filtration(group("C", 2)).dims == [4, 3, 2, 1, 0]
    assert augmentation_filtration(from_text(KLEIN)).dims == [4, 3, 1, 0]
    assert augmentation_filtration(group("C", 2)).nilpotency_index == 4


@pytest.mark.parametrize("fid, m", catalog(5) + [("G2", 6), ("G17", 6)])
def test_filtration_matches_brute_force_products(fid, m):
    G = group(fid, m)
    dims = [len(b) for b, _ in oracles.augmentation_powers(G, 2)]
    assert augmentation_filtration(G).dims == [G.order] + dims


def test_powers_multiply_into_higher_powers():
    G = group("G9", 5)
    P = augmentation_powers(G)
    for a in range(1, 4):
        for b in range(1, 4):
            if a + b < len(P):
                assert subspace_product(P[a], P[b]) <= P[a + b]


def test_dimension_subgroup_examples():
    C4 = group("C", 2)
    assert dimension_subgroup(C4, 2, 1).is_whole()
    assert dimension_subgroup(C4, 2, 2).order == 2
    assert dimension_subgroup(C4, 2, 3).is_trivial()
    G2 = group("G2", 6)
    J = jennings_series(G2, 2)
    assert dimension_subgroup(G2, 2, 2) == J.term(2)
    with pytest.raises(ValueError):
        dimension_subgroup(C4, 2, 0)


@pytest.mark.parametrize("fid, m", catalog(5))
def test_dimension_subgroups_match_brute_force(fid, m):
    G = group(fid, m)
    expected = oracles.dimension_subgroups(G, 2)
    got = [oracles.as_set(dimension_subgroup(G, 2, n)) for n in range(1, len(expected) + 1)]
    assert got == expected


def test_odd_p_dimension_subgroups():
    E = from_text(EXTRASPECIAL_27)
    expected = oracles.dimension_subgroups(E, 3)
    got = [oracles.as_set(dimension_subgroup(E, 3, n)) for n in range(1, len(expected) + 1)]
    assert got == expected
    assert augmentation_filtration(E, 3).dims[:3] == [27, 26, 24]


def test_ideal_of_normal_subgroup():
    D = from_text(D3)
    assert ideal_of_normal_subgroup(D, D.trivial()).dim == 0
    assert ideal_of_normal_subgroup(D, D.whole()).dim == 7
    G2 = group("G2", 6)
    assert ideal_of_normal_subgroup(G2, derived_subgroup(G2)).dim == 56


@pytest.mark.parametrize("fid, m", catalog(6, standard=False) + [("D", 4), ("Q", 5)])
def test_ideal_dimension_formula(fid, m):
    G = group(fid, m)
    for N in (center(G), derived_subgroup(G), jennings_series(G, 2).term(2)):
        assert ideal_of_normal_subgroup(G, N).dim == G.order - G.order // N.order


def test_lie_commutators():
    K = from_text(KLEIN)
    assert lie_commutator_subspace(K).dim == 0
    for G in (from_text(D3), group("Q", 3)):
        I = ideal_closure(lie_commutator_subspace(G))
        assert I.dim == 4 == ideal_of_normal_subgroup(G, derived_subgroup(G)).dim


@pytest.mark.parametrize("fid, m", [("D", 3), ("Q", 3), ("G4", 4), ("G26", 5), ("G12", 5)])
def test_lie_commutators_against_all_pairs(fid, m):
    G = group(fid, m)
    n = G.order
    rows = []
    for g in range(n):
        for h in range(g + 1, n):
            v = np.zeros(n, dtype=np.int64)
            v[G.mul(g, h)] += 1
            v[G.mul(h, g)] -= 1
            rows.append(v)
    brute = AlgebraSubspace.spanned_by(G, 2, np.array(rows))
    assert brute == lie_commutator_subspace(G)
    assert ideal_closure(brute) == ideal_of_normal_subgroup(G, derived_subgroup(G))


def test_class_sum_ideal_examples():
    K = from_text(KLEIN)
    assert class_sum_ideal(K) == augmentation_ideal(K)
    G5 = group("G5", 6)
    ZG = subgroup_product(G5, center(G5), derived_subgroup(G5))
    assert ZG.order == 16 and class_sum_ideal(G5).dim == 60
    D = from_text(D3)
    # Z(D3) G' = <a^2> has order 2, so the ideal has dimension 8 - 4
    assert class_sum_ideal(D).dim == 4


def test_central_elements_commute_with_everything():
    G = group("G22", 6)
    C = central_augmentation_elements(G)
    for v in C.matrix():
        x = AlgebraElement(G, v, 2)
        assert x.augmentation() == 0
        for g in G.generators:
            b = AlgebraElement.basis(G, g)
            assert x * b == b * x


def test_derived_product_against_general_product():
    for fid, m in [("D", 3), ("G17", 5), ("G26", 5), ("G13", 5)]:
        G = group(fid, m)
        D = derived_subgroup(G)
        general = subspace_product(ideal_of_normal_subgroup(G, D), augmentation_ideal(G))
        assert general == derived_ideal_product(G)


def test_derived_generator_counts():
    assert derived_min_generators_algebra(from_text(KLEIN)) == 0
    assert derived_min_generators_algebra(group("G17", 6)) == 2
    assert derived_min_generators_algebra(group("G22", 6)) == 1
    E = from_text(EXTRASPECIAL_27)
    assert derived_min_generators_algebra(E, 3) == derived_min_generators(E, 3) == 1


def test_unit_group_class_examples():
    assert unit_group_class(from_text(C2)) == 1
    assert unit_group_class(from_text(D3)) == 2
    assert unit_group_class(group("Q", 3)) == 2
    assert unit_group_class(from_text(KLEIN)) == 1


def test_unit_group_class_limits():
    with pytest.raises(AlgebraError):
        unit_group_class(group("D", 5))
