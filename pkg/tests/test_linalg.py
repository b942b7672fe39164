import numpy as np
from hypothesis import given, settings, strategies as st

import oracles
from mipkit.linalg import Echelon, pack_bits, pack_rows, unpack_bits


def matrices(p, max_rows=12, max_cols=20):
    return st.integers(1, max_cols).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n),
                           min_size=0, max_size=max_rows).map(lambda rows: (n, rows)))


def oracle_rank(rows, p):
    return len(oracles.span_basis(rows, p)) if rows else 0


@given(st.lists(st.integers(0, 1), min_size=1, max_size=200))
def test_pack_round_trip(bits):
    v = np.array(bits)
    assert np.array_equal(unpack_bits(pack_bits(v), len(bits)), v)
    assert pack_rows(v[None, :]) == [pack_bits(v)]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(st.just(p), matrices(p))))
def test_rank_and_membership_agree_with_dense_elimination(data):
    p, (n, rows) = data
    E = Echelon(p, n)
    E.extend(rows if p != 2 else [pack_bits(np.array(r)) for r in rows])
    assert E.dim == oracle_rank(rows, p)
    basis, piv = oracles._rref_mod(rows, p) if rows else (np.zeros((0, n)), [])
    probe = [(sum(rows[i][j] for i in range(0, len(rows), 2)) + 1) % p for j in range(n)] if rows else [1] * n
    v = probe if p != 2 else pack_bits(np.array(probe))
    assert E.contains(v) == oracles.in_span(basis, piv, probe, p)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3]).flatmap(lambda p: st.tuples(st.just(p), matrices(p))))
def test_rref_is_canonical(data):
    p, (n, rows) = data
    E1, E2 = Echelon(p, n), Echelon(p, n)
    conv = (lambda r: pack_bits(np.array(r))) if p == 2 else (lambda r: r)
    E1.extend([conv(r) for r in rows])
    E2.extend([conv(r) for r in reversed(rows)])
    assert E1.same_span(E2) and E2.same_span(E1)
    R1, R2 = E1.rref(), E2.rref()
    assert np.array_equal(R1, R2)
    if len(R1):
        # every pivot column is a unit vector
        for row in R1:
            c = int(np.flatnonzero(row)[0]) if p != 2 else int(np.flatnonzero(row)[-1])
            assert row[c] == 1 and np.count_nonzero(R1[:, c]) == 1


def test_extend_reports_only_new_rows():
    E = Echelon(3, 3)
    new = E.extend([[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    assert len(new) == 2 and E.dim == 2
    assert E.contains([1, 2, 1]) and not E.contains([0, 1, 0])


def test_copy_is_independent():
    E = Echelon(2, 4)
    E.add(0b0011)
    F = E.copy()
    F.add(0b0100)
    assert E.dim == 1 and F.dim == 2
    assert E.subspace_of(F) and not F.subspace_of(E)
