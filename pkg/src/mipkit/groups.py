"""Concrete finite groups on indices ``0..n-1`` with element 0 the identity.

Groups come out of coset enumeration as multiplication tables; subgroups are
boolean masks over the parent's elements.  Every closure below is a
breadth-first search driven by table lookups, vectorised with numpy.
"""

from __future__ import annotations

import struct
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .presentation import Presentation, Word
from .toddcoxeter import enumerate_cosets

__all__ = [
    "GroupError",
    "FiniteGroup",
    "Subgroup",
    "realize",
    "element_order",
    "exponent",
    "center",
    "commutator_subgroup",
    "derived_subgroup",
    "power_subgroup",
    "quotient",
    "abelian_invariants",
    "is_cyclic",
    "conjugacy_classes",
    "normal_closure",
    "subgroup_product",
    "intersection",
    "frattini_subgroup",
    "min_generators",
    "prime_power_exponent",
    "save_table",
    "load_table",
]

TABLE_LIMIT = 4096
DEFAULT_MAX_COSETS = 1 << 16


class GroupError(ValueError):
    pass


def _factor(n: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power_exponent(n: int, p: int) -> Optional[int]:
    """Return ``k`` with ``n == p**k``, or None."""
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k if n == 1 else None


class FiniteGroup:
    """A finite group given by a multiplication table on ``0..order-1``.

    ``generators`` holds the indices of the presentation's generator images.
    Above ``TABLE_LIMIT`` elements only the generator permutations are kept
    and products are formed from cached regular-representation columns.
    """

    def __init__(self, table: Optional[np.ndarray], generators: Sequence[int],
                 names: Optional[Sequence[str]] = None, name: str = "",
                 columns: Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]] = None):
        self._table = table
        self.generators: Tuple[int, ...] = tuple(int(g) for g in generators)
        self.names = list(names) if names is not None else [f"x{k}" for k in range(len(self.generators))]
        self.name = name
        self.projection: Optional[np.ndarray] = None
        self._columns = columns
        self._column_cache: Dict[int, np.ndarray] = {}
        if table is not None:
            self.order = int(table.shape[0])
        else:
            self.order = int(columns[0].shape[0])

    def __repr__(self):
        label = self.name or "FiniteGroup"
        return f"<{label} of order {self.order}>"

    def __len__(self):
        return self.order

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            raise GroupError(
                f"group of order {self.order} has no stored multiplication table "
                f"(limit {TABLE_LIMIT})")
        return self._table

    @property
    def has_table(self) -> bool:
        return self._table is not None

    def column(self, j: int) -> np.ndarray:
        """Right multiplication by element ``j`` as an index array."""
        if self._table is not None:
            return self._table[:, j]
        cache = self._column_cache
        if j in cache:
            return cache[j]
        parent, letter, perms = self._columns
        # walk up the spanning tree to the nearest cached ancestor
        path = []
        k = j
        while k not in cache and k != 0:
            path.append(k)
            k = int(parent[k])
        col = cache[k] if k in cache else np.arange(self.order)
        for k in reversed(path):
            col = perms[letter[k]][col]
            cache[k] = col
        return col

    def mul(self, i: int, j: int) -> int:
        if self._table is not None:
            return int(self._table[i, j])
        return int(self.column(j)[i])

    @cached_property
    def inverse(self) -> np.ndarray:
        if self._table is not None:
            rows, cols = np.nonzero(self._table == 0)
            inv = np.empty(self.order, dtype=np.int64)
            inv[rows] = cols
            return inv
        inv = np.empty(self.order, dtype=np.int64)
        for j in range(self.order):
            col = self.column(j)
            inv[j] = int(np.flatnonzero(col == 0)[0])
        return inv

    def inv(self, i: int) -> int:
        return int(self.inverse[i])

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv(x), -k
        result, base = 0, x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def powers(self, xs: np.ndarray, k: int) -> np.ndarray:
        """Vectorised ``x**k`` for an index array (needs the table)."""
        t = self.table
        result = np.zeros_like(xs)
        base = xs.copy()
        while k:
            if k & 1:
                result = t[result, base]
            base = t[base, base]
            k >>= 1
        return result

    def commutator(self, x: int, y: int) -> int:
        inv = self.inverse
        return self.mul(self.mul(int(inv[x]), int(inv[y])), self.mul(x, y))

    def evaluate(self, word: Word) -> int:
        result = 0
        for gen, exp in word.syllables:
            result = self.mul(result, self.power(self.generators[gen], exp))
        return result

    @cached_property
    def element_orders(self) -> np.ndarray:
        t = self.table
        orders = np.zeros(self.order, dtype=np.int64)
        orders[0] = 1
        k = 1
        pending = np.arange(1, self.order)
        cur = pending.copy()
        while pending.size:
            k += 1
            cur = t[cur, pending]
            done = cur == 0
            orders[pending[done]] = k
            pending = pending[~done]
            cur = cur[~done]
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        gens = list(self.generators)
        return bool(np.array_equal(t[np.ix_(gens, gens)], t[np.ix_(gens, gens)].T))

    def whole(self) -> "Subgroup":
        return Subgroup(self, np.ones(self.order, dtype=bool), self.generators)

    def trivial(self) -> "Subgroup":
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        return Subgroup(self, mask, ())

    def subgroup(self, elements: Iterable[int]) -> "Subgroup":
        """Subgroup generated by ``elements``."""
        return generate(self, elements)

    def check_axioms(self, exhaustive_limit: int = 256, samples: int = 20000,
                     seed: int = 0) -> None:
        """Assert group axioms on the table; raises AssertionError."""
        t = self.table
        n = self.order
        idx = np.arange(n)
        assert np.array_equal(t[0], idx) and np.array_equal(t[:, 0], idx), "identity law"
        assert np.all(t[idx, self.inverse] == 0), "inverse law"
        for row in t:
            assert np.unique(row).size == n, "rows must be permutations"
        if n <= exhaustive_limit:
            lhs = t[t[:, :, None], idx[None, None, :]]
            rhs = t[idx[:, None, None], t[None, :, :]]
            assert np.array_equal(lhs, rhs), "associativity"
        else:
            rng = np.random.default_rng(seed)
            a, b, c = rng.integers(0, n, size=(3, samples))
            assert np.array_equal(t[t[a, b], c], t[a, t[b, c]]), "associativity"
        assert generate(self, self.generators).order == n, "generators must generate"

    @classmethod
    def from_table(cls, table: np.ndarray, generators: Sequence[int], **kw) -> "FiniteGroup":
        return cls(np.ascontiguousarray(table, dtype=np.int64), generators, **kw)


class Subgroup:
    """Elements of ``parent`` selected by a boolean mask."""

    def __init__(self, parent: FiniteGroup, mask: np.ndarray, generators: Sequence[int] = ()):
        self.parent = parent
        self.mask = mask
        self.mask.flags.writeable = False
        self.generators = tuple(int(g) for g in generators)
        self.order = int(mask.sum())
        if parent.order % self.order:
            raise GroupError(f"subgroup order {self.order} does not divide {parent.order}")
        if not mask[0]:
            raise GroupError("subgroup must contain the identity")

    def __repr__(self):
        return f"<Subgroup of order {self.order} in {self.parent!r}>"

    def __len__(self):
        return self.order

    def __contains__(self, x) -> bool:
        return bool(self.mask[x])

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash((id(self.parent), self.mask.tobytes()))

    def __le__(self, other: "Subgroup") -> bool:
        return bool(np.all(other.mask[self.mask]))

    @cached_property
    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def is_abelian(self) -> bool:
        t = self.parent.table
        gens = list(self.generators) or [0]
        block = t[np.ix_(gens, gens)]
        return bool(np.array_equal(block, block.T))

    def is_normal(self) -> bool:
        G = self.parent
        t, inv = G.table, G.inverse
        h = self.elements
        for g in G.generators:
            if not np.all(self.mask[t[t[inv[g], h], g]]):
                return False
        return True

    def is_closed(self) -> bool:
        t = self.parent.table
        h = self.elements
        return bool(np.all(self.mask[t[np.ix_(h, h)]]) and np.all(self.mask[self.parent.inverse[h]]))

    def as_group(self, name: str = "") -> FiniteGroup:
        """The subgroup as a standalone group; element ``k`` is ``elements[k]``."""
        e = self.elements
        index = np.full(self.parent.order, -1, dtype=np.int64)
        index[e] = np.arange(e.size)
        table = index[self.parent.table[np.ix_(e, e)]]
        gens = [int(index[g]) for g in self.generators]
        H = FiniteGroup.from_table(table, gens, name=name or f"subgroup({self.parent.name})")
        H.projection = e
        return H


def _extend(G: FiniteGroup, mask: np.ndarray, gens: List[int]) -> np.ndarray:
    """Close ``mask`` (already a subgroup) under right multiplication by ``gens``."""
    t = G.table
    g = np.asarray(gens, dtype=np.int64)
    frontier = np.flatnonzero(mask)
    while frontier.size:
        prods = t[frontier][:, g].ravel()
        prods = np.unique(prods[~mask[prods]])
        mask[prods] = True
        frontier = prods
    return mask


def generate(G: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    """Subgroup generated by ``elements``, keeping a small generating set."""
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    gens: List[int] = []
    for x in elements:
        x = int(x)
        if mask[x]:
            continue
        gens.append(x)
        mask = _extend(G, mask, gens)
    return Subgroup(G, mask, gens)


def _generate_from(G: FiniteGroup, base: Subgroup, extra: np.ndarray) -> Subgroup:
    mask = base.mask.copy()
    gens = list(base.generators)
    for x in np.unique(extra):
        x = int(x)
        if mask[x]:
            continue
        gens.append(x)
        mask = _extend(G, mask, gens)
    return Subgroup(G, mask, gens)


def realize(p: Presentation, max_cosets: int = DEFAULT_MAX_COSETS, name: str = "") -> FiniteGroup:
    """Realize the group presented by ``p`` via its regular representation."""
    rows = enumerate_cosets(p, max_cosets).rows
    n = rows.shape[0]
    ncols = rows.shape[1]
    perms = [rows[:, x].copy() for x in range(ncols)]
    # spanning tree of the standardized table: parent[j] * letter[j] == j
    parent = np.full(n, -1, dtype=np.int64)
    letter = np.full(n, -1, dtype=np.int64)
    parent[0] = 0
    queue = [0]
    for c in queue:
        for x in range(ncols):
            d = int(rows[c, x])
            if parent[d] < 0:
                parent[d] = c
                letter[d] = x
                queue.append(d)
    gens = [int(rows[0, 2 * k]) for k in range(len(p.generators))]
    if n <= TABLE_LIMIT:
        table = np.empty((n, n), dtype=np.int64)
        table[:, 0] = np.arange(n)
        for j in queue[1:]:
            table[:, j] = perms[letter[j]][table[:, parent[j]]]
        G = FiniteGroup.from_table(table, gens, names=p.names, name=name)
    else:
        G = FiniteGroup(None, gens, names=p.names, name=name, columns=(parent, letter, perms))
    for rel in p.relations:
        if G.evaluate(rel.lhs) != G.evaluate(rel.rhs):
            raise GroupError("realized group violates a defining relation")
    return G


def element_order(G: FiniteGroup, x: int) -> int:
    if G.has_table:
        return int(G.element_orders[x])
    k, y = 1, x
    while y != 0:
        y = G.mul(y, x)
        k += 1
    return k


def exponent(G: FiniteGroup) -> int:
    return int(np.lcm.reduce(G.element_orders))


def center(G: FiniteGroup) -> Subgroup:
    t = G.table
    gens = list(G.generators)
    mask = np.all(t[:, gens] == t[gens, :].T, axis=1)
    return Subgroup(G, mask, _small_generating_set(G, np.flatnonzero(mask)))


def _small_generating_set(G: FiniteGroup, elements: np.ndarray) -> List[int]:
    return list(generate(G, elements).generators)


def normal_closure(G: FiniteGroup, H: Subgroup) -> Subgroup:
    t, inv = G.table, G.inverse
    while True:
        h = H.elements
        conj = np.concatenate([t[t[inv[g], h], g] for g in G.generators]) if G.generators else h
        new = conj[~H.mask[conj]]
        if new.size == 0:
            return H
        H = _generate_from(G, H, new)


def commutator_subgroup(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    """``[A, B]``: normal closure of all commutators ``[x, y]``, x in A, y in B."""
    t, inv = G.table, G.inverse
    a = A.elements
    b = B.elements
    comms = t[t[inv[a][:, None], inv[b][None, :]], t[a[:, None], b[None, :]]]
    H = _generate_from(G, G.trivial(), comms.ravel())
    return normal_closure(G, H)


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    W = G.whole()
    return commutator_subgroup(G, W, W)


def power_subgroup(G: FiniteGroup, A: Subgroup, p: int) -> Subgroup:
    """Subgroup generated by ``{x**p : x in A}``."""
    return _generate_from(G, G.trivial(), G.powers(A.elements, p))


def subgroup_product(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    """Subgroup generated by ``A`` and ``B`` (their product when one is normal)."""
    return _generate_from(G, A, np.asarray(B.generators or [0], dtype=np.int64))


def intersection(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    mask = A.mask & B.mask
    return Subgroup(G, mask, _small_generating_set(G, np.flatnonzero(mask)))


def frattini_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    """``G' G^p``, the Frattini subgroup of a finite p-group."""
    return subgroup_product(G, derived_subgroup(G), power_subgroup(G, G.whole(), p))


def min_generators(G: FiniteGroup, p: int) -> int:
    """Minimal number of generators of a p-group: rank of ``G / Phi(G)``."""
    k = prime_power_exponent(G.order // frattini_subgroup(G, p).order, p)
    return int(k)


def quotient(G: FiniteGroup, N: Subgroup) -> FiniteGroup:
    """``G / N``; the result's ``projection`` maps elements of G to cosets."""
    if not N.is_normal():
        raise GroupError("quotient by a subgroup that is not normal")
    t = G.table
    labels = np.full(G.order, -1, dtype=np.int64)
    reps = []
    n_elems = N.elements
    for g in range(G.order):
        if labels[g] < 0:
            labels[t[g, n_elems]] = len(reps)
            reps.append(g)
    reps_arr = np.asarray(reps, dtype=np.int64)
    table = labels[t[np.ix_(reps_arr, reps_arr)]]
    gens = [int(labels[g]) for g in G.generators]
    Q = FiniteGroup.from_table(table, gens, names=G.names, name=f"{G.name}/N" if G.name else "")
    Q.projection = labels
    return Q


def _as_group(A: Union[Subgroup, FiniteGroup]) -> FiniteGroup:
    return A.as_group() if isinstance(A, Subgroup) else A


def abelian_invariants(A: Union[Subgroup, FiniteGroup]) -> List[int]:
    """Elementary divisors (prime powers, descending) of an abelian group.

    Repeatedly splits off the cyclic subgroup of an element of maximal order,
    which is always a direct factor, and recurses on the quotient.
    """
    H = _as_group(A)
    if not H.is_abelian:
        raise GroupError("abelian_invariants needs an abelian group")
    divisors: List[int] = []
    while H.order > 1:
        orders = H.element_orders
        x = int(np.argmax(orders))
        for q, e in _factor(int(orders[x])).items():
            divisors.append(q ** e)
        H = quotient(H, generate(H, [x]))
    return sorted(divisors, reverse=True)


def is_cyclic(A: Union[Subgroup, FiniteGroup]) -> bool:
    if isinstance(A, Subgroup):
        orders = A.parent.element_orders[A.elements]
    else:
        orders = A.element_orders
    return bool(np.any(orders == A.order))


def conjugacy_classes(G: FiniteGroup) -> List[List[int]]:
    """Classes as sorted index lists, ordered by smallest member."""
    t, inv = G.table, G.inverse
    conj = [t[t[inv[g]], g] for g in G.generators]
    label = np.full(G.order, -1, dtype=np.int64)
    classes = []
    for x in range(G.order):
        if label[x] >= 0:
            continue
        k = len(classes)
        label[x] = k
        orbit = [x]
        for y in orbit:
            for c in conj:
                z = int(c[y])
                if label[z] < 0:
                    label[z] = k
                    orbit.append(z)
        classes.append(sorted(orbit))
    return classes


_MAGIC = b"MIPK"
_VERSION = 1


def save_table(G: FiniteGroup, path: Union[str, Path]) -> None:
    """Write the multiplication table in the ``MIPK`` binary format.

    Header ``MIPK``, version u16, order u32, then row-major u16 entries, all
    little-endian.  A trailer of u16 count plus u16 generator images follows
    the table so the group can be restored without re-enumeration.
    """
    n = G.order
    if n > 65535:
        raise GroupError("MIPK tables address at most 65535 elements")
    with open(path, "wb") as fh:
        fh.write(_MAGIC + struct.pack("<HI", _VERSION, n))
        fh.write(G.table.astype("<u2").tobytes())
        fh.write(struct.pack(f"<H{len(G.generators)}H", len(G.generators), *G.generators))


def load_table(path: Union[str, Path], names: Optional[Sequence[str]] = None, name: str = "") -> FiniteGroup:
    data = Path(path).read_bytes()
    if data[:4] != _MAGIC:
        raise GroupError(f"{path}: not a MIPK table")
    version, n = struct.unpack_from("<HI", data, 4)
    if version != _VERSION:
        raise GroupError(f"{path}: unsupported MIPK version {version}")
    start = 10
    end = start + 2 * n * n
    table = np.frombuffer(data[start:end], dtype="<u2").reshape(n, n).astype(np.int64)
    (k,) = struct.unpack_from("<H", data, end)
    gens = struct.unpack_from(f"<{k}H", data, end + 2)
    return FiniteGroup.from_table(table, gens, names=names, name=name)
