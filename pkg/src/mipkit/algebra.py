"""The modular group algebra F_p G as exact linear algebra.

Elements are coefficient vectors indexed by group elements.  Multiplying by
a group element permutes coordinates, so one-sided ideals are spanned by
translates of a few vectors and every computation below reduces to feeding
such translates into an :class:`~mipkit.linalg.Echelon`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence

import numpy as np

from .groups import (
    FiniteGroup,
    GroupError,
    Subgroup,
    center,
    conjugacy_classes,
    derived_subgroup,
    generate,
    prime_power_exponent,
    subgroup_product,
)
from .linalg import Echelon, pack_rows, unpack_bits

__all__ = [
    "AlgebraElement",
    "AlgebraSubspace",
    "AugmentationFiltration",
    "multiply",
    "augmentation_ideal",
    "subspace_product",
    "augmentation_powers",
    "augmentation_filtration",
    "dimension_subgroup",
    "ideal_of_normal_subgroup",
    "lie_commutator_subspace",
    "ideal_closure",
    "central_augmentation_elements",
    "class_sum_ideal",
    "derived_ideal_product",
    "derived_min_generators_algebra",
    "unit_group_class",
]


class AlgebraError(ValueError):
    pass


@dataclass
class AlgebraElement:
    group: FiniteGroup
    coeffs: np.ndarray
    p: int = 2

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.int64) % self.p

    @classmethod
    def basis(cls, G: FiniteGroup, g: int, p: int = 2) -> "AlgebraElement":
        v = np.zeros(G.order, dtype=np.int64)
        v[g] = 1
        return cls(G, v, p)

    @classmethod
    def from_terms(cls, G: FiniteGroup, terms: dict, p: int = 2) -> "AlgebraElement":
        v = np.zeros(G.order, dtype=np.int64)
        for g, c in terms.items():
            v[g] += c
        return cls(G, v, p)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_same(self, other)
        return AlgebraElement(self.group, self.coeffs + other.coeffs, self.p)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_same(self, other)
        return AlgebraElement(self.group, self.coeffs - other.coeffs, self.p)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self, other)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.group is other.group and self.p == other.p and np.array_equal(self.coeffs, other.coeffs)

    def augmentation(self) -> int:
        return int(self.coeffs.sum() % self.p)

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def support(self) -> List[int]:
        return np.flatnonzero(self.coeffs).tolist()


def _check_same(x: AlgebraElement, y: AlgebraElement) -> None:
    if x.group is not y.group or x.p != y.p:
        raise AlgebraError("algebra elements live in different group algebras")


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Convolution ``sum x_g y_h (gh)`` reduced mod p."""
    _check_same(x, y)
    sx = np.flatnonzero(x.coeffs)
    sy = np.flatnonzero(y.coeffs)
    prods = x.group.table[np.ix_(sx, sy)].ravel()
    weights = np.outer(x.coeffs[sx], y.coeffs[sy]).ravel()
    out = np.bincount(prods, weights=weights, minlength=x.group.order).astype(np.int64)
    return AlgebraElement(x.group, out, x.p)


def _left(G: FiniteGroup, V: np.ndarray, y: int) -> np.ndarray:
    """Rows of ``V`` multiplied on the left by group element ``y``."""
    return V[:, G.table[G.inverse[y], :]]


def _right(G: FiniteGroup, V: np.ndarray, y: int) -> np.ndarray:
    return V[:, G.table[:, G.inverse[y]]]


class AlgebraSubspace:
    """A subspace of F_p G held as an echelon basis."""

    def __init__(self, group: FiniteGroup, p: int, echelon: Echelon = None):
        self.group = group
        self.p = p
        self.echelon = echelon if echelon is not None else Echelon(p, group.order)

    @classmethod
    def spanned_by(cls, G: FiniteGroup, p: int, rows: np.ndarray) -> "AlgebraSubspace":
        S = cls(G, p)
        S.add_rows(rows)
        return S

    def add_rows(self, rows: np.ndarray) -> np.ndarray:
        """Add the rows of a coefficient matrix; return the new basis rows."""
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.group.order) % self.p
        if self.p == 2:
            added = self.echelon.extend(pack_rows(rows))
        else:
            added = self.echelon.extend(rows)
        return self._as_matrix(added)

    def _as_matrix(self, vecs: Sequence) -> np.ndarray:
        n = self.group.order
        if not len(vecs):
            return np.zeros((0, n), dtype=np.int64)
        if self.p == 2:
            return np.array([unpack_bits(v, n) for v in vecs], dtype=np.int64)
        return np.array(vecs, dtype=np.int64)

    @property
    def dim(self) -> int:
        return self.echelon.dim

    def matrix(self) -> np.ndarray:
        """Current (echelon) basis rows as a coefficient matrix."""
        return self._as_matrix(self.echelon.vectors())

    def rref(self) -> np.ndarray:
        return self.echelon.rref()

    def contains(self, v) -> bool:
        if isinstance(v, AlgebraElement):
            v = v.coeffs
        v = np.asarray(v, dtype=np.int64) % self.p
        return self.echelon.contains(pack_rows(v[None, :])[0] if self.p == 2 else v)

    def __le__(self, other: "AlgebraSubspace") -> bool:
        return self.echelon.subspace_of(other.echelon)

    def __eq__(self, other):
        if not isinstance(other, AlgebraSubspace):
            return NotImplemented
        return self.group is other.group and self.p == other.p and self.echelon.same_span(other.echelon)

    def __repr__(self):
        return f"<AlgebraSubspace dim={self.dim} in F_{self.p}[{self.group!r}]>"


def _check_parent(U: AlgebraSubspace, V: AlgebraSubspace) -> None:
    if U.group is not V.group or U.p != V.p:
        raise AlgebraError("subspaces live in different group algebras")


def _differences(G: FiniteGroup, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Rows ``e_a[i] - e_b[i]``."""
    rows = np.zeros((len(a), G.order), dtype=np.int64)
    idx = np.arange(len(a))
    rows[idx, a] += 1
    rows[idx, b] -= 1
    return rows


def augmentation_ideal(G: FiniteGroup, p: int = 2) -> AlgebraSubspace:
    """Span of ``g - 1`` for ``g != 1``."""
    others = np.arange(1, G.order)
    return AlgebraSubspace.spanned_by(G, p, _differences(G, others, np.zeros_like(others)))


def subspace_product(U: AlgebraSubspace, V: AlgebraSubspace) -> AlgebraSubspace:
    """Span of all products ``u v`` of basis vectors."""
    _check_parent(U, V)
    G, p = U.group, U.p
    Vm = V.matrix()
    out = AlgebraSubspace(G, p)
    for u in U.matrix():
        acc = np.zeros_like(Vm)
        for g in np.flatnonzero(u):
            acc += int(u[g]) * _left(G, Vm, int(g))
        out.add_rows(acc)
    return out


@lru_cache(maxsize=16)
def augmentation_powers(G: FiniteGroup, p: int = 2) -> tuple:
    """``(FG, Delta, Delta^2, ..., 0)`` using ``Delta^(k+1) = sum_y (y-1) Delta^k``."""
    full = AlgebraSubspace.spanned_by(G, p, np.eye(G.order, dtype=np.int64))
    powers = [full]
    current = augmentation_ideal(G, p)
    while True:
        powers.append(current)
        if current.dim == 0:
            break
        M = current.matrix()
        nxt = AlgebraSubspace(G, p)
        for y in G.generators:
            nxt.add_rows(_left(G, M, y) - M)
        if nxt.dim >= current.dim:
            raise AlgebraError(f"augmentation ideal of {G!r} is not nilpotent mod {p}")
        current = nxt
    return tuple(powers)


@dataclass(frozen=True)
class AugmentationFiltration:
    dims: List[int]

    @property
    def nilpotency_index(self) -> int:
        """First k with ``Delta^k = 0``."""
        return self.dims.index(0)

    def to_json(self) -> list:
        return list(self.dims)


def augmentation_filtration(G: FiniteGroup, p: int = 2) -> AugmentationFiltration:
    if prime_power_exponent(G.order, p) is None:
        raise GroupError(f"order {G.order} is not a power of {p}")
    return AugmentationFiltration([S.dim for S in augmentation_powers(G, p)])


def dimension_subgroup(G: FiniteGroup, p: int, n: int) -> Subgroup:
    """``{g : g - 1 in Delta^n}``."""
    if n < 1:
        raise ValueError("dimension subgroups are indexed from 1")
    powers = augmentation_powers(G, p)
    D = powers[min(n, len(powers) - 1)]
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    for g in range(1, G.order):
        v = np.zeros(G.order, dtype=np.int64)
        v[g] = 1
        v[0] = -1
        mask[g] = D.contains(v)
    return Subgroup(G, mask, generate(G, np.flatnonzero(mask)).generators)


def ideal_of_normal_subgroup(G: FiniteGroup, N: Subgroup, p: int = 2) -> AlgebraSubspace:
    """``Delta(N) FG``, spanned by ``(x - 1) g`` for generators x of N."""
    if not N.is_normal():
        raise GroupError("ideal_of_normal_subgroup needs a normal subgroup")
    S = AlgebraSubspace(G, p)
    g = np.arange(G.order)
    for x in N.generators:
        S.add_rows(_differences(G, G.table[x, g], g))
    return S


def lie_commutator_subspace(G: FiniteGroup, p: int = 2) -> AlgebraSubspace:
    """``[FG, FG]``: span of ``gh - hg``, i.e. of ``u - y u y^-1``."""
    S = AlgebraSubspace(G, p)
    u = np.arange(G.order)
    t, inv = G.table, G.inverse
    for y in G.generators:
        S.add_rows(_differences(G, u, t[t[y, u], inv[y]]))
    return S


def ideal_closure(S: AlgebraSubspace) -> AlgebraSubspace:
    """Two-sided ideal generated by ``S`` (closure under generator translates)."""
    G, p = S.group, S.p
    out = AlgebraSubspace(G, p, S.echelon.copy())
    frontier = out.matrix()
    while frontier.shape[0]:
        batch = []
        for y in G.generators:
            batch.append(_left(G, frontier, y))
            batch.append(_right(G, frontier, y))
        frontier = out.add_rows(np.concatenate(batch)) if batch else frontier[:0]
    return out


def central_augmentation_elements(G: FiniteGroup, p: int = 2) -> AlgebraSubspace:
    """Centre of FG intersected with Delta.

    The centre is spanned by class sums; its intersection with Delta is the
    kernel of the augmentation on that span, solved against the identity
    class.
    """
    classes = conjugacy_classes(G)
    rows = []
    for cls in classes[1:]:
        v = np.zeros(G.order, dtype=np.int64)
        v[cls] = 1
        v[0] -= len(cls)
        rows.append(v)
    return AlgebraSubspace.spanned_by(G, p, np.array(rows).reshape(-1, G.order))


def class_sum_ideal(G: FiniteGroup, p: int = 2) -> AlgebraSubspace:
    """Ideal generated by central elements of Delta together with [FG, FG]."""
    S = central_augmentation_elements(G, p)
    S.add_rows(lie_commutator_subspace(G, p).matrix())
    return ideal_closure(S)


def derived_ideal_product(G: FiniteGroup, p: int = 2) -> AlgebraSubspace:
    """``Delta(G') Delta(G)``, spanned by ``(x - 1)(h - 1)`` for generators x of G'."""
    D = derived_subgroup(G)
    S = AlgebraSubspace(G, p)
    h = np.arange(G.order)
    idx = np.arange(G.order)
    for x in D.generators:
        rows = np.zeros((G.order, G.order), dtype=np.int64)
        np.add.at(rows, (idx, G.table[x, h]), 1)
        np.add.at(rows, (idx, np.full(G.order, x)), -1)
        np.add.at(rows, (idx, h), -1)
        rows[:, 0] += 1
        S.add_rows(rows)
    return S


def derived_min_generators_algebra(G: FiniteGroup, p: int = 2) -> int:
    """``dim Delta(G')FG - dim Delta(G')Delta(G)``."""
    D = derived_subgroup(G)
    return ideal_of_normal_subgroup(G, D, p).dim - derived_ideal_product(G, p).dim


# -- unit group of F_2 G --------------------------------------------------

UNIT_GROUP_LIMIT = 16


class _UnitArithmetic:
    """Products in F_2 G for tiny G, elements encoded as ints."""

    def __init__(self, G: FiniteGroup):
        self.n = G.order
        self.chunks = (self.n + 7) // 8
        t = G.table
        self.tables = []
        for g in range(self.n):
            per_chunk = []
            for c in range(self.chunks):
                lut = [0] * 256
                for byte in range(256):
                    acc = 0
                    for bit in range(8):
                        h = 8 * c + bit
                        if h < self.n and (byte >> bit) & 1:
                            acc |= 1 << int(t[g, h])
                    lut[byte] = acc
                per_chunk.append(lut)
            self.tables.append(per_chunk)

    def mul(self, u: int, v: int) -> int:
        pieces = [(v >> (8 * c)) & 255 for c in range(self.chunks)]
        out = 0
        g = 0
        while u:
            if u & 1:
                tab = self.tables[g]
                for c, b in enumerate(pieces):
                    out ^= tab[c][b]
            u >>= 1
            g += 1
        return out

    def inv(self, u: int) -> int:
        # u = 1 + x with x nilpotent: u^-1 = 1 + x + x^2 + ...
        x = u ^ 1
        result, term = 1, 1
        while True:
            term = self.mul(term, x)
            if not term:
                return result
            result ^= term

    def comm(self, u: int, v: int) -> int:
        return self.mul(self.mul(self.inv(u), self.inv(v)), self.mul(u, v))


class _UnitSubgroup:
    """Subgroup of the unit group built by Dimino's coset method."""

    def __init__(self, ar: _UnitArithmetic):
        self.ar = ar
        self.gens: List[int] = []
        self.elements = [1]
        self.members = {1}

    def add_generator(self, s: int) -> bool:
        if s in self.members:
            return False
        ar = self.ar
        old = list(self.elements)
        self.gens.append(s)
        reps = [1]
        k = 0
        while k < len(reps):
            r = reps[k]
            k += 1
            for g in self.gens:
                e = ar.mul(r, g)
                if e not in self.members:
                    reps.append(e)
                    coset = [ar.mul(h, e) for h in old]
                    self.elements.extend(coset)
                    self.members.update(coset)
        return True

    def normal_closure(self, conjugators: Sequence[int]) -> None:
        ar = self.ar
        changed = True
        while changed:
            changed = False
            for x in list(self.gens):
                for y in conjugators:
                    c = ar.mul(ar.mul(ar.inv(y), x), y)
                    if self.add_generator(c):
                        changed = True


def unit_group_class(G: FiniteGroup, p: int = 2) -> int:
    """Nilpotency class of the normalized unit group ``1 + Delta`` of F_2 G."""
    if p != 2:
        raise AlgebraError("unit group computations are implemented for p = 2 only")
    if G.order > UNIT_GROUP_LIMIT:
        raise AlgebraError(f"unit group of a group of order {G.order} exceeds the "
                           f"budget (|G| <= {UNIT_GROUP_LIMIT})")
    ar = _UnitArithmetic(G)
    U = _UnitSubgroup(ar)
    for u in range(1, 1 << G.order):
        if bin(u).count("1") % 2 == 1:
            U.add_generator(u)
    if len(U.elements) == 1:
        return 0
    gens = list(U.gens)
    current = U
    cls = 0
    while len(current.elements) > 1:
        cls += 1
        nxt = _UnitSubgroup(ar)
        for x in current.gens:
            for y in gens:
                nxt.add_generator(ar.comm(x, y))
        nxt.normal_closure(gens)
        current = nxt
    return cls
