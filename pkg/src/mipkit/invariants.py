"""Lower central and Jennings series, and the nilpotency-class procedures."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from .groups import (
    FiniteGroup,
    GroupError,
    Subgroup,
    abelian_invariants,
    center,
    commutator_subgroup,
    derived_subgroup,
    exponent,
    frattini_subgroup,
    generate,
    intersection,
    is_cyclic,
    min_generators,
    power_subgroup,
    prime_power_exponent,
    quotient,
    subgroup_product,
)

__all__ = [
    "SeriesReport",
    "ClassDetermination",
    "lower_central_series",
    "nilpotency_class",
    "jennings_series",
    "factor_invariants",
    "factor_type",
    "NonabelianFactor",
    "is_class_two_criterion",
    "class_via_cyclic_derived",
    "theorem2_applicability",
    "maximal_subgroups",
    "derived_min_generators",
    "is_metacyclic",
    "group_prime",
]

REASONS = ("exp_p", "class_two_criterion", "cyclic_derived", "max_class_abelian", "undetermined")


def _section(upper: Subgroup, lower: Subgroup) -> FiniteGroup:
    H = upper.as_group()
    index = np.full(upper.parent.order, -1, dtype=np.int64)
    index[upper.elements] = np.arange(upper.order)
    return quotient(H, generate(H, index[lower.elements]))


def factor_invariants(upper: Subgroup, lower: Subgroup) -> List[int]:
    """Abelian invariants of ``upper / lower`` (lower normal in upper)."""
    return abelian_invariants(_section(upper, lower))


@dataclass(frozen=True)
class NonabelianFactor:
    """Isomorphism-invariant summary of a nonabelian section."""

    order: int
    abelianization: Tuple[int, ...]
    center: Tuple[int, ...]
    nilpotency_class: int

    def to_json(self) -> dict:
        return {"order": self.order, "abelianization": list(self.abelianization),
                "center": list(self.center), "class": self.nilpotency_class}


def factor_type(upper: Subgroup, lower: Subgroup) -> Union[List[int], NonabelianFactor]:
    """Abelian invariants of ``upper / lower``, or a summary if it is nonabelian."""
    Q = _section(upper, lower)
    if Q.is_abelian:
        return abelian_invariants(Q)
    return NonabelianFactor(
        order=Q.order,
        abelianization=tuple(abelian_invariants(quotient(Q, derived_subgroup(Q)))),
        center=tuple(abelian_invariants(center(Q))),
        nilpotency_class=nilpotency_class(Q),
    )


@dataclass
class SeriesReport:
    """A descending normal series ``terms[0] = G > ... > terms[-1] = 1``.

    ``terms[i]`` is the term with 1-based index ``i + 1``; indices past the
    end denote the trivial subgroup.
    """

    kind: str
    terms: List[Subgroup]
    factor_invariants: List[List[int]] = field(default_factory=list)

    def term(self, i: int) -> Subgroup:
        if i <= len(self.terms):
            return self.terms[i - 1]
        return self.terms[-1]

    @property
    def length(self) -> int:
        """Number of nontrivial terms."""
        return sum(1 for t in self.terms if not t.is_trivial())

    @property
    def orders(self) -> List[int]:
        return [t.order for t in self.terms]

    def quotient_type(self, i: int, j: int):
        """Type of ``term(i) / term(j)`` for ``i <= j`` (see :func:`factor_type`)."""
        return factor_type(self.term(i), self.term(j))

    def double_factors(self) -> list:
        """``M_i / M_{i+2}``; only ``i = 1`` can be nonabelian."""
        return [self.quotient_type(i, i + 2) for i in range(1, self.length + 1)]

    def doubled_index_factors(self) -> list:
        """``M_i / M_{2i+1}``."""
        return [self.quotient_type(i, 2 * i + 1) for i in range(1, self.length + 1)]

    def to_json(self) -> dict:
        return {"kind": self.kind, "orders": self.orders, "factors": self.factor_invariants}


def _with_factors(kind: str, terms: List[Subgroup]) -> SeriesReport:
    factors = [factor_invariants(a, b) for a, b in zip(terms, terms[1:])]
    return SeriesReport(kind, terms, factors)


def lower_central_series(G: FiniteGroup) -> SeriesReport:
    W = G.whole()
    terms = [W]
    while not terms[-1].is_trivial():
        nxt = commutator_subgroup(G, terms[-1], W)
        if nxt == terms[-1]:
            raise GroupError(f"{G!r} is not nilpotent")
        terms.append(nxt)
    return _with_factors("lower_central", terms)


def nilpotency_class(G: FiniteGroup) -> int:
    return len(lower_central_series(G).terms) - 1


def group_prime(G: FiniteGroup) -> int:
    n = G.order
    if n == 1:
        raise GroupError("the trivial group has no prime")
    q = 2
    while n % q:
        q += 1
    if prime_power_exponent(n, q) is None:
        raise GroupError(f"order {n} is not a prime power")
    return q


def jennings_series(G: FiniteGroup, p: int) -> SeriesReport:
    """``M_1 = G``, ``M_n = [M_{n-1}, G] (M_{ceil(n/p)})^p``."""
    if prime_power_exponent(G.order, p) is None:
        raise GroupError(f"order {G.order} is not a power of {p}")
    W = G.whole()
    terms = [W]
    n = 1
    while not terms[-1].is_trivial():
        n += 1
        comm = commutator_subgroup(G, terms[-1], W)
        powers = power_subgroup(G, terms[-(-n // p) - 1], p)
        nxt = subgroup_product(G, comm, powers)
        terms.append(nxt)
    return _with_factors("jennings", terms)


def is_class_two_criterion(G: FiniteGroup) -> bool:
    """``G' == Z(G) & G'``, i.e. the derived subgroup is central."""
    if G.is_abelian:
        raise GroupError("class-two criterion needs a nonabelian group")
    D = derived_subgroup(G)
    return intersection(G, center(G), D) == D


def class_via_cyclic_derived(G: FiniteGroup) -> int:
    """Nilpotency class of a p-group with cyclic derived subgroup.

    Each step factors out ``Z(G) & G' = <g^(p^k)>`` for a generator ``g`` of
    ``G'``; this lowers the class by exactly one.
    """
    if G.order == 1:
        return 0
    p = group_prime(G)
    steps = 0
    while not G.is_abelian:
        D = derived_subgroup(G)
        if not is_cyclic(D):
            raise GroupError("derived subgroup is not cyclic")
        g = int(D.elements[np.argmax(G.element_orders[D.elements])])
        Z = center(G)
        x = g
        while not Z.mask[x]:
            x = G.power(x, p)
        G = quotient(G, generate(G, [x]))
        steps += 1
    return steps + (1 if G.order > 1 else 0)


@dataclass(frozen=True)
class ClassDetermination:
    value: Optional[int]
    reason: str

    def __post_init__(self):
        if self.reason not in REASONS:
            raise ValueError(f"unknown reason {self.reason!r}")
        if (self.value is None) != (self.reason == "undetermined"):
            raise ValueError("value must be present exactly when determined")

    def to_json(self) -> dict:
        return {"value": self.value, "reason": self.reason}


def maximal_subgroups(G: FiniteGroup, p: int) -> List[Subgroup]:
    """Index-p subgroups: preimages of hyperplanes of ``G / Phi(G)``."""
    Q = quotient(G, frattini_subgroup(G, p))
    basis: List[int] = []
    H = Q.trivial()
    for x in Q.generators:
        if not H.mask[x]:
            basis.append(x)
            H = generate(Q, basis)
    d = len(basis)
    coords = np.zeros((Q.order, d), dtype=np.int64)
    for exps in itertools.product(range(p), repeat=d):
        y = 0
        for b, e in zip(basis, exps):
            y = Q.mul(y, Q.power(b, e))
        coords[y] = exps
    out = []
    for f in itertools.product(range(p), repeat=d):
        nz = [c for c in f if c]
        if not nz or nz[0] != 1:
            continue
        keep = (coords @ np.asarray(f)) % p == 0
        mask = keep[Q.projection]
        out.append(generate(G, np.flatnonzero(mask)))
    return out


def derived_min_generators(G: FiniteGroup, p: int) -> int:
    """Group-side ``d(G')``: rank of ``G' / Phi(G')``."""
    D = derived_subgroup(G)
    if D.is_trivial():
        return 0
    return min_generators(D.as_group(), p)


def theorem2_applicability(G: FiniteGroup, p: int) -> ClassDetermination:
    """Test the four class-determining conditions in the order (i), (iii), (ii), (iv)."""
    if G.order > 1 and exponent(G) == p:
        return ClassDetermination(nilpotency_class(G), "exp_p")
    if is_cyclic(derived_subgroup(G)):
        return ClassDetermination(class_via_cyclic_derived(G), "cyclic_derived")
    if not G.is_abelian and is_class_two_criterion(G):
        return ClassDetermination(2, "class_two_criterion")
    k = prime_power_exponent(G.order, p)
    cl = nilpotency_class(G)
    if k is not None and k >= 2 and cl == k - 1:
        if any(M.is_abelian() for M in maximal_subgroups(G, p)):
            return ClassDetermination(cl, "max_class_abelian")
    return ClassDetermination(None, "undetermined")


def is_metacyclic(G: FiniteGroup) -> bool:
    """Search for a cyclic normal subgroup with cyclic quotient."""
    if G.order == 1:
        return True
    t = G.table
    orders = G.element_orders
    exp = int(orders.max())
    seen = set()
    for x in np.argsort(-orders, kind="stable"):
        x = int(x)
        N = generate(G, [x])
        key = N.mask.tobytes()
        if key in seen:
            continue
        seen.add(key)
        if N.order * exp < G.order:
            break
        if not N.is_normal():
            continue
        index = G.order // N.order
        # order of gN is the first k with g^k in N
        cur = np.arange(G.order)
        coset_order = np.zeros(G.order, dtype=np.int64)
        pending = np.ones(G.order, dtype=bool)
        for k in range(1, index + 1):
            hit = pending & N.mask[cur]
            coset_order[hit] = k
            pending &= ~hit
            cur = t[cur, np.arange(G.order)]
        if coset_order.max() == index:
            return True
    return False
