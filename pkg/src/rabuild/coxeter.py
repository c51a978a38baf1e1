"""Right-angled Coxeter diagrams and arithmetic in the Weyl group.

Generators are referred to by their *labels* (whatever hashable names the
diagram was built from).  Internally every label is replaced by its position
in the generator order, which is fixed at construction and anchors all
canonical normal forms downstream.
"""

from __future__ import annotations

import math
from collections import deque
from itertools import combinations
from typing import Hashable, Iterable, NamedTuple

from . import kernel

INF = math.inf


class DiagramError(ValueError):
    """Base class for invalid diagram descriptions."""


class DuplicateGenerator(DiagramError):
    pass


class MissingPair(DiagramError):
    pass


class BadOrder(DiagramError):
    pass


class UnknownType(DiagramError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class NotIrreducible(DiagramError):
    pass


class Spherical(DiagramError):
    pass


class WallsDoNotCross(ValueError):
    pass


def parse_order(value) -> float:
    """Map ``2``, ``"2"``, ``"inf"``, ``math.inf`` to 2 or INF; reject the rest."""
    if isinstance(value, str):
        v = value.strip().lower()
        if v in ("inf", "infinity", "oo", "∞"):
            return INF
        try:
            value = int(v)
        except ValueError:
            raise BadOrder(f"order {value!r} is not 2 or inf") from None
    if value == INF:
        return INF
    if isinstance(value, bool) or value != 2:
        raise BadOrder(f"order {value!r} is not 2 or inf")
    return 2


class WeylWord(tuple):
    """A reduced, canonical word in the Weyl group, stored as generator labels."""

    __slots__ = ()

    def __repr__(self):
        return "WeylWord(" + ",".join(map(str, self)) + ")"


class CoxeterDiagram:
    """A right-angled Coxeter system (W, I).

    ``m`` maps unordered pairs of distinct labels to 2 or ``INF``.
    """

    def __init__(self, generators: Iterable[Hashable], m: dict):
        gens = tuple(generators)
        if not gens:
            raise DiagramError("a diagram needs at least one generator")
        seen = set()
        for g in gens:
            if g in seen:
                raise DuplicateGenerator(f"generator {g!r} listed twice")
            seen.add(g)
        self.generators = gens
        self.index = {g: k for k, g in enumerate(gens)}
        n = len(gens)
        self.n = n
        orders = {}
        for key, value in m.items():
            a, b = tuple(key)
            if a not in self.index or b not in self.index:
                raise UnknownType(f"pair ({a!r}, {b!r}) names an unknown generator")
            if a == b:
                raise DiagramError(f"diagonal entry for {a!r} given")
            ia, ib = self.index[a], self.index[b]
            pair = (min(ia, ib), max(ia, ib))
            try:
                order = parse_order(value)
            except BadOrder as exc:
                raise BadOrder(f"pair ({a!r}, {b!r}): {exc}") from None
            if pair in orders and orders[pair] != order:
                raise DiagramError(f"conflicting orders for ({a!r}, {b!r})")
            orders[pair] = order
        for ia, ib in combinations(range(n), 2):
            if (ia, ib) not in orders:
                raise MissingPair(f"no order given for ({gens[ia]!r}, {gens[ib]!r})")
        self._orders = orders
        comm = bytearray(n * n)
        for (ia, ib), order in orders.items():
            if order == 2:
                comm[ia * n + ib] = comm[ib * n + ia] = 1
        self.comm = bytes(comm)
        self._q2 = (2,) * n

    # -- basic lookup ------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, CoxeterDiagram)
            and self.generators == other.generators
            and self.comm == other.comm
        )

    def __hash__(self):
        return hash((self.generators, self.comm))

    def __repr__(self):
        return f"CoxeterDiagram({list(self.generators)!r})"

    def m(self, a, b) -> float:
        ia, ib = self.idx(a), self.idx(b)
        if ia == ib:
            return 1
        return 2 if self.comm[ia * self.n + ib] else INF

    def idx(self, label) -> int:
        try:
            return self.index[label]
        except (KeyError, TypeError):
            raise UnknownType(f"unknown generator {label!r}") from None

    def idx_set(self, labels) -> frozenset:
        return frozenset(self.idx(x) for x in labels)

    def labels(self, indices) -> tuple:
        return tuple(self.generators[k] for k in indices)

    def label_set(self, indices) -> frozenset:
        return frozenset(self.generators[k] for k in indices)

    def commutes(self, i: int, j: int) -> bool:
        """Index-level test: distinct generators with m = 2."""
        return bool(self.comm[i * self.n + j])

    # -- index-level Weyl arithmetic ---------------------------------------
    def _wnf(self, letters) -> tuple:
        return tuple(t for t, _ in kernel.normal_form([(t, 1) for t in letters], self._q2, self.comm, self.n))

    def _wlen(self, letters) -> int:
        return len(self._wnf(letters))

    def _perp(self, J: frozenset) -> frozenset:
        return frozenset(
            i for i in range(self.n) if i not in J and all(self.commutes(i, j) for j in J)
        )

    def _spherical(self, J) -> bool:
        return all(self.commutes(i, j) for i, j in combinations(sorted(J), 2))

    def weyl_ball(self, radius: int) -> dict:
        """Index-level canonical words of length <= radius, mapped to their length."""
        ball = {(): 0}
        frontier = [()]
        for r in range(1, radius + 1):
            nxt = []
            for w in frontier:
                for s in range(self.n):
                    v = self._wnf(w + (s,))
                    if len(v) == r and v not in ball:
                        ball[v] = r
                        nxt.append(v)
            frontier = nxt
        return ball

    # -- label-level operations -------------------------------------------
    def weyl_normalize(self, letters) -> WeylWord:
        return WeylWord(self.labels(self._wnf([self.idx(x) for x in letters])))

    def is_irreducible(self) -> bool:
        return _connected(range(self.n), lambda i, j: not self.commutes(i, j))

    def is_spherical_subset(self, J) -> bool:
        return self._spherical(self.idx_set(J))

    def is_spherical(self) -> bool:
        return self._spherical(range(self.n))

    def perp(self, J) -> frozenset:
        return self.label_set(self._perp(self.idx_set(J)))


def _connected(vertices, adjacent) -> bool:
    verts = list(vertices)
    if not verts:
        return False
    seen = {verts[0]}
    queue = deque([verts[0]])
    while queue:
        v = queue.popleft()
        for u in verts:
            if u not in seen and adjacent(v, u):
                seen.add(u)
                queue.append(u)
    return len(seen) == len(verts)


def _components(vertices, adjacent) -> list:
    remaining = sorted(vertices)
    comps = []
    while remaining:
        start = remaining[0]
        comp = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in remaining:
                if u not in comp and adjacent(v, u):
                    comp.add(u)
                    queue.append(u)
        comps.append(frozenset(comp))
        remaining = [v for v in remaining if v not in comp]
    return comps


def validate_diagram(raw) -> CoxeterDiagram:
    """Build a diagram from ``{"generators": [...], "m": ...}``.

    ``m`` is either a mapping ``(a, b) -> order`` or a list of
    ``{"i": a, "j": b, "m": order}`` entries; orders are 2 or ``"inf"``.
    """
    gens = raw["generators"]
    entries = raw.get("m", {})
    if isinstance(entries, dict):
        m = dict(entries)
    else:
        m = {}
        for e in entries:
            m[(e["i"], e["j"])] = e["m"]
    return CoxeterDiagram(gens, m)


# ---------------------------------------------------------------------------
# Ends / splittings


class OneEnded:
    """Marker result: no clique-separated partition of the generators exists."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "OneEnded"


ONE_ENDED = OneEnded()


class Partition(NamedTuple):
    I0: frozenset
    I1: frozenset
    I2: frozenset

    def __repr__(self):
        def fmt(s):
            return "{" + ",".join(map(str, sorted(s, key=str))) + "}"

        return f"Partition({fmt(self.I0)}, {fmt(self.I1)}, {fmt(self.I2)})"


def _check_ends_hypotheses(D: CoxeterDiagram):
    if not D.is_irreducible():
        raise NotIrreducible("the diagram is reducible (its non-commutation graph is disconnected)")
    if D.is_spherical():
        raise Spherical("the diagram is spherical (all generators commute)")


def commuting_subsets(D: CoxeterDiagram):
    """Index-level pairwise-commuting subsets, in lexicographic order of sorted tuples."""
    out = []
    for size in range(D.n + 1):
        for combo in combinations(range(D.n), size):
            if D._spherical(combo):
                out.append(combo)
    out.sort()
    return out


def ends_classify(D: CoxeterDiagram):
    """Return ``ONE_ENDED`` or the lexicographically least separating ``Partition``.

    Brute force over all 2^|I| subsets; fine for |I| up to about 16.
    """
    _check_ends_hypotheses(D)
    for combo in commuting_subsets(D):
        rest = [i for i in range(D.n) if i not in combo]
        if len(rest) < 2:
            continue
        comps = _components(rest, D.commutes)
        if len(comps) >= 2:
            first = comps[0]
            second = frozenset(rest) - first
            return Partition(D.label_set(combo), D.label_set(first), D.label_set(second))
    return ONE_ENDED


def is_valid_partition(D: CoxeterDiagram, part) -> bool:
    I0, I1, I2 = (D.idx_set(s) for s in part)
    if not I1 or not I2 or (I0 & I1) or (I0 & I2) or (I1 & I2):
        return False
    if I0 | I1 | I2 != frozenset(range(D.n)):
        return False
    if not D._spherical(I0):
        return False
    return all(not D.commutes(i, j) for i in I1 for j in I2)


# ---------------------------------------------------------------------------
# Half-spaces of the Coxeter complex


class HalfSpace(NamedTuple):
    """Weyl elements strictly closer to ``inner`` than to ``outer``."""

    inner: tuple
    outer: tuple

    @classmethod
    def make(cls, D: CoxeterDiagram, inner, generator) -> "HalfSpace":
        u = D.weyl_normalize(inner)
        return cls(u, D.weyl_normalize(tuple(u) + (generator,)))


def _half_index(D, H):
    inner = tuple(D.idx(x) for x in H.inner)
    outer = tuple(D.idx(x) for x in H.outer)
    diff = D._wnf(tuple(reversed(inner)) + outer)
    if len(diff) != 1:
        raise ValueError("inner and outer of a half-space must be adjacent")
    return tuple(reversed(inner)), tuple(reversed(outer))


def _members(D, inv_inner, inv_outer, ball) -> frozenset:
    return frozenset(
        w for w in ball if D._wlen(inv_inner + w) < D._wlen(inv_outer + w)
    )


def half_space_contains(D: CoxeterDiagram, H: HalfSpace, w) -> bool:
    a, b = _half_index(D, H)
    v = tuple(D.idx(x) for x in w)
    return D._wlen(a + v) < D._wlen(b + v)


def walls_cross_certificate(D, H, H2, radius):
    """A ball element adjacent to both walls through commuting panels, or None."""
    a1, b1 = _half_index(D, H)
    a2, b2 = _half_index(D, H2)
    ball = D.weyl_ball(radius)

    def side(a, b, w):
        return D._wlen(a + w) < D._wlen(b + w)

    for w in sorted(ball, key=lambda v: (len(v), v)):
        for i in range(D.n):
            wi = D._wnf(w + (i,))
            if side(a1, b1, w) == side(a1, b1, wi):
                continue
            for j in range(D.n):
                if j == i or not D.commutes(i, j):
                    continue
                wj = D._wnf(w + (j,))
                if side(a2, b2, w) != side(a2, b2, wj):
                    return D.labels(w), D.generators[i], D.generators[j]
    return None


class CornerResult(NamedTuple):
    halfspace: HalfSpace
    radius: int
    certification: str = "ball"


def deep_corner_search(D: CoxeterDiagram, H: HalfSpace, H2: HalfSpace, radius: int):
    """Look for a half-space properly inside ``H ∩ H2`` on the radius-``radius`` ball.

    The answer is only *ball-certified*: its trace on the ball is a non-empty
    proper subset of the trace of ``H ∩ H2``.  Returns ``None`` when no such
    half-space is found.
    """
    _check_ends_hypotheses(D)
    search = max(radius, 1)
    if walls_cross_certificate(D, H, H2, search + 1) is None:
        raise WallsDoNotCross("no chamber within the ball is adjacent to both walls through commuting panels")
    if radius <= 0:
        return None
    ball = D.weyl_ball(radius)
    a1, b1 = _half_index(D, H)
    a2, b2 = _half_index(D, H2)
    target = _members(D, a1, b1, ball) & _members(D, a2, b2, ball)
    for u in sorted(ball, key=lambda v: (len(v), v)):
        for s in range(D.n):
            us = D._wnf(u + (s,))
            inv_u, inv_us = tuple(reversed(u)), tuple(reversed(us))
            members = _members(D, inv_u, inv_us, ball)
            if members and members < target:
                return CornerResult(HalfSpace(WeylWord(D.labels(u)), WeylWord(D.labels(us))), radius)
    return None
