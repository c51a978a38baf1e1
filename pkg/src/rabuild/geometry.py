"""Residues, projections, parallelism, wings, balls and apartment fragments."""

from __future__ import annotations

import random
from collections import deque
from itertools import product
from typing import NamedTuple

from . import kernel
from .chambers import BuildingSpec, Chamber, SpecMismatch, sort_key

DEFAULT_BALL_CAP = 200_000


class ResourceLimit(RuntimeError):
    pass


class NotSpherical(ValueError):
    pass


class GrowthFailure(RuntimeError):
    pass


class BadAssignment(ValueError):
    pass


# ---------------------------------------------------------------------------
# Residues


class Residue:
    """The coset ``base * P_J``; ``base`` is its minimal-length element."""

    __slots__ = ("spec", "base", "J", "_hash")

    def __init__(self, spec: BuildingSpec, base: Chamber, J: frozenset):
        self.spec = spec
        self.base = base
        self.J = J
        self._hash = hash((base, J))

    def __eq__(self, other):
        return isinstance(other, Residue) and self.base == other.base and self.J == other.J

    def __hash__(self):
        return self._hash

    def __repr__(self):
        types = ",".join(str(t) for t in sorted(self.type_set, key=str))
        return f"Residue({self.base!r}, {{{types}}})"

    @property
    def type_set(self) -> frozenset:
        return self.spec.diagram.label_set(self.J)

    @property
    def rank(self) -> int:
        return len(self.J)

    @property
    def is_spherical(self) -> bool:
        return self.spec.diagram._spherical(self.J)

    def contains(self, x: Chamber) -> bool:
        g = kernel.delta_types(self.base.word, x.word, self.spec.q, self.spec.comm, self.spec.n)
        return all(t in self.J for t in g)

    __contains__ = contains

    def size(self) -> int:
        if not self.is_spherical:
            raise NotSpherical(f"{self!r} has infinitely many chambers")
        total = 1
        for j in self.J:
            total *= self.spec.q[j]
        return total

    def chambers(self) -> list:
        """All chambers of a spherical residue, in deterministic order."""
        if not self.is_spherical:
            raise NotSpherical(f"{self!r} has infinitely many chambers")
        spec = self.spec
        J = sorted(self.J)
        out = []
        for exps in product(*[range(spec.q[j]) for j in J]):
            word = self.base.word + tuple((j, e) for j, e in zip(J, exps) if e)
            out.append(Chamber(spec, spec._nf(word)))
        return out

    def chambers_within(self, center: Chamber, radius: int) -> list:
        """Chambers of the residue within ``radius`` of ``center`` (any residue type)."""
        spec = self.spec
        start = proj_chamber(self, center)
        if spec.dist(start, center) > radius:
            return []
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for t in self.J:
                for e in range(1, spec.q[t]):
                    y = Chamber(spec, spec._nf(x.word + ((t, e),)))
                    if y not in seen and spec.dist(y, center) <= radius:
                        seen.add(y)
                        queue.append(y)
        return sorted(seen, key=sort_key)


def _residue(spec: BuildingSpec, c: Chamber, J: frozenset) -> Residue:
    inv = kernel.inverse_word(c.word, spec.q)
    _, rest = spec._split(inv, J)
    base = Chamber(spec, spec._nf(kernel.inverse_word(rest, spec.q)))
    return Residue(spec, base, J)


def residue_of(c: Chamber, J) -> Residue:
    spec = c.spec
    return _residue(spec, c, spec.diagram.idx_set(J))


def panel(c: Chamber, i) -> Residue:
    """The i-panel of ``c`` (``i`` is a generator label)."""
    spec = c.spec
    return _residue(spec, c, frozenset([spec.diagram.idx(i)]))


def _panel(c: Chamber, t: int) -> Residue:
    return _residue(c.spec, c, frozenset([t]))


def _check(R, c):
    if R.spec is not c.spec and R.spec != c.spec:
        raise SpecMismatch("residue and chamber belong to different buildings")


def proj_chamber(R: Residue, c: Chamber) -> Chamber:
    """The gate: the unique chamber of R closest to ``c``."""
    _check(R, c)
    spec = R.spec
    if R.base.word:
        g = spec._nf(kernel.inverse_word(R.base.word, spec.q) + c.word)
    else:
        g = c.word
    prefix, _ = spec._split(g, R.J)
    if not prefix:
        return R.base
    if not R.base.word:
        return Chamber(spec, prefix)
    return Chamber(spec, spec._nf(R.base.word + prefix))


def dist_to_residue(x: Chamber, R: Residue) -> int:
    return x.spec.dist(x, proj_chamber(R, x))


def _contains_types(spec, a: Chamber, b: Chamber, J: frozenset) -> bool:
    return all(t in J for t in kernel.delta_types(a.word, b.word, spec.q, spec.comm, spec.n))


def is_parallel(R: Residue, S: Residue) -> bool:
    """Same type J, and both inside one residue of type J ∪ J⊥."""
    _check(R, S.base)
    if R.J != S.J:
        return False
    spec = R.spec
    big = R.J | spec.diagram._perp(R.J)
    return _contains_types(spec, R.base, S.base, big)


def proj_residue(R: Residue, S: Residue) -> Residue:
    """The residue of R whose chambers are the projections of the chambers of S."""
    _check(R, S.base)
    p = proj_chamber(R, S.base)
    ps = proj_chamber(S, p)
    spec = R.spec
    keep = frozenset(
        j for j in R.J & S.J if _contains_types(spec, p, ps, frozenset([j]) | spec.diagram._perp(frozenset([j])))
    )
    return _residue(spec, p, keep)


def wall_residue(p: Residue) -> Residue:
    """The residue of type i ∪ i⊥ containing the i-panel ``p``."""
    if len(p.J) != 1:
        raise ValueError("wall_residue expects a panel")
    spec = p.spec
    return _residue(spec, p.base, p.J | spec.diagram._perp(p.J))


def _wall(c: Chamber, t: int) -> Residue:
    spec = c.spec
    J = frozenset([t])
    return _residue(spec, c, J | spec.diagram._perp(J))


# ---------------------------------------------------------------------------
# Wings


class Wing(NamedTuple):
    """The J-wing X_J(c): chambers whose projection onto Res_J(c) is c."""

    c: Chamber
    J: frozenset

    @classmethod
    def of(cls, c: Chamber, J) -> "Wing":
        return cls(c, c.spec.diagram.idx_set(J))

    def __contains__(self, x):
        return _in_wing(self.c, self.J, x)


def _in_wing(c: Chamber, J: frozenset, x: Chamber) -> bool:
    return proj_chamber(_residue(c.spec, c, J), x) == c


def wing_contains(w: Wing, x: Chamber) -> bool:
    _check(w.c, x)
    return _in_wing(w.c, w.J, x)


def in_i_wing(c: Chamber, t: int, x: Chamber) -> bool:
    """Index-level membership ``x ∈ X_t(c)``."""
    return _in_wing(c, frozenset([t]), x)


def wing_included(c: Chamber, i, c2: Chamber, i2) -> bool:
    """Criterion (a) for X_i(c) ⊆ X_i2(c2); False means "criterion not met"."""
    D = c.spec.diagram
    t, t2 = D.idx(i), D.idx(i2)
    if not (t == t2 or not D.commutes(t, t2)):
        return False
    return in_i_wing(c2, t2, c) and not in_i_wing(c, t, c2)


# ---------------------------------------------------------------------------
# Balls


class Ball:
    """Chambers within ``radius`` of ``center`` (a chamber or a residue)."""

    def __init__(self, spec, center, radius, members):
        self.spec = spec
        self.center = center
        self.radius = radius
        self.members = members

    def __contains__(self, x):
        return x in self.members

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        return f"Ball({self.center!r}, r={self.radius}, size={len(self.members)})"

    def sorted(self) -> list:
        return sorted(self.members, key=lambda x: (self.members[x], sort_key(x)))

    def sphere(self, k: int) -> list:
        return sorted((x for x, d in self.members.items() if d == k), key=sort_key)


def ball(spec: BuildingSpec, center, n: int, cap: int = DEFAULT_BALL_CAP, window: int | None = None) -> Ball:
    """Breadth-first enumeration of B(center, n).

    For a residue of non-spherical type the ball is infinite; enumeration is
    then restricted to chambers within ``window`` (default ``n``) of the base.
    """
    if isinstance(center, Chamber):
        sources = [center]
        limit = None
    elif isinstance(center, Residue):
        if center.is_spherical:
            sources = center.chambers()
            limit = None
        else:
            sources = [center.base]
            limit = n if window is None else window
    else:
        raise TypeError("center must be a Chamber or a Residue")
    if limit is not None:
        window_ball = ball(spec, center.base, limit, cap=cap)
        members = {}
        for x in window_ball.members:
            d = dist_to_residue(x, center)
            if d <= n:
                members[x] = d
        return Ball(spec, center, n, members)
    members = {s: 0 for s in sources}
    if len(members) > cap:
        raise ResourceLimit(f"ball exceeds {cap} chambers")
    frontier = list(members)
    for r in range(1, n + 1):
        nxt = []
        for x in frontier:
            for t in range(spec.n):
                for e in range(1, spec.q[t]):
                    y = Chamber(spec, spec._nf(x.word + ((t, e),)))
                    if y not in members:
                        members[y] = r
                        nxt.append(y)
            if len(members) > cap:
                raise ResourceLimit(f"ball exceeds {cap} chambers")
        frontier = nxt
    return Ball(spec, center, n, members)


def panels_in(b: Ball) -> list:
    """Panels whose chambers all lie in the ball, in deterministic order."""
    seen = set()
    out = []
    spec = b.spec
    for x in b.sorted():
        for t in range(spec.n):
            p = _panel(x, t)
            if p in seen:
                continue
            seen.add(p)
            if all(y in b.members for y in p.chambers()):
                out.append(p)
    return out


def spherical_residues_in(b: Ball, max_rank: int | None = None) -> list:
    """Spherical residues (all types) fully contained in the ball."""
    spec = b.spec
    D = spec.diagram
    types = [frozenset(s) for s in _commuting_subsets(D) if max_rank is None or len(s) <= max_rank]
    seen = set()
    out = []
    for x in b.sorted():
        for J in types:
            R = _residue(spec, x, J)
            if R in seen:
                continue
            seen.add(R)
            if all(y in b.members for y in R.chambers()):
                out.append(R)
    return out


def _commuting_subsets(D):
    from .coxeter import commuting_subsets

    return commuting_subsets(D)


# ---------------------------------------------------------------------------
# Galleries and convexity


def _poset_children(word, spec):
    """For each syllable, the syllables that must come after it."""
    n = spec.n
    comm = spec.comm
    size = len(word)
    preds = [0] * size
    succ = [[] for _ in range(size)]
    for k in range(size):
        for m in range(k):
            if not comm[word[k][0] * n + word[m][0]]:
                preds[k] += 1
                succ[m].append(k)
    return preds, succ


def minimal_galleries(c: Chamber, d: Chamber, limit: int = 1000):
    """All minimal galleries from ``c`` to ``d`` (up to ``limit``).

    Returns ``(galleries, truncated)``; each gallery is a list of chambers
    starting at ``c`` and ending at ``d``.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    spec = c.spec
    g = spec._nf(kernel.inverse_word(c.word, spec.q) + d.word)
    preds, succ = _poset_children(g, spec)
    size = len(g)
    out = []
    truncated = False

    def rec(order, preds, current):
        nonlocal truncated
        if truncated:
            return
        if len(order) == size:
            if len(out) >= limit:
                truncated = True
                return
            out.append(list(current))
            return
        ready = sorted((k for k in range(size) if preds[k] == 0 and k not in order), key=lambda k: g[k][0])
        for k in ready:
            nxt = list(preds)
            nxt[k] = -1
            for m in succ[k]:
                nxt[m] -= 1
            x = Chamber(spec, spec._nf(current[-1].word + (g[k],)))
            current.append(x)
            rec(order | {k}, nxt, current)
            current.pop()

    rec(frozenset(), preds, [c])
    return out, truncated


def interval(c: Chamber, d: Chamber) -> set:
    """Every chamber on some minimal gallery from ``c`` to ``d``.

    These are the products of ``c`` with the order ideals of the syllable
    poset of ``c⁻¹d``; ideals are tracked as bitmasks.
    """
    spec = c.spec
    g = spec._nf(kernel.inverse_word(c.word, spec.q) + d.word)
    size = len(g)
    n, comm = spec.n, spec.comm
    need = [0] * size
    for k in range(size):
        for m in range(k):
            if not comm[g[k][0] * n + g[m][0]]:
                need[k] |= 1 << m
    seen = {0}
    queue = deque([0])
    out = set()
    while queue:
        ideal = queue.popleft()
        word = c.word + tuple(g[k] for k in range(size) if ideal >> k & 1)
        out.add(Chamber(spec, spec._nf(word)))
        for k in range(size):
            bit = 1 << k
            if not ideal & bit and need[k] & ideal == need[k]:
                nxt = ideal | bit
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return out


def is_convex(spec: BuildingSpec, S, cap: int = DEFAULT_BALL_CAP) -> bool:
    """Every chamber of every minimal gallery between members lies in S."""
    members = list(S)
    if not members:
        raise ValueError("is_convex needs a nonempty set")
    if len(members) ** 2 > cap * 50:
        raise ResourceLimit("too many pairs for a convexity check")
    inside = set(members)
    for a_idx, x in enumerate(members):
        for y in members[a_idx + 1:]:
            if not interval(x, y) <= inside:
                return False
    return True


def convexity_violation(spec, members, predicate):
    """First (x, y, z) with z on a minimal gallery x→y but ``predicate(z)`` false."""
    members = list(members)
    known = {}
    for a_idx, x in enumerate(members):
        for y in members[a_idx + 1:]:
            for z in interval(x, y):
                ok = known.get(z)
                if ok is None:
                    ok = known[z] = bool(predicate(z))
                if not ok:
                    return x, y, z
    return None


# ---------------------------------------------------------------------------
# Apartment fragments


class ApartmentFragment:
    """An isometric embedding of the radius-r Weyl ball, sending e to ``base``.

    ``embedding`` is keyed by index-level canonical Weyl words.
    """

    def __init__(self, spec: BuildingSpec, base: Chamber, radius: int, embedding: dict):
        self.spec = spec
        self.base = base
        self.radius = radius
        self.embedding = embedding

    def __getitem__(self, w):
        """Chamber at the Weyl element spelled by the labels in ``w``."""
        D = self.spec.diagram
        return self.embedding[D._wnf([D.idx(x) for x in w])]

    def __len__(self):
        return len(self.embedding)

    def chambers(self) -> set:
        return set(self.embedding.values())

    def words(self) -> list:
        return sorted(self.embedding, key=lambda w: (len(w), w))

    def isometry_violation(self):
        D = self.spec.diagram
        items = self.words()
        for a_idx, u in enumerate(items):
            for v in items[a_idx + 1:]:
                want = D._wnf(tuple(reversed(u)) + v)
                got = self.spec._delta(self.embedding[u], self.embedding[v])
                if want != got:
                    return u, v
        return None


def standard_apartment(spec: BuildingSpec, assignment: dict, base: Chamber, r: int) -> ApartmentFragment:
    """``w ↦ base·φ(w)`` with φ sending each letter i to the syllable (i, a_i)."""
    D = spec.diagram
    exps = []
    for g in D.generators:
        a = assignment.get(g)
        t = D.index[g]
        if not isinstance(a, int) or not 1 <= a < spec.q[t]:
            raise BadAssignment(f"assignment for {g!r} must be in 1..{spec.q[t] - 1}, got {a!r}")
        exps.append(a)
    emb = {}
    for w in D.weyl_ball(r):
        emb[w] = Chamber(spec, spec._nf(base.word + tuple((t, exps[t]) for t in w)))
    frag = ApartmentFragment(spec, base, r, emb)
    if frag.isometry_violation() is not None:
        raise BadAssignment("standard apartment failed the isometry check")
    return frag


def grow_apartment(spec: BuildingSpec, c: Chamber, r: int, seed) -> ApartmentFragment:
    """Grow an apartment fragment around ``c`` by breadth-first extension.

    A Weyl element with a single last letter gets a seeded free choice of
    chamber in the corresponding panel; one with two or more last letters is
    forced by the product structure of the square it closes.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    D = spec.diagram
    emb = {(): c}
    layers = {0: [()]}
    for length in range(1, r + 1):
        layer = set()
        for u in layers[length - 1]:
            for s in range(D.n):
                w = D._wnf(u + (s,))
                if len(w) == length:
                    layer.add(w)
        layer = sorted(layer)
        layers[length] = layer
        for w in layer:
            descents = [s for s in range(D.n) if len(D._wnf(w + (s,))) < length]
            if len(descents) == 1:
                s = descents[0]
                u = D._wnf(w + (s,))
                e = rng.randrange(1, spec.q[s])
                emb[w] = Chamber(spec, spec._nf(emb[u].word + ((s, e),)))
            else:
                s1, s2 = descents[0], descents[1]
                v = D._wnf(w + (s1, s2))
                base_v = emb[v]
                a = spec._nf(kernel.inverse_word(base_v.word, spec.q) + emb[D._wnf(v + (s1,))].word)
                b = spec._nf(kernel.inverse_word(base_v.word, spec.q) + emb[D._wnf(v + (s2,))].word)
                x = Chamber(spec, spec._nf(base_v.word + a + b))
                for s in descents[2:]:
                    u = D._wnf(w + (s,))
                    if spec.dist(emb[u], x) != 1:
                        raise GrowthFailure(f"forced chamber for {D.labels(w)} is inconsistent")
                emb[w] = x
    frag = ApartmentFragment(spec, c, r, emb)
    bad = frag.isometry_violation()
    if bad is not None:
        raise GrowthFailure(f"fragment is not isometric at {bad}")
    return frag
