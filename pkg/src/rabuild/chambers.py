"""Chambers of a semi-regular right-angled building.

The building of type (W, I) with thicknesses ``q_i`` is realised as the graph
product of the cyclic groups Z/q_i over the commutation graph of W.  A chamber
is a group element in canonical normal form; ``c`` and ``d`` are i-adjacent
iff ``c^-1 d`` is a single syllable of type i, and the Weyl distance is the
image of ``c^-1 d`` in W.
"""

from __future__ import annotations

import random
from typing import Iterable

from . import kernel
from .coxeter import CoxeterDiagram, UnknownType, WeylWord


class ExponentOutOfRange(ValueError):
    pass


class SpecMismatch(ValueError):
    pass


class BuildingSpec:
    """A diagram together with finite panel thicknesses ``q_i >= 2``."""

    def __init__(self, diagram: CoxeterDiagram, thickness: dict):
        q = []
        for g in diagram.generators:
            if g not in thickness:
                raise ValueError(f"no thickness given for generator {g!r}")
            value = thickness[g]
            if isinstance(value, bool) or not isinstance(value, int) or value < 2:
                raise ValueError(f"thickness of {g!r} must be an integer >= 2, got {value!r}")
            q.append(value)
        extra = set(thickness) - set(diagram.generators)
        if extra:
            raise UnknownType(f"thickness given for unknown generators {sorted(map(str, extra))}")
        self.diagram = diagram
        self.q = tuple(q)
        self.n = diagram.n
        self.comm = diagram.comm
        self.identity = Chamber(self, ())

    @property
    def thickness(self) -> dict:
        return dict(zip(self.diagram.generators, self.q))

    @property
    def thick(self) -> bool:
        return all(v >= 3 for v in self.q)

    def __eq__(self, other):
        return isinstance(other, BuildingSpec) and self.diagram == other.diagram and self.q == other.q

    def __hash__(self):
        return hash((self.diagram, self.q))

    def __repr__(self):
        return f"BuildingSpec({list(self.diagram.generators)!r}, q={list(self.q)!r})"

    # -- construction ------------------------------------------------------
    def _nf(self, word) -> tuple:
        return kernel.normal_form(word, self.q, self.comm, self.n)

    def _chamber(self, word) -> "Chamber":
        return Chamber(self, self._nf(word))

    def normalize(self, syllables: Iterable) -> "Chamber":
        """Canonical chamber from ``(label, exponent)`` pairs, exponents in 1..q-1."""
        word = []
        for label, e in syllables:
            t = self.diagram.idx(label)
            if isinstance(e, bool) or not isinstance(e, int) or not 1 <= e < self.q[t]:
                raise ExponentOutOfRange(f"exponent {e!r} for {label!r} outside 1..{self.q[t] - 1}")
            word.append((t, e))
        return self._chamber(word)

    chamber = normalize

    def syllable(self, label, e: int = 1) -> "Chamber":
        return self.normalize([(label, e)])

    # -- group arithmetic --------------------------------------------------
    def _check(self, *cs):
        for c in cs:
            if c.spec is not self and c.spec != self:
                raise SpecMismatch("chambers belong to different buildings")

    def mult(self, a: "Chamber", b: "Chamber") -> "Chamber":
        self._check(a, b)
        if not a.word:
            return b
        if not b.word:
            return a
        return Chamber(self, self._nf(a.word + b.word))

    def inverse(self, a: "Chamber") -> "Chamber":
        self._check(a)
        return Chamber(self, self._nf(kernel.inverse_word(a.word, self.q)))

    def _delta(self, c: "Chamber", d: "Chamber") -> tuple:
        return kernel.delta_types(c.word, d.word, self.q, self.comm, self.n)

    def weyl_distance(self, c: "Chamber", d: "Chamber") -> WeylWord:
        self._check(c, d)
        return WeylWord(self.diagram.labels(self._delta(c, d)))

    def dist(self, c: "Chamber", d: "Chamber") -> int:
        """Gallery distance (length of the Weyl distance)."""
        if c.word == d.word:
            return 0
        return len(self._delta(c, d))

    def weyl_image(self, c: "Chamber") -> WeylWord:
        return WeylWord(self.diagram.labels(t for t, _ in c.word))

    # -- J-prefix factorisation -------------------------------------------
    def _split(self, word: tuple, J: frozenset):
        """Index-level split of a reduced word into (J-prefix, remainder)."""
        comm, n = self.comm, self.n
        prefix = []
        rest = []
        for t, e in word:
            if t in J:
                row = t * n
                if all(comm[row + s] for s, _ in rest):
                    prefix.append((t, e))
                    continue
            rest.append((t, e))
        if not prefix:
            return (), word
        if not rest:
            return word, ()
        return self._nf(prefix), self._nf(rest)

    def j_prefix(self, c: "Chamber", J) -> tuple:
        """``c = prefix * remainder`` with prefix in P_J and no J-letter frontable in remainder."""
        self._check(c)
        a, b = self._split(c.word, self.diagram.idx_set(J))
        return Chamber(self, a), Chamber(self, b)

    # -- randomness --------------------------------------------------------
    def random_chamber(self, max_length: int, seed) -> "Chamber":
        """Random syllables (type uniform, exponent uniform) then normalise.

        The number of letters drawn is uniform in 0..max_length; cancellations
        can only shorten the result.
        """
        if max_length < 0:
            raise ValueError("max_length must be >= 0")
        rng = seed if isinstance(seed, random.Random) else random.Random(seed)
        length = rng.randint(0, max_length)
        word = []
        for _ in range(length):
            t = rng.randrange(self.n)
            word.append((t, rng.randrange(1, self.q[t])))
        return self._chamber(word)

    def neighbours(self, c: "Chamber"):
        """All chambers adjacent to ``c``, as ``(type index, chamber)``."""
        out = []
        for t in range(self.n):
            for e in range(1, self.q[t]):
                out.append((t, Chamber(self, self._nf(c.word + ((t, e),)))))
        return out


class Chamber:
    """A chamber: a canonical syllable word over generator indices."""

    __slots__ = ("spec", "word", "_hash")

    def __init__(self, spec: BuildingSpec, word: tuple):
        self.spec = spec
        self.word = word
        self._hash = hash(word)

    def __eq__(self, other):
        return isinstance(other, Chamber) and self.word == other.word and (
            self.spec is other.spec or self.spec == other.spec
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def __len__(self):
        return len(self.word)

    def __mul__(self, other):
        return self.spec.mult(self, other)

    @property
    def syllables(self) -> tuple:
        gens = self.spec.diagram.generators
        return tuple((gens[t], e) for t, e in self.word)

    def __repr__(self):
        if not self.word:
            return "Chamber(e)"
        return "Chamber(" + " ".join(f"{g}^{e}" for g, e in self.syllables) + ")"


def sort_key(c: Chamber):
    """Deterministic order: length, then syllable sequence."""
    return (len(c.word), c.word)


def normalize(spec: BuildingSpec, syllables) -> Chamber:
    return spec.normalize(syllables)


def mult(a: Chamber, b: Chamber) -> Chamber:
    return a.spec.mult(a, b)


def inverse(a: Chamber) -> Chamber:
    return a.spec.inverse(a)


def weyl_distance(c: Chamber, d: Chamber) -> WeylWord:
    return c.spec.weyl_distance(c, d)


def j_prefix(spec: BuildingSpec, c: Chamber, J) -> tuple:
    return spec.j_prefix(c, J)


def random_chamber(spec: BuildingSpec, max_length: int, seed) -> Chamber:
    return spec.random_chamber(max_length, seed)
