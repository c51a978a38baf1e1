"""Brute-force reference implementations used by the tests.

None of these call into the package's normal-form or projection code.
"""

from itertools import product


class RewritingOracle:
    """Canonical forms by exhaustive rewriting in a graph product of cyclic groups.

    Moves: swap adjacent syllables of distinct commuting types; merge adjacent
    syllables of equal type (adding exponents mod q, dropping zeros).  A word
    with no merge reachable by swaps is reduced, and its representative is the
    least word of its swap class ordered by type sequence.  Every merge path
    is followed, so a non-confluent system would show up as a conflict.
    """

    def __init__(self, q, commutes):
        self.q = q
        self.commutes = commutes
        self.memo = {}
        self.conflicts = []

    def swap_class(self, word):
        seen = {word}
        stack = [word]
        while stack:
            w = stack.pop()
            for k in range(len(w) - 1):
                a, b = w[k], w[k + 1]
                if a[0] != b[0] and self.commutes(a[0], b[0]):
                    v = w[:k] + (b, a) + w[k + 2:]
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
        return seen

    def canonical(self, word):
        word = tuple(word)
        hit = self.memo.get(word)
        if hit is not None:
            return hit
        cls = self.swap_class(word)
        results = set()
        for w in cls:
            for k in range(len(w) - 1):
                (s, e), (t, f) = w[k], w[k + 1]
                if s == t:
                    e2 = (e + f) % self.q[s]
                    mid = ((s, e2),) if e2 else ()
                    results.add(self.canonical(w[:k] + mid + w[k + 2:]))
        if not results:
            best = min(cls, key=lambda w: ([t for t, _ in w], [e for _, e in w]))
        else:
            if len(results) > 1:
                self.conflicts.append(word)
            best = min(results)
        for w in cls:
            self.memo[w] = best
        return best


def all_words(q, max_len):
    letters = [(t, e) for t in range(len(q)) for e in range(1, q[t])]
    for n in range(max_len + 1):
        yield from product(letters, repeat=n)


def bfs_distances(spec, center, radius):
    """Gallery distances by plain BFS over the neighbour relation."""
    dist = {center: 0}
    frontier = [center]
    for r in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for _, y in spec.neighbours(x):
                if y not in dist:
                    dist[y] = r
                    nxt.append(y)
        frontier = nxt
    return dist


def closest_in(spec, chambers, x):
    """The unique chamber of ``chambers`` nearest to ``x``, or None on a tie."""
    ds = sorted((spec.dist(c, x), c) for c in chambers)
    if len(ds) > 1 and ds[0][0] == ds[1][0]:
        return None
    return ds[0][1]
