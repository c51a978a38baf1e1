"""Pure-Python normal-form kernel.

Words are sequences of ``(type, exponent)`` pairs over a graph product of
cyclic groups.  ``q[t]`` is the order of the cyclic group of type ``t`` and
``comm`` is a flat ``n*n`` bytes-like table with ``comm[s*n + t] == 1`` iff the
types ``s`` and ``t`` commute (the diagonal is 0).
"""


def normal_form(word, q, comm, n):
    if len(q) != n:
        raise ValueError("thickness table does not match the rank")
    types = []
    exps = []
    for t, e in word:
        if not 0 <= t < n:
            raise ValueError(f"generator index {t} out of range")
        e %= q[t]
        if not e:
            continue
        k = len(types) - 1
        row = t * n
        merged = False
        while k >= 0:
            s = types[k]
            if s == t:
                e2 = (exps[k] + e) % q[t]
                if e2:
                    exps[k] = e2
                else:
                    del types[k]
                    del exps[k]
                merged = True
                break
            if not comm[row + s]:
                break
            k -= 1
        if not merged:
            types.append(t)
            exps.append(e)
    return _lex_order(types, exps, comm, n)


def _lex_order(types, exps, comm, n):
    size = len(types)
    if size < 2:
        return tuple(zip(types, exps))
    blockers = [0] * size
    for k in range(size):
        row = types[k] * n
        for m in range(k):
            if not comm[row + types[m]]:
                blockers[k] += 1
    used = [False] * size
    out = []
    for _ in range(size):
        best = -1
        for k in range(size):
            if not used[k] and blockers[k] == 0 and (best < 0 or types[k] < types[best]):
                best = k
        used[best] = True
        out.append((types[best], exps[best]))
        row = types[best] * n
        for m in range(best + 1, size):
            if not used[m] and not comm[row + types[m]]:
                blockers[m] -= 1
    return tuple(out)


def inverse_word(word, q):
    return tuple((t, (-e) % q[t]) for t, e in reversed(word))


def delta_types(a, b, q, comm, n):
    """Type sequence of the normal form of ``a^-1 b`` (the Weyl distance)."""
    return tuple(t for t, _ in normal_form(inverse_word(a, q) + tuple(b), q, comm, n))


def isometry_violation(src, dst, q, comm, n):
    """First index pair ``(i, j)`` with delta(src_i, src_j) != delta(dst_i, dst_j).

    Returns ``None`` when the assignment ``src[k] -> dst[k]`` preserves the Weyl
    distance on every pair.
    """
    size = len(src)
    if len(dst) != size:
        raise ValueError("src and dst differ in length")
    inv_src = [inverse_word(w, q) for w in src]
    inv_dst = [inverse_word(w, q) for w in dst]
    for i in range(size):
        for j in range(i + 1, size):
            a = normal_form(inv_src[i] + tuple(src[j]), q, comm, n)
            b = normal_form(inv_dst[i] + tuple(dst[j]), q, comm, n)
            if len(a) != len(b) or any(x[0] != y[0] for x, y in zip(a, b)):
                return (i, j)
    return None


def distance_table(rows, cols, q, comm, n):
    """Gallery distances ``len(nf(rows[i]^-1 cols[j]))`` as a list of tuples."""
    out = []
    for a in rows:
        inv = inverse_word(a, q)
        out.append(tuple(len(normal_form(inv + tuple(b), q, comm, n)) for b in cols))
    return out
