# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled normal-form kernel; same contract as ``_pykernel``."""

from libc.stdlib cimport malloc, free


cdef int _reduce(int* T, int* E, int length, const int* q,
                 const unsigned char* comm, int n,
                 int* outT, int* outE) noexcept nogil:
    # append-and-merge pass; the running word stays reduced
    cdef int size = 0, i, k, t, e, s, e2, m, merged
    for i in range(length):
        t = T[i]
        e = E[i] % q[t]
        if e < 0:
            e += q[t]
        if e == 0:
            continue
        merged = 0
        k = size - 1
        while k >= 0:
            s = outT[k]
            if s == t:
                e2 = (outE[k] + e) % q[t]
                if e2:
                    outE[k] = e2
                else:
                    for m in range(k, size - 1):
                        outT[m] = outT[m + 1]
                        outE[m] = outE[m + 1]
                    size -= 1
                merged = 1
                break
            if not comm[t * n + s]:
                break
            k -= 1
        if not merged:
            outT[size] = t
            outE[size] = e
            size += 1
    return size


cdef void _lex(int* T, int* E, int size, const unsigned char* comm, int n,
               int* blockers, unsigned char* used,
               int* outT, int* outE) noexcept nogil:
    cdef int k, m, step, best, row
    for k in range(size):
        blockers[k] = 0
        used[k] = 0
        row = T[k] * n
        for m in range(k):
            if not comm[row + T[m]]:
                blockers[k] += 1
    for step in range(size):
        best = -1
        for k in range(size):
            if not used[k] and blockers[k] == 0 and (best < 0 or T[k] < T[best]):
                best = k
        used[best] = 1
        outT[step] = T[best]
        outE[step] = E[best]
        row = T[best] * n
        for m in range(best + 1, size):
            if not used[m] and not comm[row + T[m]]:
                blockers[m] -= 1


cdef class _Scratch:
    cdef int* a
    cdef int* b
    cdef int* c
    cdef int* d
    cdef int* blk
    cdef unsigned char* used
    cdef int cap

    def __cinit__(self, int cap):
        self.cap = cap
        self.a = <int*> malloc(cap * sizeof(int))
        self.b = <int*> malloc(cap * sizeof(int))
        self.c = <int*> malloc(cap * sizeof(int))
        self.d = <int*> malloc(cap * sizeof(int))
        self.blk = <int*> malloc(cap * sizeof(int))
        self.used = <unsigned char*> malloc(cap)
        if not (self.a and self.b and self.c and self.d and self.blk and self.used):
            raise MemoryError()

    def __dealloc__(self):
        free(self.a); free(self.b); free(self.c); free(self.d)
        free(self.blk); free(self.used)


cdef int* _int_array(seq) except NULL:
    cdef int k, size = len(seq)
    cdef int* out = <int*> malloc((size + 1) * sizeof(int))
    if not out:
        raise MemoryError()
    for k in range(size):
        out[k] = seq[k]
    return out


def normal_form(word, q, comm, int n):
    cdef int length = len(word), size, k
    cdef _Scratch sc = _Scratch(length + 1)
    cdef int* qa = _int_array(q)
    cdef bytes cb = bytes(comm)
    cdef const unsigned char* cm = cb
    try:
        if len(q) != n:
            raise ValueError("thickness table does not match the rank")
        k = 0
        for t, e in word:
            if not 0 <= t < n:
                raise ValueError(f"generator index {t} out of range")
            sc.a[k] = t
            sc.b[k] = e
            k += 1
        size = _reduce(sc.a, sc.b, length, qa, cm, n, sc.c, sc.d)
        _lex(sc.c, sc.d, size, cm, n, sc.blk, sc.used, sc.a, sc.b)
        return tuple([(sc.a[k], sc.b[k]) for k in range(size)])
    finally:
        free(qa)


def inverse_word(word, q):
    return tuple([(t, (-e) % q[t]) for t, e in reversed(word)])


def delta_types(a, b, q, comm, int n):
    return tuple([t for t, _ in normal_form(inverse_word(a, q) + tuple(b), q, comm, n)])


cdef int _pack(list words, int* T, int* E, int* off, int n) except -1:
    cdef int k = 0, i = 0
    for w in words:
        off[i] = k
        for t, e in w:
            if not 0 <= t < n:
                raise ValueError(f"generator index {t} out of range")
            T[k] = t
            E[k] = e
            k += 1
        i += 1
    off[i] = k
    return k


cdef int _delta(int* T, int* E, int* off, int i, int j, const int* q,
                const unsigned char* comm, int n, int* wt, int* we,
                int* rt, int* re, int* blk, unsigned char* used,
                int* outT) noexcept nogil:
    # types of nf(word_i^-1 word_j) into outT; returns length
    cdef int k, m = 0, t, size
    for k in range(off[i + 1] - 1, off[i] - 1, -1):
        t = T[k]
        wt[m] = t
        we[m] = q[t] - E[k]
        m += 1
    for k in range(off[j], off[j + 1]):
        wt[m] = T[k]
        we[m] = E[k]
        m += 1
    size = _reduce(wt, we, m, q, comm, n, rt, re)
    _lex(rt, re, size, comm, n, blk, used, outT, wt)
    return size


def isometry_violation(src, dst, q, comm, int n):
    cdef list s_words = list(src), d_words = list(dst)
    cdef int size = len(s_words)
    if len(d_words) != size:
        raise ValueError("src and dst differ in length")
    cdef int total_s = sum(len(w) for w in s_words)
    cdef int total_d = sum(len(w) for w in d_words)
    cdef int maxlen = 1
    for w in s_words:
        maxlen = max(maxlen, len(w))
    for w in d_words:
        maxlen = max(maxlen, len(w))
    cdef int cap = 2 * maxlen + 2
    cdef int* sT = <int*> malloc((total_s + 1) * sizeof(int))
    cdef int* sE = <int*> malloc((total_s + 1) * sizeof(int))
    cdef int* sO = <int*> malloc((size + 1) * sizeof(int))
    cdef int* dT = <int*> malloc((total_d + 1) * sizeof(int))
    cdef int* dE = <int*> malloc((total_d + 1) * sizeof(int))
    cdef int* dO = <int*> malloc((size + 1) * sizeof(int))
    cdef _Scratch sc = _Scratch(cap)
    cdef _Scratch sc2 = _Scratch(cap)
    cdef int* qa = _int_array(q)
    cdef bytes cb = bytes(comm)
    cdef const unsigned char* cm = cb
    cdef int i, j, k, la, lb, bad_i = -1, bad_j = -1
    try:
        if not (sT and sE and sO and dT and dE and dO):
            raise MemoryError()
        _pack(s_words, sT, sE, sO, n)
        _pack(d_words, dT, dE, dO, n)
        with nogil:
            for i in range(size):
                for j in range(i + 1, size):
                    la = _delta(sT, sE, sO, i, j, qa, cm, n, sc.a, sc.b, sc.c, sc.d,
                                sc.blk, sc.used, sc2.a)
                    lb = _delta(dT, dE, dO, i, j, qa, cm, n, sc.a, sc.b, sc.c, sc.d,
                                sc.blk, sc.used, sc2.b)
                    if la != lb:
                        bad_i = i
                        bad_j = j
                        break
                    for k in range(la):
                        if sc2.a[k] != sc2.b[k]:
                            bad_i = i
                            bad_j = j
                            break
                    if bad_i >= 0:
                        break
                if bad_i >= 0:
                    break
    finally:
        free(sT); free(sE); free(sO); free(dT); free(dE); free(dO); free(qa)
    if bad_i >= 0:
        return (bad_i, bad_j)
    return None


def distance_table(rows, cols, q, comm, int n):
    """Gallery distances ``len(nf(rows[i]^-1 cols[j]))`` as a list of tuples."""
    cdef list r_words = list(rows), c_words = list(cols)
    cdef int nr = len(r_words), nc = len(c_words)
    cdef int total_r = sum(len(w) for w in r_words)
    cdef int total_c = sum(len(w) for w in c_words)
    cdef int maxlen = 1
    for w in r_words:
        maxlen = max(maxlen, len(w))
    for w in c_words:
        maxlen = max(maxlen, len(w))
    cdef int cap = 2 * maxlen + 2
    cdef int* rT = <int*> malloc((total_r + 1) * sizeof(int))
    cdef int* rE = <int*> malloc((total_r + 1) * sizeof(int))
    cdef int* rO = <int*> malloc((nr + 1) * sizeof(int))
    cdef int* cT = <int*> malloc((total_c + 1) * sizeof(int))
    cdef int* cE = <int*> malloc((total_c + 1) * sizeof(int))
    cdef int* cO = <int*> malloc((nc + 1) * sizeof(int))
    cdef int* out = <int*> malloc((nr * nc + 1) * sizeof(int))
    cdef _Scratch sc = _Scratch(cap)
    cdef int* qa = _int_array(q)
    cdef bytes cb = bytes(comm)
    cdef const unsigned char* cm = cb
    cdef int i, j, k, m, t
    try:
        if not (rT and rE and rO and cT and cE and cO and out):
            raise MemoryError()
        _pack(r_words, rT, rE, rO, n)
        _pack(c_words, cT, cE, cO, n)
        with nogil:
            for i in range(nr):
                for j in range(nc):
                    m = 0
                    for k in range(rO[i + 1] - 1, rO[i] - 1, -1):
                        t = rT[k]
                        sc.a[m] = t
                        sc.b[m] = qa[t] - rE[k]
                        m += 1
                    for k in range(cO[j], cO[j + 1]):
                        sc.a[m] = cT[k]
                        sc.b[m] = cE[k]
                        m += 1
                    out[i * nc + j] = _reduce(sc.a, sc.b, m, qa, cm, n, sc.c, sc.d)
        return [tuple([out[i * nc + j] for j in range(nc)]) for i in range(nr)]
    finally:
        free(rT); free(rE); free(rO); free(cT); free(cE); free(cO); free(out); free(qa)
