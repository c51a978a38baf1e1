"""The compiled and pure-Python kernels agree, and both match a rewriting oracle."""

import random

import pytest

from rabuild import _pykernel, kernel

from oracles import RewritingOracle, all_words

try:
    from rabuild import _ckernel
except ImportError:  # extension not built
    _ckernel = None

needs_ext = pytest.mark.skipif(_ckernel is None, reason="compiled kernel not built")


def _comm(n, pairs):
    comm = bytearray(n * n)
    for i, j in pairs:
        comm[i * n + j] = comm[j * n + i] = 1
    return bytes(comm)


DIHEDRAL = ((3, 3), _comm(2, []))
PENTAGON = ((3,) * 5, _comm(5, [(i, (i + 1) % 5) for i in range(5)]))
MIXED = ((2, 4, 3, 5), _comm(4, [(0, 1), (1, 2), (0, 3)]))


@pytest.mark.parametrize("q, comm", [DIHEDRAL, PENTAGON])
def test_normal_form_matches_rewriting_closure(q, comm):
    n = len(q)
    oracle = RewritingOracle(q, lambda a, b: comm[a * n + b])
    for w in all_words(q, 6):
        assert tuple(kernel.normal_form(list(w), q, comm, n)) == oracle.canonical(w), w
    assert oracle.conflicts == []


def test_rewriting_on_mixed_thickness():
    q, comm = MIXED
    oracle = RewritingOracle(q, lambda a, b: comm[a * 4 + b])
    for w in all_words(q, 4):
        assert tuple(kernel.normal_form(list(w), q, comm, 4)) == oracle.canonical(w)


def _random_words(q, count, seed, max_len=12):
    rng = random.Random(seed)
    for _ in range(count):
        yield [(t, rng.randrange(1, q[t])) for t in (rng.randrange(len(q)) for _ in range(rng.randint(0, max_len)))]


@needs_ext
@pytest.mark.parametrize("q, comm", [DIHEDRAL, PENTAGON, MIXED])
def test_backends_agree(q, comm):
    n = len(q)
    words = list(_random_words(q, 400, seed=11))
    for a, b in zip(words, words[1:]):
        assert tuple(_ckernel.normal_form(a, q, comm, n)) == tuple(_pykernel.normal_form(a, q, comm, n))
        na = tuple(_pykernel.normal_form(a, q, comm, n))
        nb = tuple(_pykernel.normal_form(b, q, comm, n))
        assert tuple(_ckernel.inverse_word(na, q)) == tuple(_pykernel.inverse_word(na, q))
        assert tuple(_ckernel.delta_types(na, nb, q, comm, n)) == tuple(_pykernel.delta_types(na, nb, q, comm, n))
    rows = [tuple(_pykernel.normal_form(w, q, comm, n)) for w in words[:30]]
    assert _ckernel.distance_table(rows, rows, q, comm, n) == _pykernel.distance_table(rows, rows, q, comm, n)
    moved = rows[1:] + rows[:1]
    assert _ckernel.isometry_violation(rows, rows, q, comm, n) is None
    assert _ckernel.isometry_violation(rows, moved, q, comm, n) == _pykernel.isometry_violation(rows, moved, q, comm, n)


@pytest.mark.parametrize("impl", [_pykernel, pytest.param(_ckernel, marks=needs_ext)])
def test_rejects_bad_indices(impl):
    q, comm = DIHEDRAL
    with pytest.raises(ValueError):
        impl.normal_form([(2, 1)], q, comm, 2)
    with pytest.raises(ValueError):
        impl.normal_form([(0, 1)], (3,), comm, 2)


def test_backend_name():
    assert kernel.BACKEND in ("cython", "python")
