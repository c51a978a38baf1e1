"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are collected in ``RESULTS`` and repeated in the terminal summary
(see conftest.py), so they show up without ``-s``.
"""

import random
import subprocess
import sys
import time

import pytest

from rabuild import autos, verify
from rabuild.autos import (
    PreconditionFailed,
    commutator_witness,
    is_valid_on_ball,
    lemma_u_element,
    local_splitting_generators,
    panel_extension,
    peel,
    random_panel_perm,
    strongtrans_match,
    wing_restrict,
)
from rabuild.cli import fixture_path, load_fixture
from rabuild.coxeter import ONE_ENDED, Partition, commuting_subsets, ends_classify
from rabuild.geometry import (
    Wing,
    _panel,
    _wall,
    ball,
    grow_apartment,
    proj_chamber,
    residue_of,
    spherical_residues_in,
    standard_apartment,
    wing_contains,
)
from rabuild.verify import CheckConfig, run_check

from oracles import RewritingOracle, all_words, closest_in

RESULTS = {}

FIXTURE_RADIUS = {"dihedral": 4, "pentagon": 3, "split3": 3}


def report(number: int, ok: bool, detail: str):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[number] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def specs():
    return {name: load_fixture(name).spec for name in FIXTURE_RADIUS}


def _checks(spec, names, radius, trials, seed=0):
    cfg = CheckConfig(spec, radius=radius, trials=trials, seed=seed)
    return [run_check(name, cfg) for name in names]


def _summary(reports):
    bad = [r for r in reports if not r.passed]
    total = sum(r.counts["instances"] for r in reports)
    text = f"{len(reports)} checks, {total} instances"
    if bad:
        text += f"; failing: {', '.join(r.name for r in bad)} ({bad[0].counterexample['reason']})"
    return not bad, text


# -- 1 ------------------------------------------------------------------------


def test_criterion_01_normal_form_soundness(specs):
    start = time.perf_counter()
    words = 0
    mismatches = []
    conflicts = 0
    for name in ("dihedral", "pentagon"):
        spec = specs[name]
        oracle = RewritingOracle(spec.q, spec.diagram.commutes)
        for w in all_words(spec.q, 6):
            words += 1
            if spec._nf(w) != oracle.canonical(w):
                mismatches.append((name, w))
        conflicts += len(oracle.conflicts)
    elapsed = time.perf_counter() - start
    ok = not mismatches and not conflicts and elapsed < 60
    report(1, ok, f"{words} words, {len(mismatches)} mismatches, {conflicts} rewriting conflicts, {elapsed:.1f} s")


# -- 2 ------------------------------------------------------------------------


def test_criterion_02_gate_property(specs):
    reports = [run_check("gate", CheckConfig(specs[n], radius=FIXTURE_RADIUS[n])) for n in ("dihedral", "pentagon")]
    ok, text = _summary(reports)
    report(2, ok, text)


# -- 3 ------------------------------------------------------------------------


def test_criterion_03_parallelism(specs):
    reports = []
    for name in ("dihedral", "pentagon"):
        reports += _checks(specs[name], ["parallel_criterion", "parallel_equivalence"], FIXTURE_RADIUS[name], trials=50)
    ok, text = _summary(reports)
    report(3, ok, text)


# -- 4 ------------------------------------------------------------------------


def _wing_intersection_failures(spec, radius):
    """X_J(c) = ⋂ X_j(c) on the whole ball, for c the centre and every spherical J of rank >= 2."""
    b = ball(spec, spec.identity, radius)
    members = b.sorted()
    D = spec.diagram
    failures = 0
    count = 0
    centres = [x for x in members if b.members[x] <= 1]
    for c in centres:
        for R in spherical_residues_in(ball(spec, c, 2)):
            if R.rank < 2 or c not in R:
                continue
            labels = [D.generators[t] for t in sorted(R.J)]
            residue = R.chambers()
            panels = {j: _panel(c, D.idx(j)).chambers() for j in labels}
            for x in members:
                count += 1
                whole = closest_in(spec, residue, x) == c
                parts = all(closest_in(spec, panels[j], x) == c for j in labels)
                if whole != parts or whole != wing_contains(Wing.of(c, labels), x):
                    failures += 1
    return count, failures


def _concat_failures(spec, radius):
    """Exhaustive gallery additivity through the wall-residue, centre panels of every type."""
    b = ball(spec, spec.identity, radius)
    members = b.sorted()
    words = [x.word for x in members]
    table = spec_table(spec, words)
    pos = {x: k for k, x in enumerate(members)}
    failures = 0
    count = 0
    c = spec.identity
    for t in range(spec.n):
        P = _panel(c, t).chambers()
        wall = _wall(c, t)
        inside = [x for x in members if closest_in(spec, P, x) == c]
        outside = [x for x in members if closest_in(spec, P, x) != c]
        proj = {x: proj_chamber(wall, x) for x in members}
        for x in inside:
            for y in outside:
                count += 1
                p, p2 = proj[x], proj[y]
                total = spec.dist(x, p) + spec.dist(p, p2) + spec.dist(p2, y)
                if total != table[pos[x]][pos[y]]:
                    failures += 1
    return count, failures


def spec_table(spec, words):
    from rabuild import kernel

    return kernel.distance_table(words, words, spec.q, spec.comm, spec.n)


def test_criterion_04_wing_suite(specs):
    reports = []
    for name in ("dihedral", "pentagon"):
        spec, r = specs[name], FIXTURE_RADIUS[name]
        reports += _checks(spec, ["wing_convexity", "wing_inclusion", "balls_in_wings", "partition_into_wings"], r, trials=100)
    ok, text = _summary(reports)
    extra = []
    intersections = 0
    for name in ("dihedral", "pentagon"):
        spec, r = specs[name], FIXTURE_RADIUS[name]
        # the dihedral diagram has no rank-2 spherical residues, so only the pentagon contributes here
        n_int, f_int = _wing_intersection_failures(spec, r)
        n_cat, f_cat = _concat_failures(spec, r)
        intersections += n_int
        ok = ok and f_int == 0 and n_cat > 0 and f_cat == 0
        extra.append(f"{name}: intersection {f_int}/{n_int} bad, concat {f_cat}/{n_cat} bad")
    ok = ok and intersections > 0
    report(4, ok, text + "; " + "; ".join(extra))


# -- 5 ------------------------------------------------------------------------


def _random_targets(spec, rng, b):
    """Inputs for lemma_u_element: panels at a common distance n from x, x projecting to c_s."""
    D = spec.diagram
    x = rng.choice([y for y in b.sorted() if b.members[y] <= 1])
    n = rng.randint(0, 2)
    sphere = [y for y in ball(spec, x, n).sorted() if spec.dist(x, y) == n]
    rng.shuffle(sphere)
    targets = []
    seen = set()
    for c in sphere:
        for t in rng.sample(range(spec.n), spec.n):
            if (c, t) in seen or proj_chamber(_wall(c, t), x) != c:
                continue
            P = _panel(c, t)
            seen.add((c, t))
            targets.append((c, D.generators[t], random_panel_perm(P, c, rng)))
            break
        if len(targets) >= rng.randint(1, 3):
            break
    return x, targets


def _constructions(spec, kind, rng, b, partition=None):
    D = spec.diagram
    near = [y for y in b.sorted() if b.members[y] <= 1]
    if kind == "panel_extension":
        c = rng.choice([y for y in b.sorted() if b.members[y] <= 2])
        P = _panel(c, rng.randrange(spec.n))
        return panel_extension(P, random_panel_perm(P, None, rng))
    if kind == "wing_restriction":
        c = rng.choice(near)
        t = rng.randrange(spec.n)
        ds = _panel(c, t).chambers()
        g = autos.compose(autos.Identity(spec), *[autos.v_i_sample(d, D.generators[t], rng, max_depth=2) for d in ds if rng.random() < 0.7])
        return wing_restrict(g, rng.choice(ds), D.generators[t], b.radius + 4)
    if kind == "lemma_u_element":
        x, targets = _random_targets(spec, rng, b)
        return lemma_u_element(x, targets)
    if kind == "strongtrans_match":
        c = rng.choice(near)
        r = 3 if spec.n <= 3 else 2
        A = grow_apartment(spec, c, r, rng)
        if rng.random() < 0.3:
            A2 = standard_apartment(spec, {g: rng.randrange(1, spec.q[t]) for t, g in enumerate(D.generators)}, c, r)
        else:
            A2 = grow_apartment(spec, c, r, rng)
        return strongtrans_match(A, A2, c, r)
    if kind == "peel":
        R = residue_of(rng.choice(near), [])
        if rng.random() < 0.5:
            J = rng.choice([s for s in commuting_subsets(D) if len(s) <= 2])
            R = residue_of(R.base, [D.generators[t] for t in J])
        n = rng.randint(0, 1)
        h = verify.admissible_product(spec, R, {n, n + 1}, rng.randint(1, 3), rng)
        g, certified = peel(h, R, n)
        assert certified
        return g
    if kind == "commutator_witness":
        g, sigma, c, c2, h = verify.commutator_setup(spec, rng, near)
        return commutator_witness(g, sigma, c, c2, h)
    if kind == "local_splitting":
        R = residue_of(spec.identity, partition.I0)
        U1, U2 = local_splitting_generators(R, partition, 1, rng)
        return rng.choice(U1.gens + U2.gens)
    raise ValueError(kind)


KINDS = ["panel_extension", "wing_restriction", "lemma_u_element", "strongtrans_match", "peel", "commutator_witness", "local_splitting"]


@pytest.mark.slow
def test_criterion_05_automorphism_validity(specs):
    per_kind = 500
    counts = {}
    failures = []
    for kind in KINDS:
        if kind == "local_splitting":
            plan = [("dihedral", per_kind // 2), ("split3", per_kind - per_kind // 2)]
        else:
            plan = [("dihedral", per_kind // 2), ("pentagon", per_kind - per_kind // 2)]
        done = 0
        for name, count in plan:
            spec = specs[name]
            radius = 4 if name == "dihedral" else 3
            b = ball(spec, spec.identity, radius)
            partition = ends_classify(spec.diagram) if kind == "local_splitting" else None
            for k in range(count):
                rng = random.Random(f"{kind}:{name}:{k}")
                done += 1
                try:
                    a = _constructions(spec, kind, rng, b, partition)
                except (PreconditionFailed, autos.NotAdmissible, autos.MatchFailure, autos.NoRoom, AssertionError) as exc:
                    failures.append((kind, name, k, f"construction failed: {exc!r}"))
                    continue
                rep = is_valid_on_ball(a, b)
                if not rep.ok:
                    failures.append((kind, name, k, rep.reason))
        counts[kind] = done
    ok = not failures and all(v >= per_kind for v in counts.values())
    detail = ", ".join(f"{k} {v}" for k, v in counts.items())
    if failures:
        detail += f"; first failure {failures[0]}"
    report(5, ok, detail)


# -- 6 to 9 -------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_06_fixator_decomposition(specs):
    reports = [run_check("fix_product_decomposition", CheckConfig(specs[n], radius=FIXTURE_RADIUS[n], trials=100, seed=6))
               for n in ("dihedral", "pentagon")]
    ok, text = _summary(reports)
    ok = ok and all(r.counts["instances"] == 100 for r in reports)
    report(6, ok, text)


@pytest.mark.slow
def test_criterion_07_strong_transitivity(specs):
    reports = [run_check("strong_transitivity", CheckConfig(specs[n], radius=3, trials=50, seed=7))
               for n in ("dihedral", "pentagon")]
    ok, text = _summary(reports)
    ok = ok and all(r.counts["instances"] == 50 for r in reports)
    report(7, ok, text)


@pytest.mark.slow
def test_criterion_08_peeling(specs):
    reports = []
    for n in ("dihedral", "pentagon"):
        cfg = CheckConfig(specs[n], radius=FIXTURE_RADIUS[n], trials=100, seed=8)
        reports.append(run_check("peeling", cfg))
        reports.append(run_check("fix_generators", cfg))
    ok, text = _summary(reports)
    ok = ok and all(r.counts["instances"] == 100 for r in reports)
    report(8, ok, text)


@pytest.mark.slow
def test_criterion_09_commutator(specs):
    rep = run_check("commutator", CheckConfig(specs["dihedral"], radius=4, trials=50, seed=9))
    ok, text = _summary([rep])
    report(9, ok and rep.counts["instances"] == 50, text)


# -- 10 -----------------------------------------------------------------------


def test_criterion_10_ends_trichotomy(specs):
    notes = []
    ok = True
    expected = {
        "dihedral": Partition(frozenset(), frozenset({"a"}), frozenset({"b"})),
        "split3": Partition(frozenset(), frozenset({1, 2}), frozenset({3})),
        "pentagon": ONE_ENDED,
    }
    for name, want in expected.items():
        got = ends_classify(specs[name].diagram)
        ok = ok and got == want
        notes.append(f"{name}={got!r}")
        reports = _checks(specs[name], ["tree_decomposition", "local_splitting", "ends_consistency"], FIXTURE_RADIUS[name], trials=20)
        good, _ = _summary(reports)
        ok = ok and good
        tree = reports[0]
        if want is ONE_ENDED:
            # every candidate partition must fail to give a tree
            ok = ok and tree.counts["instances"] > 0
        else:
            ok = ok and tree.counts["instances"] > 0 and reports[1].counts["instances"] > 0
    pent = specs["pentagon"]
    heuristic = verify.ends_ball_heuristic(pent, pent.identity, 1, 4)
    ok = ok and heuristic
    notes.append(f"pentagon heuristic(1,4)={heuristic}")
    report(10, ok, "; ".join(notes))


# -- 11 -----------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_11_end_to_end():
    start = time.perf_counter()
    codes = {}
    for name in ("dihedral", "pentagon", "split3"):
        proc = subprocess.run(
            [sys.executable, "-m", "rabuild.cli", "check", str(fixture_path(name)), "--suite", "all"],
            capture_output=True, text=True,
        )
        codes[name] = proc.returncode
    elapsed = time.perf_counter() - start
    ok = all(c == 0 for c in codes.values()) and elapsed < 300
    report(11, ok, f"exit codes {codes}, {elapsed:.0f} s total")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
