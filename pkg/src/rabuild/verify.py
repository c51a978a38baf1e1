"""Named, seeded property checks with brute-force oracles.

Each check is a generator of concrete instances plus an evaluator.  Instances
serialize to plain JSON, so a failing instance can be replayed directly with
``run_check(name, cfg, directed=[counterexample["instance"]])``.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Callable

from . import autos, geometry, kernel
from .autos import (
    Identity,
    compose,
    fixes_pointwise,
    is_valid_on_ball,
    left_translation,
    panel_extension,
    panel_perm,
)
from .chambers import BuildingSpec, Chamber, sort_key
from .coxeter import ONE_ENDED, Partition, commuting_subsets, ends_classify, is_valid_partition
from .geometry import Residue, _panel, _residue, _wall, ball, spherical_residues_in


class UnknownCheck(KeyError):
    pass


# ---------------------------------------------------------------------------
# Configuration and reports


@dataclass(frozen=True)
class Ops:
    """The operations under test; swapped out by the harness self-test."""

    proj_chamber: Callable = geometry.proj_chamber
    proj_residue: Callable = geometry.proj_residue
    is_parallel: Callable = geometry.is_parallel
    in_i_wing: Callable = geometry.in_i_wing


def _bad_proj_chamber(R, c):
    return R.base


def _bad_proj_residue(R, S):
    return R


def _bad_is_parallel(R, S):
    return R.J == S.J


def _bad_in_i_wing(c, t, x):
    return True


CORRUPTIONS = {
    "proj_chamber": _bad_proj_chamber,
    "proj_residue": _bad_proj_residue,
    "is_parallel": _bad_is_parallel,
    "in_i_wing": _bad_in_i_wing,
}


def corrupted_ops(name: str) -> Ops:
    if name not in CORRUPTIONS:
        raise ValueError(f"no corruption named {name!r}; choose from {sorted(CORRUPTIONS)}")
    return replace(Ops(), **{name: CORRUPTIONS[name]})


@dataclass(frozen=True)
class Limits:
    ball_cap: int = geometry.DEFAULT_BALL_CAP
    max_counterexamples: int = 100


@dataclass(frozen=True)
class CheckConfig:
    spec: BuildingSpec
    radius: int = 3
    trials: int = 20
    seed: int = 0
    limits: Limits = Limits()
    ops: Ops = Ops()

    def __post_init__(self):
        if self.radius < 1:
            raise ValueError("radius must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass
class CheckReport:
    name: str
    status: str
    counts: dict
    counterexample: dict | None
    seed: int
    elapsed_ms: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "counts": dict(self.counts),
            "counterexample": self.counterexample,
            "seed": self.seed,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "details": self.details,
        }


# ---------------------------------------------------------------------------
# Serialization of instances


def encode(obj):
    if isinstance(obj, Chamber):
        return {"chamber": [[g, e] for g, e in obj.syllables]}
    if isinstance(obj, Residue):
        D = obj.spec.diagram
        return {"residue": {"base": encode(obj.base), "type": [D.generators[t] for t in sorted(obj.J)]}}
    if isinstance(obj, Partition):
        return {"partition": [list(obj.I0), list(obj.I1), list(obj.I2)]}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    return obj


def decode(spec: BuildingSpec, obj):
    if isinstance(obj, dict):
        if "chamber" in obj:
            return spec.normalize([tuple(p) for p in obj["chamber"]])
        if "residue" in obj:
            r = obj["residue"]
            return geometry.residue_of(decode(spec, r["base"]), r["type"])
        if "partition" in obj:
            return Partition(*(tuple(s) for s in obj["partition"]))
    if isinstance(obj, list):
        return tuple(decode(spec, x) for x in obj)
    return obj


# ---------------------------------------------------------------------------
# Shared context and brute-force oracles


class _Ctx:
    def __init__(self, cfg: CheckConfig, name: str):
        self.cfg = cfg
        self.spec = cfg.spec
        self.D = cfg.spec.diagram
        self.radius = cfg.radius
        self.trials = cfg.trials
        self.ops = cfg.ops
        self.rng = random.Random(f"{cfg.seed}:{name}")
        self.center = cfg.spec.identity
        self._ball = None
        self._index = None
        self._table = None
        self._chambers = {}
        self.extra = {}

    @property
    def ball(self):
        if self._ball is None:
            self._ball = ball(self.spec, self.center, self.radius, cap=self.cfg.limits.ball_cap)
        return self._ball

    def members(self) -> list:
        return self.ball.sorted()

    def near(self, k: int) -> list:
        return [x for x in self.members() if self.ball.members[x] <= k]

    def dist(self, x: Chamber, y: Chamber) -> int:
        if self._table is None:
            ms = self.members()
            self._index = {x: k for k, x in enumerate(ms)}
            words = [x.word for x in ms]
            spec = self.spec
            self._table = kernel.distance_table(words, words, spec.q, spec.comm, spec.n)
        a = self._index.get(x)
        b = self._index.get(y)
        if a is not None and b is not None:
            return self._table[a][b]
        return self.spec.dist(x, y)

    def chambers(self, R: Residue) -> list:
        out = self._chambers.get(R)
        if out is None:
            out = R.chambers()
            self._chambers[R] = out
        return out

    def brute_proj(self, R: Residue, x: Chamber):
        """Closest chamber of a spherical residue by enumeration; None on a tie."""
        best = None
        best_d = None
        tie = False
        for d in self.chambers(R):
            k = self.dist(x, d)
            if best_d is None or k < best_d:
                best, best_d, tie = d, k, False
            elif k == best_d:
                tie = True
        return None if tie else best

    def brute_in_wing(self, c: Chamber, t: int, x: Chamber) -> bool:
        return self.brute_proj(_panel(c, t), x) == c

    def spherical_types(self, nonempty=True) -> list:
        out = [frozenset(s) for s in commuting_subsets(self.D)]
        return [J for J in out if J or not nonempty]

    def far(self, t: int) -> list:
        return [s for s in range(self.D.n) if s != t and not self.D.commutes(s, t)]

    def label(self, t: int):
        return self.D.generators[t]


def _rand_word(ctx: _Ctx, letters, length: int) -> tuple:
    letters = sorted(letters)
    if not letters:
        return ()
    return tuple((t, ctx.rng.randrange(1, ctx.spec.q[t])) for t in (ctx.rng.choice(letters) for _ in range(length)))


def _times(x: Chamber, word) -> Chamber:
    return Chamber(x.spec, x.spec._nf(x.word + tuple(word)))


# ---------------------------------------------------------------------------
# Check registry


@dataclass
class _Check:
    name: str
    instances: Callable
    evaluate: Callable


_REGISTRY: dict = {}


def _register(name):
    def wrap(pair):
        inst, ev = pair
        _REGISTRY[name] = _Check(name, inst, ev)
        return pair

    return wrap


CHECK_NAMES = (
    "gate",
    "nested_proj",
    "product_residue",
    "constant_distance",
    "parallel_criterion",
    "parallel_equivalence",
    "wing_convexity",
    "wing_inclusion",
    "concat_gallery",
    "balls_in_wings",
    "partition_into_wings",
    "panel_extension",
    "fix_product_decomposition",
    "nonabelian",
    "strong_transitivity",
    "commutator",
    "peeling",
    "fix_generators",
    "ends_consistency",
    "tree_decomposition",
    "local_splitting",
)


# -- projections -------------------------------------------------------------


def _gate_instances(ctx):
    residues = [R for R in spherical_residues_in(ctx.ball) if R.J]
    for R in residues:
        for c in ctx.members():
            yield (R, c)


def _gate_eval(ctx, inst):
    R, c = inst
    p = ctx.ops.proj_chamber(R, c)
    chambers = ctx.chambers(R)
    if p not in chambers:
        return f"projection {p!r} is not a chamber of the residue"
    dcp = ctx.dist(c, p)
    for d in chambers:
        if ctx.dist(c, d) != dcp + ctx.dist(p, d):
            return f"length identity fails for target {d!r}"
    return None


_register("gate")((_gate_instances, _gate_eval))


def _nested_instances(ctx):
    types = ctx.spherical_types()
    all_types = ctx.spherical_types(nonempty=False)
    near = ctx.near(max(1, ctx.radius - 1))
    for _ in range(ctx.trials):
        x = ctx.rng.choice(near)
        K = ctx.rng.choice(types)
        S = _residue(ctx.spec, x, K)
        J = frozenset(t for t in K if ctx.rng.random() < 0.5)
        R = _residue(ctx.spec, ctx.rng.choice(ctx.chambers(S)), J)
        z = ctx.rng.choice(ctx.members())
        L = ctx.rng.choice(all_types)
        yield (R, S, _residue(ctx.spec, z, L))


def _nested_eval(ctx, inst):
    R, S, sigma = inst
    ops = ctx.ops
    direct = ops.proj_residue(R, sigma)
    nested = ops.proj_residue(R, ops.proj_residue(S, sigma))
    if direct != nested:
        return f"proj_R(σ) = {direct!r} but proj_R(proj_S(σ)) = {nested!r}"
    image = {ctx.brute_proj(R, w) for w in ctx.chambers(sigma)}
    if None in image or image != set(ctx.chambers(direct)):
        return "projected residue differs from the image of its chambers"
    for w in ctx.chambers(sigma):
        if ops.proj_chamber(R, w) != ops.proj_chamber(R, ops.proj_chamber(S, w)):
            return f"chamber projections disagree at {w!r}"
    return None


_register("nested_proj")((_nested_instances, _nested_eval))


def _product_instances(ctx):
    pairs = []
    for K in ctx.spherical_types():
        if len(K) < 2:
            continue
        ks = sorted(K)
        for r in range(1, len(ks)):
            for J1 in combinations(ks, r):
                J1 = frozenset(J1)
                J2 = K - J1
                if min(J1) < min(J2):
                    pairs.append((J1, J2))
    for c in ctx.members():
        for J1, J2 in pairs:
            yield (_residue(ctx.spec, c, J1), _residue(ctx.spec, c, J2), _residue(ctx.spec, c, J1 | J2))


def _product_eval(ctx, inst):
    R1, R2, R12 = inst
    whole = ctx.chambers(R12)
    images = set()
    for x in whole:
        a, b = ctx.ops.proj_chamber(R1, x), ctx.ops.proj_chamber(R2, x)
        if a != ctx.brute_proj(R1, x) or b != ctx.brute_proj(R2, x):
            return f"projection of {x!r} disagrees with enumeration"
        images.add((a, b))
    if len(images) != len(whole) or len(whole) != len(ctx.chambers(R1)) * len(ctx.chambers(R2)):
        return "the product map is not a bijection"
    return None


_register("product_residue")((_product_instances, _product_eval))


# -- parallelism -------------------------------------------------------------


def _definitional_parallel(ctx, R, S) -> bool:
    img_rs = {ctx.brute_proj(R, x) for x in ctx.chambers(S)}
    if img_rs != set(ctx.chambers(R)):
        return False
    img_sr = {ctx.brute_proj(S, x) for x in ctx.chambers(R)}
    return img_sr == set(ctx.chambers(S))


def _constdist_instances(ctx):
    types = ctx.spherical_types()
    near = ctx.near(max(1, ctx.radius - 1))
    for _ in range(ctx.trials):
        x = ctx.rng.choice(near)
        J = ctx.rng.choice(types)
        big = J | ctx.D._perp(J)
        y = _times(x, _rand_word(ctx, big, ctx.rng.randint(0, 3)))
        yield (_residue(ctx.spec, x, J), _residue(ctx.spec, y, J))


def _constdist_eval(ctx, inst):
    sigma, tau = inst
    if not _definitional_parallel(ctx, sigma, tau):
        return "residues in a common J ∪ J⊥ residue are not parallel"
    dists = {min(ctx.dist(x, y) for y in ctx.chambers(tau)) for x in ctx.chambers(sigma)}
    if len(dists) != 1:
        return f"distance to τ varies over σ: {sorted(dists)}"
    return None


_register("constant_distance")((_constdist_instances, _constdist_eval))


def _parcrit_instances(ctx):
    residues = [R for R in spherical_residues_in(ctx.ball) if R.J]
    for a, R in enumerate(residues):
        for S in residues[a:]:
            yield (R, S)


def _parcrit_eval(ctx, inst):
    R, S = inst
    got = ctx.ops.is_parallel(R, S)
    if len(ctx.chambers(R)) != len(ctx.chambers(S)):
        want = False
    else:
        want = _definitional_parallel(ctx, R, S)
    if got != want:
        return f"is_parallel returned {got}, definition gives {want}"
    if len(R.J) == 1 and len(S.J) == 1:
        images = {ctx.brute_proj(R, x) for x in ctx.chambers(S)}
        if len(images) >= 2 and not want:
            return "two chambers with distinct projections, yet the panels are not parallel"
    return None


_register("parallel_criterion")((_parcrit_instances, _parcrit_eval))


def _pareq_instances(ctx):
    for t in range(ctx.D.n):
        yield (ctx.label(t),)


def _pareq_eval(ctx, inst):
    (label,) = inst
    t = ctx.D.idx(label)
    panels = [P for P in geometry.panels_in(ctx.ball) if P.J == frozenset([t])]
    par = ctx.ops.is_parallel
    adj = {}
    for a, P in enumerate(panels):
        if not par(P, P):
            return f"{P!r} is not parallel to itself"
        for Q in panels[a + 1:]:
            pq = par(P, Q)
            if pq != par(Q, P):
                return f"parallelism of {P!r} and {Q!r} is not symmetric"
            if pq:
                adj.setdefault(P, set()).add(Q)
                adj.setdefault(Q, set()).add(P)
    for P, nbrs in adj.items():
        for Q in nbrs:
            for S in adj[Q]:
                if S != P and S not in nbrs:
                    return f"transitivity fails for {P!r}, {Q!r}, {S!r}"
    return None


_register("parallel_equivalence")((_pareq_instances, _pareq_eval))


# -- wings -------------------------------------------------------------------


def _wconv_instances(ctx):
    for t in range(ctx.D.n):
        yield (ctx.center, ctx.label(t))
    near = ctx.near(1)[1:]
    for _ in range(min(ctx.trials, 2 * ctx.D.n) - ctx.D.n):
        yield (ctx.rng.choice(near), ctx.label(ctx.rng.randrange(ctx.D.n)))


def _wconv_eval(ctx, inst):
    c, label = inst
    t = ctx.D.idx(label)
    members = [x for x in ctx.members() if ctx.ops.in_i_wing(c, t, x)]
    oracle = [x for x in ctx.members() if ctx.brute_in_wing(c, t, x)]
    if members != oracle:
        return "wing membership disagrees with enumeration"
    bad = geometry.convexity_violation(ctx.spec, members, lambda z: ctx.brute_in_wing(c, t, z))
    if bad is not None:
        x, y, z = bad
        return f"{z!r} lies between {x!r} and {y!r} but outside the wing"
    return None


_register("wing_convexity")((_wconv_instances, _wconv_eval))


def _weyl_len(D, w) -> int:
    return len(D._wnf(w))


def _in_halfspace(D, u, t, w) -> bool:
    """w is on u's side of the wall between u and u·t."""
    inv = tuple(reversed(w))
    return _weyl_len(D, inv + u) < _weyl_len(D, inv + u + (t,))


def _halfspace_included(D, u, t, u2, t2) -> bool:
    """Exact inclusion of half-spaces of W via commutation of the reflections."""
    r = D._wnf(u + (t,) + tuple(reversed(u)))
    r2 = D._wnf(u2 + (t2,) + tuple(reversed(u2)))
    if r == r2:
        return _in_halfspace(D, u2, t2, u)
    if D._wnf(r + r2) == D._wnf(r2 + r):
        return False
    ut = D._wnf(u + (t,))
    u2t = D._wnf(u2 + (t2,))
    return _in_halfspace(D, u2, t2, u) and _in_halfspace(D, u2, t2, ut) and not _in_halfspace(D, u, t, u2t)


def _winc_instances(ctx):
    near = ctx.near(1)
    for k in range(ctx.trials):
        c = ctx.rng.choice(near)
        t = ctx.rng.randrange(ctx.D.n)
        options = [t] + ctx.far(t)
        t2 = ctx.rng.choice(options)
        if ctx.rng.random() < 0.5:
            c2 = ctx.rng.choice(near)
        else:
            c2 = _times(c, _rand_word(ctx, range(ctx.D.n), ctx.rng.randint(1, 2)))
        yield ("a", c, ctx.label(t), c2, ctx.label(t2))
        r = min(2, ctx.radius)
        A = geometry.grow_apartment(ctx.spec, ctx.center, r, ctx.rng)
        words = [w for w in A.words() if len(w) <= 1]
        u, u2 = ctx.rng.choice(words), ctx.rng.choice(words)
        yield ("b", A.embedding[u], [ctx.label(s) for s in u], ctx.label(t), A.embedding[u2],
               [ctx.label(s) for s in u2], ctx.label(t2))


def _winc_eval(ctx, inst):
    if inst[0] == "a":
        _, c, i, c2, i2 = inst
        if not geometry.wing_included(c, i, c2, i2):
            return None
    else:
        _, c, u, i, c2, u2, i2 = inst
        D = ctx.D
        w1 = D._wnf(tuple(D.idx(s) for s in u))
        w2 = D._wnf(tuple(D.idx(s) for s in u2))
        if not _halfspace_included(D, w1, D.idx(i), w2, D.idx(i2)):
            return None
    t, t2 = ctx.D.idx(i), ctx.D.idx(i2)
    for x in ctx.members():
        if ctx.brute_in_wing(c, t, x) and not ctx.brute_in_wing(c2, t2, x):
            return f"{x!r} is in the first wing but not the second"
    return None


_register("wing_inclusion")((_winc_instances, _winc_eval))


def _concat_instances(ctx):
    near = ctx.near(1)
    ms = ctx.members()
    for _ in range(ctx.trials):
        c = ctx.rng.choice(near)
        t = ctx.rng.randrange(ctx.D.n)
        inside = [x for x in ms if ctx.brute_in_wing(c, t, x)]
        outside = [x for x in ms if not ctx.brute_in_wing(c, t, x)]
        for _ in range(10):
            yield (c, ctx.label(t), ctx.rng.choice(inside), ctx.rng.choice(outside))


def _concat_eval(ctx, inst):
    c, label, x, x2 = inst
    t = ctx.D.idx(label)
    wall = _wall(c, t)
    p, p2 = ctx.ops.proj_chamber(wall, x), ctx.ops.proj_chamber(wall, x2)
    if not wall.contains(p) or not wall.contains(p2):
        return "projection left the wall-residue"
    total = ctx.dist(x, p) + ctx.dist(p, p2) + ctx.dist(p2, x2)
    if total != ctx.dist(x, x2):
        return f"concatenated gallery has length {total}, distance is {ctx.dist(x, x2)}"
    return None


_register("concat_gallery")((_concat_instances, _concat_eval))


def _biw_instances(ctx):
    types = ctx.spherical_types(nonempty=False)
    near = ctx.near(1)
    for _ in range(ctx.trials):
        x = ctx.rng.choice(near)
        J = ctx.rng.choice(types)
        R = _residue(ctx.spec, x, J)
        y = ctx.rng.choice(ctx.near(max(1, ctx.radius - 2)))
        t = ctx.rng.randrange(ctx.D.n)
        yield ("ball", R, y, ctx.label(t))
        outside = [s for s in range(ctx.D.n) if s not in J]
        if outside:
            c = ctx.rng.choice(ctx.chambers(R))
            yield ("residue", R, c, ctx.label(ctx.rng.choice(outside)))


def _biw_eval(ctx, inst):
    kind, R, y, label = inst
    t = ctx.D.idx(label)
    if kind == "residue":
        for z in ctx.chambers(R):
            if not ctx.brute_in_wing(y, t, z):
                return f"{z!r} of the residue is outside the wing"
        return None
    wall = _wall(y, t)
    Rp = ctx.ops.proj_residue(wall, R)
    image = {ctx.ops.proj_chamber(wall, z) for z in ctx.chambers(R)}
    if image != set(ctx.chambers(Rp)):
        return "projected residue differs from the image of its chambers"
    c = min(ctx.chambers(Rp), key=sort_key)
    n = min(ctx.dist(c, z) for z in ctx.chambers(R))
    if n + 1 > ctx.radius:
        return None
    if not all(ctx.brute_in_wing(c, t, z) for z in ctx.chambers(Rp)):
        return None
    near_panels = set()
    for z in ctx.chambers(Rp):
        near_panels.update(ctx.chambers(_panel(z, t)))
    b = ball(ctx.spec, R, n + 1, cap=ctx.cfg.limits.ball_cap)
    for z, d in b.members.items():
        inside = ctx.brute_in_wing(c, t, z)
        if d <= n and not inside:
            return f"{z!r} of B(R, {n}) is outside the wing"
        if not inside and z not in near_panels:
            return f"{z!r} of B(R, {n + 1}) is outside the wing and the boundary panels"
    return None


_register("balls_in_wings")((_biw_instances, _biw_eval))


def _part_instances(ctx):
    for x in ctx.near(1)[: max(1, ctx.trials // ctx.D.n)]:
        for t in range(ctx.D.n):
            yield (_panel(x, t),)


def _part_eval(ctx, inst):
    (sigma,) = inst
    (t,) = sigma.J
    ds = ctx.chambers(sigma)
    for y in ctx.members():
        owners = [d for d in ds if ctx.ops.in_i_wing(d, t, y)]
        if len(owners) != 1:
            return f"{y!r} lies in {len(owners)} wings of the panel"
        if owners[0] != ctx.brute_proj(sigma, y):
            return f"{y!r} is assigned to the wrong wing"
    return None


_register("partition_into_wings")((_part_instances, _part_eval))


# -- automorphisms -----------------------------------------------------------


def _perm_of(ctx, sigma, images):
    return panel_perm(sigma, dict(zip(ctx.chambers(sigma), images)))


def _pext_instances(ctx):
    near = ctx.near(min(2, ctx.radius))
    for _ in range(ctx.trials):
        x = ctx.rng.choice(near)
        sigma = _panel(x, ctx.rng.randrange(ctx.D.n))
        ch = ctx.chambers(sigma)
        p1, p2 = list(ch), list(ch)
        ctx.rng.shuffle(p1)
        ctx.rng.shuffle(p2)
        yield (sigma, p1, p2)


def _pext_eval(ctx, inst):
    sigma, p1, p2 = inst
    (t,) = sigma.J
    pi = _perm_of(ctx, sigma, p1)
    rho = _perm_of(ctx, sigma, p2)
    a = panel_extension(sigma, pi)
    rep = is_valid_on_ball(a, ctx.ball)
    if not rep:
        return f"not an isometry on the ball: {rep.reason} at {rep.violation}"
    for d in ctx.chambers(sigma):
        if a.apply(d) != pi.images[d]:
            return f"restriction to the panel differs from π at {d!r}"
    for y in ctx.members():
        p = ctx.brute_proj(sigma, y)
        if pi.images[p] == p and a.apply(y) != y:
            return f"{y!r} projects to a fixed chamber but is moved"
    b = panel_extension(sigma, rho)
    both = panel_extension(sigma, panel_perm(sigma, {d: pi.images[rho.images[d]] for d in ctx.chambers(sigma)}))
    diff = autos.equal_on(compose(a, b), both, ctx.members())
    if diff is not None:
        return f"composition law fails at {diff!r}"
    return None


_register("panel_extension")((_pext_instances, _pext_eval))


def _fixing_wall_element(ctx, rng, c, t, factors):
    """A product of panel extensions fixing the wall-residue of (c, t) pointwise."""
    spec = ctx.spec
    wall = _wall(c, t)
    parts = []
    pool = ctx.near(min(2, ctx.radius))
    tries = 0
    while len(parts) < factors and tries < 200:
        tries += 1
        y = rng.choice(pool)
        j = rng.randrange(spec.n)
        tau = _panel(y, j)
        proj = geometry.proj_residue(tau, wall)
        if proj.J:
            continue
        keep = proj.base
        parts.append(panel_extension(tau, autos.random_panel_perm(tau, keep, rng)))
    return compose(Identity(spec), *parts)


def _fpd_instances(ctx):
    for k in range(ctx.trials):
        yield (ctx.cfg.seed * 1_000_003 + k,)


def _fpd_eval(ctx, inst):
    (seed,) = inst
    rng = random.Random(seed)
    c = rng.choice(ctx.near(1))
    t = rng.randrange(ctx.D.n)
    g = _fixing_wall_element(ctx, rng, c, t, rng.randint(1, 3))
    radius = ctx.radius + ctx.ball.members.get(c, 0) + 2
    parts = autos.fix_decomposition(g, c, ctx.label(t), radius)
    prod = compose(Identity(ctx.spec), *parts)
    diff = autos.equal_on(prod, g, ctx.members())
    if diff is not None:
        return f"product of wing restrictions differs from g at {diff!r}"
    for part in parts:
        rep = is_valid_on_ball(part, ctx.ball)
        if not rep:
            return f"wing restriction invalid: {rep.reason}"
        d = part.d
        for y in ctx.members():
            if part.apply(y) != y and not ctx.brute_in_wing(d, t, y):
                return f"wing restriction moves {y!r} outside its wing"
    return None


_register("fix_product_decomposition")((_fpd_instances, _fpd_eval))


def _nonab_instances(ctx):
    per = max(1, ctx.trials // max(1, ctx.D.n))
    for t in range(ctx.D.n):
        if not ctx.far(t) or min(ctx.spec.q) < 3:
            continue
        for k in range(per):
            yield (ctx.label(t), ctx.cfg.seed * 7919 + k)


def _noncommuting_on(ctx, a, b):
    for x in ctx.members():
        if a.apply(b.apply(x)) != b.apply(a.apply(x)):
            return x
    return None


def _nonab_eval(ctx, inst):
    label, seed = inst
    t = ctx.D.idx(label)
    rng = random.Random(seed)
    c = ctx.center
    sigma = _panel(c, t)
    d = rng.choice([x for x in ctx.chambers(sigma) if x != c])
    u1 = autos.u_i_sample(c, label, rng)
    u2 = autos.v_i_sample(d, label, rng, max_depth=1)
    wing = [x for x in ctx.members() if ctx.brute_in_wing(c, t, x)]
    for u in (u1, u2):
        if fixes_pointwise(u, wing) is not None:
            return "a U_i(c) sample moves a chamber of X_i(c)"
    if _noncommuting_on(ctx, u1, u2) is None:
        return "the two U_i(c) samples commute on the ball"
    v1 = autos.v_i_sample(c, label, rng, max_depth=1)
    (j,) = v1.panel.J
    e = next(x for x in ctx.chambers(v1.panel) if v1.apply(x) != x)
    v2 = autos.v_i_sample(e, ctx.label(j), rng, max_depth=1)
    outside = [x for x in ctx.members() if not ctx.brute_in_wing(c, t, x)]
    for v in (v1, v2):
        if fixes_pointwise(v, outside) is not None:
            return "a V_i(c) sample moves a chamber outside X_i(c)"
    if _noncommuting_on(ctx, v1, v2) is None:
        return "the two V_i(c) samples commute on the ball"
    return None


_register("nonabelian")((_nonab_instances, _nonab_eval))


def _st_instances(ctx):
    for k in range(ctx.trials):
        yield (ctx.cfg.seed * 104729 + k,)


def _st_eval(ctx, inst):
    (seed,) = inst
    rng = random.Random(seed)
    spec = ctx.spec
    r = min(3, ctx.radius)
    c = rng.choice(ctx.near(1))
    A = geometry.grow_apartment(spec, c, r, rng)
    if rng.random() < 0.3:
        assignment = {g: rng.randrange(1, spec.q[t]) for t, g in enumerate(ctx.D.generators)}
        A2 = geometry.standard_apartment(spec, assignment, c, r)
    else:
        A2 = geometry.grow_apartment(spec, c, r, rng)
    g = autos.strongtrans_match(A, A2, c, r)
    if g.apply(c) != c:
        return "g does not fix c"
    for w in A2.words():
        if g.apply(A.embedding[w]) != A2.embedding[w]:
            return f"g(A) misses A2 at {ctx.D.labels(w)}"
    rep = is_valid_on_ball(g, ball(spec, c, r, cap=ctx.cfg.limits.ball_cap))
    if not rep:
        return f"matcher output invalid: {rep.reason}"
    return None


_register("strong_transitivity")((_st_instances, _st_eval))


def commutator_setup(spec: BuildingSpec, rng: random.Random, near: list):
    """Random hypotheses (g, σ, c, c2, h) for the commutator construction, or None."""
    D = spec.diagram
    types = [t for t in range(spec.n) if spec.q[t] >= 3 and any(not D.commutes(t, s) and s != t for s in range(spec.n))]
    if not types:
        return None
    t = rng.choice(types)
    j = rng.choice([s for s in range(spec.n) if s != t and not D.commutes(s, t)])
    c = rng.choice(near)
    sigma = _panel(c, t)
    others = [x for x in sigma.chambers() if x != c]
    c2 = rng.choice(others)
    target = _times(c2, ((j, rng.randrange(1, spec.q[j])),))
    shift = Chamber(spec, spec._nf(target.word + kernel.inverse_word(c.word, spec.q)))
    g = left_translation(shift)
    if rng.random() < 0.5:
        s = rng.randrange(spec.n)
        g = compose(g, autos.u_i_sample(c, D.generators[s], rng) if spec.q[s] >= 3 else Identity(spec))
    middle = [x for x in others if x != c2]
    parts = []
    for _ in range(rng.randint(0, 2)):
        d = rng.choice(middle)
        parts.append(autos.v_i_sample(d, D.generators[t], rng, max_depth=2))
    h = compose(Identity(spec), *parts)
    return g, sigma, c, c2, h


def _comm_instances(ctx):
    for k in range(ctx.trials):
        yield (ctx.cfg.seed * 15485863 + k,)


def _comm_eval(ctx, inst):
    (seed,) = inst
    setup = commutator_setup(ctx.spec, random.Random(seed), ctx.near(1))
    if setup is None:
        return None
    g, sigma, c, c2, h = setup
    x = autos.commutator_witness(g, sigma, c, c2, h)
    diff = autos.equal_on(autos.commutator(x, g), h, ctx.members())
    if diff is not None:
        return f"[x, g] differs from h at {diff!r}"
    rep = is_valid_on_ball(x, ctx.ball)
    if not rep:
        return f"witness invalid: {rep.reason}"
    return None


_register("commutator")((_comm_instances, _comm_eval))


def admissible_product(spec: BuildingSpec, R: Residue, dists, factors: int, rng, cap=geometry.DEFAULT_BALL_CAP):
    """Product of U_i(c) generators at admissible pairs (c, i) with dist(c, R) in ``dists``."""
    D = spec.diagram
    b = ball(spec, R, max(dists), cap=cap)
    pool = [x for x in b.sorted() if b.members[x] in dists]
    parts = []
    tries = 0
    while len(parts) < factors and tries < 500:
        tries += 1
        y = rng.choice(pool)
        s = rng.randrange(spec.n)
        if spec.q[s] < 3 or not autos.is_admissible(y, D.generators[s], R):
            continue
        parts.append(autos.u_i_sample(y, D.generators[s], rng))
    return compose(Identity(spec), *parts)


def _random_spherical_residue(ctx, rng):
    J = rng.choice(ctx.spherical_types(nonempty=False))
    return _residue(ctx.spec, rng.choice(ctx.near(1)), J)


def _peel_instances(ctx):
    for k in range(ctx.trials):
        yield (k % 2, ctx.cfg.seed * 32452843 + k)


def _peel_eval(ctx, inst):
    n, seed = inst
    rng = random.Random(seed)
    R = _random_spherical_residue(ctx, rng)
    h = admissible_product(ctx.spec, R, {n, n + 1, n + 2}, rng.randint(1, 4), rng, ctx.cfg.limits.ball_cap)
    g, certified = autos.peel(h, R, n)
    if not certified:
        return "peel did not certify g∘h ∈ G(n+1)"
    moved = fixes_pointwise(compose(g, h), ball(ctx.spec, R, n + 1).sorted())
    if moved is not None:
        return f"g∘h moves {moved!r}"
    rep = is_valid_on_ball(g, ctx.ball)
    if not rep:
        return f"peel output invalid: {rep.reason}"
    return None


_register("peeling")((_peel_instances, _peel_eval))


def _fixgen_instances(ctx):
    for k in range(ctx.trials):
        yield (ctx.cfg.seed * 49979687 + k,)


def _fixgen_eval(ctx, inst):
    (seed,) = inst
    rng = random.Random(seed)
    R = _random_spherical_residue(ctx, rng)
    N = min(3, ctx.radius)
    h = admissible_product(ctx.spec, R, {0, 1, 2}, rng.randint(1, 4), rng, ctx.cfg.limits.ball_cap)
    us = autos.approximate_by_generators(h, R, N)
    residual = autos.residual_of(h, us)
    moved = fixes_pointwise(residual, ball(ctx.spec, R, N).sorted())
    if moved is not None:
        return f"residual moves {moved!r} of B(R, {N})"
    for u in us:
        rep = is_valid_on_ball(u, ctx.ball)
        if not rep:
            return f"generator product invalid: {rep.reason}"
    return None


_register("fix_generators")((_fixgen_instances, _fixgen_eval))


# -- ends --------------------------------------------------------------------


def ends_ball_heuristic(spec: BuildingSpec, x: Chamber, n: int, N: int, cap: int = geometry.DEFAULT_BALL_CAP) -> bool:
    """All chambers at distance n+1..N-1 from x are connected in B(x, N) minus B(x, n)."""
    if N < n + 1:
        raise ValueError("need N >= n + 1")
    b = ball(spec, x, N, cap=cap)
    annulus = [y for y, d in b.members.items() if n < d <= N - 1]
    if not annulus:
        return True
    allowed = {y for y, d in b.members.items() if d > n}
    start = annulus[0]
    seen = {start}
    stack = [start]
    while stack:
        y = stack.pop()
        for _, z in spec.neighbours(y):
            if z in allowed and z not in seen:
                seen.add(z)
                stack.append(z)
    return all(y in seen for y in annulus)


def _endsc_instances(ctx):
    yield ()


def _endsc_eval(ctx, inst):
    result = ends_classify(ctx.D)
    if result is ONE_ENDED:
        if not ends_ball_heuristic(ctx.spec, ctx.center, 1, 4, ctx.cfg.limits.ball_cap):
            return "one-ended diagram, but the annulus B(x,4) minus B(x,1) is disconnected"
        ctx.extra["classification"] = "OneEnded"
        return None
    if not is_valid_partition(ctx.D, result):
        return f"ends_classify returned an invalid partition {result!r}"
    ctx.extra["classification"] = repr(result)
    for n in range(0, 2):
        if not ends_ball_heuristic(ctx.spec, ctx.center, n, n + 3, ctx.cfg.limits.ball_cap):
            ctx.extra["discriminating"] = [n, n + 3]
            break
    else:
        ctx.extra["discriminating"] = None
    return None


_register("ends_consistency")((_endsc_instances, _endsc_eval))


def residue_graph(spec: BuildingSpec, partition, b) -> tuple:
    """Vertices and edges of the residue graph on the ball for a candidate partition."""
    D = spec.diagram
    I0, I1, I2 = (D.idx_set(s) for s in partition)
    J1, J2 = I0 | I1, I0 | I2
    vertices = set()
    edges = set()
    for x in b:
        a = (1, _residue(spec, x, J1))
        c = (2, _residue(spec, x, J2))
        vertices.add(a)
        vertices.add(c)
        edges.add((a, c))
    return vertices, edges


def is_tree(vertices, edges) -> bool:
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, c in edges:
        ra, rc = find(a), find(c)
        if ra == rc:
            return False
        parent[ra] = rc
    return len(edges) == len(vertices) - 1


def candidate_partitions(D):
    """Every (I0, I1, I2) with I0 spherical and I1, I2 nonempty, I1 holding the least remaining index."""
    out = []
    for I0 in commuting_subsets(D):
        rest = [t for t in range(D.n) if t not in I0]
        if len(rest) < 2:
            continue
        first, others = rest[0], rest[1:]
        for r in range(len(others)):
            for extra in combinations(others, r):
                I1 = (first,) + extra
                I2 = tuple(t for t in others if t not in extra)
                out.append(Partition(D.labels(I0), D.labels(I1), D.labels(I2)))
    return out


def _tree_instances(ctx):
    result = ends_classify(ctx.D)
    if result is ONE_ENDED:
        for P in candidate_partitions(ctx.D):
            yield ("candidate", P)
    else:
        yield ("partition", result)


def _tree_eval(ctx, inst):
    kind, P = inst
    vertices, edges = residue_graph(ctx.spec, P, ctx.members())
    tree = is_tree(vertices, edges)
    if kind == "partition" and not tree:
        return "the residue graph is not a tree on the ball"
    if kind == "candidate" and tree:
        return "a non-separating candidate still gives a tree on the ball"
    return None


_register("tree_decomposition")((_tree_instances, _tree_eval))


def _split_instances(ctx):
    result = ends_classify(ctx.D)
    if result is ONE_ENDED:
        return
    yield (result, ctx.cfg.seed)


def _split_eval(ctx, inst):
    P, seed = inst
    R = geometry.residue_of(ctx.center, P.I0)
    count = max(1, min(ctx.trials, 10))
    U1, U2 = autos.local_splitting_generators(R, P, count, random.Random(seed))
    ms = ctx.members()
    supports = []
    for gens in (U1.gens, U2.gens):
        supp = set()
        for u in gens:
            rep = is_valid_on_ball(u, ctx.ball)
            if not rep:
                return f"generator invalid: {rep.reason}"
            supp |= autos.support_on(u, ms)
        supports.append(supp)
    if supports[0] & supports[1]:
        return f"supports of U1 and U2 meet at {min(supports[0] & supports[1], key=sort_key)!r}"
    for u in U1.gens:
        for v in U2.gens:
            x = _noncommuting_on(ctx, u, v)
            if x is not None:
                return f"generators fail to commute at {x!r}"
    return None


_register("local_splitting")((_split_instances, _split_eval))


# ---------------------------------------------------------------------------
# Runner


def run_check(name: str, cfg: CheckConfig, directed=None) -> CheckReport:
    """Run one registered check; ``directed`` replays serialized instances."""
    if name not in _REGISTRY:
        raise UnknownCheck(name)
    check = _REGISTRY[name]
    ctx = _Ctx(cfg, name)
    start = time.perf_counter()
    if directed is None:
        source = check.instances(ctx)
    else:
        source = (decode(cfg.spec, inst) for inst in directed)
    tested = 0
    failures = 0
    first = None
    for inst in source:
        tested += 1
        reason = check.evaluate(ctx, inst)
        if reason is not None:
            failures += 1
            if first is None:
                first = {"instance": encode(inst), "reason": reason}
            if failures >= cfg.limits.max_counterexamples:
                break
    elapsed = (time.perf_counter() - start) * 1000.0
    return CheckReport(
        name=name,
        status="fail" if failures else "pass",
        counts={"instances": tested, "counterexamples": failures},
        counterexample=first,
        seed=cfg.seed,
        elapsed_ms=elapsed,
        details=dict(ctx.extra),
    )


def run_all(cfg: CheckConfig, names=None) -> list:
    names = CHECK_NAMES if names is None else names
    return [run_check(name, cfg) for name in names]
