"""Type-preserving automorphisms as lazy expression trees.

Every automorphism is a finite expression built from panel extensions, wing
restrictions and commutator ladders, evaluated one chamber at a time.  The
full automorphism group is uncountable; equality is only ever checked on
finite balls.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import kernel
from .chambers import BuildingSpec, Chamber, SpecMismatch, sort_key
from .coxeter import is_valid_partition
from .geometry import (
    Ball,
    Residue,
    _panel,
    _wall,
    ball,
    in_i_wing,
    panels_in,
    proj_chamber,
    proj_residue,
    wing_included,
)


class NotABijection(ValueError):
    pass


class PreconditionFailed(ValueError):
    pass


class UncertifiedRegion(RuntimeError):
    pass


class NoRoom(RuntimeError):
    pass


class MatchFailure(RuntimeError):
    pass


class NotAdmissible(RuntimeError):
    pass


class InvalidPartition(ValueError):
    pass


# ---------------------------------------------------------------------------
# Expression nodes


class Automorphism:
    spec: BuildingSpec

    def apply(self, x: Chamber) -> Chamber:
        raise NotImplementedError

    def inverse(self) -> "Automorphism":
        raise NotImplementedError

    def __call__(self, x: Chamber) -> Chamber:
        if x.spec is not self.spec and x.spec != self.spec:
            raise SpecMismatch("chamber and automorphism belong to different buildings")
        return self.apply(x)

    def __mul__(self, other: "Automorphism") -> "Automorphism":
        return compose(self, other)


class Identity(Automorphism):
    def __init__(self, spec):
        self.spec = spec

    def apply(self, x):
        return x

    def inverse(self):
        return self

    def __repr__(self):
        return "Identity"


class PanelExt(Automorphism):
    """Extension of a permutation of an i-panel to the whole building.

    With ``base⁻¹·x = a·z`` (``a`` the i-part, ``z`` with no frontable
    i-syllable) the image is ``base·π(a)·z``.  Chambers whose projection to the
    panel is fixed by π are fixed.
    """

    def __init__(self, panel: Residue, exps: tuple):
        self.spec = panel.spec
        self.panel = panel
        (self.t,) = panel.J
        self.exps = exps
        self._inv_base = kernel.inverse_word(panel.base.word, self.spec.q)

    def apply(self, x):
        spec = self.spec
        base = self.panel.base.word
        g = spec._nf(self._inv_base + x.word) if base else x.word
        t = self.t
        e = 0
        comm, n = spec.comm, spec.n
        for k, (s, f) in enumerate(g):
            if s == t:
                if all(comm[t * n + r] for r, _ in g[:k]):
                    e = f
                break
        e2 = self.exps[e]
        if e2 == e:
            return x
        return Chamber(spec, spec._nf(base + ((t, (e2 - e) % spec.q[t]),) + g))

    def inverse(self):
        inv = [0] * len(self.exps)
        for a, b in enumerate(self.exps):
            inv[b] = a
        return PanelExt(self.panel, tuple(inv))

    @property
    def is_trivial(self):
        return all(a == b for a, b in enumerate(self.exps))

    def __repr__(self):
        return f"PanelExt({self.panel!r}, {list(self.exps)})"


class WingRestrict(Automorphism):
    """``g`` on X_i(d), identity elsewhere; queries are limited to the certified radius."""

    def __init__(self, g: Automorphism, d: Chamber, t: int, certified_radius: int):
        self.spec = g.spec
        self.g = g
        self.d = d
        self.t = t
        self.certified_radius = certified_radius

    def apply(self, x):
        if self.spec.dist(self.d, x) > self.certified_radius:
            raise UncertifiedRegion(f"{x!r} is beyond the certified radius {self.certified_radius}")
        if in_i_wing(self.d, self.t, x):
            return self.g.apply(x)
        return x

    def inverse(self):
        return WingRestrict(self.g.inverse(), self.d, self.t, self.certified_radius)

    def __repr__(self):
        return f"WingRestrict({self.g!r}, {self.d!r}, {self.spec.diagram.generators[self.t]!r})"


class Ladder(Automorphism):
    """The element acting as gⁿ h g⁻ⁿ on the n-th translate of h's support region.

    Region n is ``gⁿ`` of the union of the wings X_i(d), d in the panel minus
    {c, c2}.  Regions n >= 1 all lie in X_i(c2); a chamber outside X_i(c2)
    (after pulling back by g) is in no further region, which bounds the search.
    """

    def __init__(self, g, h, panel: Residue, c: Chamber, c2: Chamber, certified_radius: int, g_inv=None):
        self.spec = g.spec
        self.g = g
        self.h = h
        self.panel = panel
        (self.t,) = panel.J
        self.c = c
        self.c2 = c2
        self.certified_radius = certified_radius
        self.g_inv = g_inv if g_inv is not None else g.inverse()

    def region_index(self, y: Chamber):
        """``(k, g⁻ᵏ y)`` if y lies in region k, else ``None``."""
        spec = self.spec
        bound = spec.dist(self.c, y) + 2
        z = y
        for k in range(bound + 1):
            p = proj_chamber(self.panel, z)
            if p != self.c and p != self.c2:
                return k, z
            if not in_i_wing(self.c2, self.t, z):
                return None
            z = self.g_inv.apply(z)
        raise RuntimeError("ladder region search did not terminate; hypotheses on g are violated")

    def apply(self, y):
        found = self.region_index(y)
        if found is None:
            return y
        k, z = found
        if self.certified_radius is not None and self.spec.dist(self.c, z) > self.certified_radius:
            raise UncertifiedRegion(f"{z!r} lies beyond the certified support radius")
        w = self.h.apply(z)
        for _ in range(k):
            w = self.g.apply(w)
        return w

    def inverse(self):
        return Ladder(self.g, self.h.inverse(), self.panel, self.c, self.c2, self.certified_radius, self.g_inv)

    def __repr__(self):
        return f"Ladder(panel={self.panel!r}, c={self.c!r}, c2={self.c2!r})"


class Compose(Automorphism):
    """``Compose([f, g, h])(x) == f(g(h(x)))``."""

    def __init__(self, parts, spec=None):
        self.parts = tuple(parts)
        if spec is None:
            spec = self.parts[0].spec
        self.spec = spec

    def apply(self, x):
        for p in reversed(self.parts):
            x = p.apply(x)
        return x

    def inverse(self):
        return Compose([p.inverse() for p in reversed(self.parts)], self.spec)

    def __repr__(self):
        return f"Compose({len(self.parts)} parts)"


class Inverse(Automorphism):
    """Lazy inverse; evaluated through the structural inverse of its operand."""

    def __init__(self, a: Automorphism):
        self.spec = a.spec
        self.a = a
        self._inv = None

    def apply(self, x):
        if self._inv is None:
            self._inv = self.a.inverse()
        return self._inv.apply(x)

    def inverse(self):
        return self.a


def compose(*parts) -> Automorphism:
    flat = []
    for p in parts:
        if isinstance(p, Identity):
            continue
        if isinstance(p, Compose):
            flat.extend(p.parts)
        else:
            flat.append(p)
    if not flat:
        return Identity(parts[0].spec)
    if len(flat) == 1:
        return flat[0]
    return Compose(flat)


def commutator(x: Automorphism, g: Automorphism) -> Automorphism:
    """``[x, g] = x g x⁻¹ g⁻¹``."""
    return Compose([x, g, x.inverse(), g.inverse()])


# ---------------------------------------------------------------------------
# Ball-level checks


@dataclass
class ValidityReport:
    ok: bool
    pairs_checked: int
    violation: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def images(a: Automorphism, b) -> dict:
    return {x: a.apply(x) for x in b}


def is_valid_on_ball(a: Automorphism, b: Ball) -> ValidityReport:
    """Weyl distances between ball members are preserved by ``a``."""
    members = b.sorted() if isinstance(b, Ball) else sorted(b, key=sort_key)
    spec = members[0].spec if members else a.spec
    try:
        dst = [a.apply(x) for x in members]
    except UncertifiedRegion as exc:
        return ValidityReport(False, 0, None, f"uncertified: {exc}")
    bad = kernel.isometry_violation([x.word for x in members], [y.word for y in dst], spec.q, spec.comm, spec.n)
    pairs = len(members) * (len(members) - 1) // 2
    if bad is None:
        return ValidityReport(True, pairs)
    i, j = bad
    return ValidityReport(False, pairs, (members[i], members[j]), "weyl distance changed")


def support_on(a: Automorphism, chambers) -> set:
    return {x for x in chambers if a.apply(x) != x}


def equal_on(a: Automorphism, b: Automorphism, chambers):
    """First chamber where ``a`` and ``b`` differ, or ``None``."""
    for x in chambers:
        if a.apply(x) != b.apply(x):
            return x
    return None


def fixes_pointwise(a: Automorphism, chambers):
    for x in chambers:
        if a.apply(x) != x:
            return x
    return None


# ---------------------------------------------------------------------------
# Panel permutations and extensions


def _panel_exp(panel: Residue, x: Chamber) -> int:
    spec = panel.spec
    g = kernel.delta_types(panel.base.word, x.word, spec.q, spec.comm, spec.n)
    if not g:
        return 0
    if len(g) != 1 or g[0] not in panel.J:
        raise NotABijection(f"{x!r} is not a chamber of {panel!r}")
    word = spec._nf(kernel.inverse_word(panel.base.word, spec.q) + x.word)
    return word[0][1]


@dataclass(frozen=True)
class PanelPermutation:
    panel: Residue
    images: dict

    def __post_init__(self):
        chambers = set(self.panel.chambers())
        if set(self.images) != chambers or set(self.images.values()) != chambers:
            raise NotABijection("permutation must be a bijection on exactly the panel's chambers")

    def exps(self) -> tuple:
        out = [0] * len(self.images)
        for x, y in self.images.items():
            out[_panel_exp(self.panel, x)] = _panel_exp(self.panel, y)
        return tuple(out)


def panel_perm(panel: Residue, mapping: dict) -> PanelPermutation:
    """Complete a partial chamber mapping by the identity."""
    images = {x: x for x in panel.chambers()}
    images.update(mapping)
    return PanelPermutation(panel, images)


def panel_extension(panel: Residue, perm) -> Automorphism:
    if len(panel.J) != 1:
        raise ValueError("panel_extension needs a panel")
    if isinstance(perm, dict):
        perm = PanelPermutation(panel, perm)
    if perm.panel != panel:
        raise NotABijection("permutation belongs to a different panel")
    return PanelExt(panel, perm.exps())


def random_panel_perm(panel: Residue, fixed: Chamber | None, rng: random.Random, nontrivial=True) -> PanelPermutation:
    chambers = panel.chambers()
    movable = [x for x in chambers if x != fixed]
    if nontrivial and len(movable) < 2:
        raise NoRoom(f"{panel!r} is too thin for a non-trivial permutation fixing a chamber")
    while True:
        shuffled = list(movable)
        rng.shuffle(shuffled)
        images = {x: x for x in chambers}
        images.update(zip(movable, shuffled))
        if not nontrivial or any(images[x] != x for x in movable):
            return PanelPermutation(panel, images)


def left_translation(t: Chamber) -> Automorphism:
    """``x ↦ t·x`` as a composition of panel extensions at the identity's panels."""
    spec = t.spec
    parts = []
    for s, e in t.word:
        P = _panel(spec.identity, s)
        parts.append(PanelExt(P, tuple((k + e) % spec.q[s] for k in range(spec.q[s]))))
    return compose(Identity(spec), *parts)


# ---------------------------------------------------------------------------
# Fixators of wall-residues


def wing_restrict(g: Automorphism, d: Chamber, i, certify_radius: int) -> WingRestrict:
    """The V_i(d) component of ``g`` (which must fix the wall-residue of d)."""
    spec = d.spec
    t = spec.diagram.idx(i)
    R = _wall(d, t)
    for x in R.chambers_within(d, certify_radius):
        if g.apply(x) != x:
            raise PreconditionFailed(f"{x!r} of the wall-residue is moved")
    return WingRestrict(g, d, t, certify_radius)


def fix_decomposition(g: Automorphism, c: Chamber, i, certify_radius: int) -> list:
    """Wing restrictions of ``g`` over the i-panel of ``c``."""
    t = c.spec.diagram.idx(i)
    return [wing_restrict(g, d, i, certify_radius) for d in _panel(c, t).chambers()]


def v_i_sample(c: Chamber, i, seed, max_depth: int = 3, tries: int = 50) -> PanelExt:
    """A non-trivial automorphism supported in X_i(c).

    A panel extension at a panel τ = Res_j(d) deep inside X_i(c), with j = i
    or m(i, j) = ∞ and π fixing the projection of c, moves only wings nested
    in X_i(c).
    """
    spec = c.spec
    D = spec.diagram
    t = spec.diagram.idx(i)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    far = [s for s in range(spec.n) if s != t and not D.commutes(s, t)]
    if not far:
        raise NoRoom(f"no generator fails to commute with {D.generators[t]!r}")
    final_types = [t] + far
    for _ in range(tries):
        depth = rng.randint(0, max_depth - 1)
        u = ()
        if depth:
            s = rng.choice(far)
            u = ((s, rng.randrange(1, spec.q[s])),)
            while len(u) < depth:
                s = rng.randrange(spec.n)
                w = spec._nf(u + ((s, rng.randrange(1, spec.q[s])),))
                if len(w) > len(u):
                    u = w
        options = [s for s in (final_types if u else far) if len(spec._nf(u + ((s, 1),))) > len(u)]
        if not options:
            continue
        j = rng.choice(options)
        if spec.q[j] < 3:
            continue
        d = Chamber(spec, spec._nf(c.word + u))
        tau = _panel(d, j)
        if not all(in_i_wing(c, t, y) for y in tau.chambers() if y != d):
            continue
        perm = random_panel_perm(tau, d, rng)
        return panel_extension(tau, perm)
    raise NoRoom(f"could not place a V_i sample inside X_i({c!r})")


def u_i_sample(c: Chamber, i, seed) -> PanelExt:
    """A non-trivial panel extension at Res_i(c) fixing c (an element of U_i(c))."""
    spec = c.spec
    t = spec.diagram.idx(i)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    P = _panel(c, t)
    return panel_extension(P, random_panel_perm(P, c, rng))


# ---------------------------------------------------------------------------
# Strong transitivity


def lemma_u_element(x: Chamber, targets, check: bool = True) -> Automorphism:
    """g with prescribed restrictions π_s on the panels Res_{i_s}(c_s).

    ``targets`` is a list of ``(c_s, i_s, π_s)``: all c_s at a common distance
    n from x, x projecting to c_s on the wall-residue of type i_s ∪ i_s⊥, and
    π_s fixing c_s.  The result also fixes B(x, n+1) minus those panels.
    """
    spec = x.spec
    if not targets:
        return Identity(spec)
    seen = set()
    parts = []
    panels = []
    n = None
    for c_s, i_s, pi in targets:
        t = spec.diagram.idx(i_s)
        if (c_s, t) in seen:
            raise PreconditionFailed("target pairs must be distinct")
        seen.add((c_s, t))
        d = spec.dist(x, c_s)
        if n is None:
            n = d
        elif d != n:
            raise PreconditionFailed("targets are not at a common distance from x")
        if proj_chamber(_wall(c_s, t), x) != c_s:
            raise PreconditionFailed(f"x does not project to {c_s!r} on its wall-residue")
        P = _panel(c_s, t)
        if isinstance(pi, dict):
            pi = panel_perm(P, pi)
        if pi.panel != P:
            raise PreconditionFailed("permutation is not on the target panel")
        if pi.images[c_s] != c_s:
            raise PreconditionFailed("π_s must fix c_s")
        parts.append(panel_extension(P, pi))
        panels.append((P, pi))
    g = compose(*parts)
    if check:
        covered = set()
        for P, pi in panels:
            covered.update(P.chambers())
            bad = [y for y in P.chambers() if g.apply(y) != pi.images[y]]
            if bad:
                raise PreconditionFailed(f"restriction to {P!r} is not π_s")
        b = ball(spec, x, n + 1)
        moved = fixes_pointwise(g, (y for y in b.sorted() if y not in covered))
        if moved is not None:
            raise PreconditionFailed(f"{moved!r} in B(x, n+1) is moved")
    return g


def strongtrans_match(A, A2, c: Chamber, radius: int) -> Automorphism:
    """g fixing c with g(A) ⊇ A2 on B(c, radius), built one sphere at a time."""
    spec = c.spec
    if A.base != c or A2.base != c:
        raise PreconditionFailed("both fragments must be based at c")
    if A.radius < radius or A2.radius < radius:
        raise PreconditionFailed("fragments are smaller than the requested radius")
    D = spec.diagram
    g = Identity(spec)
    for n in range(radius):
        An = {w: g.apply(y) for w, y in A.embedding.items() if len(w) <= n + 1}
        present = set(An.values())
        targets = []
        for w in A2.words():
            if len(w) != n + 1 or A2.embedding[w] in present:
                continue
            descents = [s for s in range(D.n) if len(D._wnf(w + (s,))) < len(w)]
            s = descents[0]
            v = D._wnf(w + (s,))
            y = A2.embedding[v]
            if An[v] != y:
                raise MatchFailure(f"sphere {n} is not matched at {D.labels(v)}")
            x_old = An[w]
            x_new = A2.embedding[w]
            P = _panel(y, s)
            targets.append((y, D.generators[s], panel_perm(P, {x_old: x_new, x_new: x_old})))
        if not targets:
            continue
        step = lemma_u_element(c, targets, check=False)
        if n >= 1:
            moved = fixes_pointwise(step, ball(spec, c, n - 1).sorted())
            if moved is not None:
                raise MatchFailure(f"step {n + 1} moves {moved!r} inside B(c, {n - 1})")
        g = compose(step, g)
    for w in A2.words():
        if len(w) <= radius and g.apply(A.embedding[w]) != A2.embedding[w]:
            raise MatchFailure(f"g(A) misses A2 at {D.labels(w)}")
    return g


# ---------------------------------------------------------------------------
# Fixators of spherical residues


def is_admissible(c: Chamber, i, R: Residue) -> bool:
    """(c, i) admissible for R: c ∈ R' = proj_{wall}(R) and Ch(R') ⊆ X_i(c)."""
    t = c.spec.diagram.idx(i)
    Rp = proj_residue(_wall(c, t), R)
    if not Rp.contains(c):
        return False
    return all(in_i_wing(c, t, y) for y in Rp.chambers())


def fixes_ball(h: Automorphism, R: Residue, n: int):
    """First chamber of B(R, n) moved by h, or None."""
    return fixes_pointwise(h, ball(R.spec, R, n).sorted())


def peel(h: Automorphism, R: Residue, n: int, ball_radius: int | None = None):
    """g ∈ U(n) with g∘h fixing B(R, n+1), for h fixing B(R, n).

    Returns ``(g, certified)``.
    """
    if not R.is_spherical:
        raise PreconditionFailed("peel needs a residue of spherical type")
    if ball_radius is None:
        ball_radius = n + 2
    if ball_radius < n + 2:
        raise PreconditionFailed("ball_radius must be at least n + 2")
    spec = R.spec
    outer = ball(spec, R, n + 1)
    inner = [x for x in outer.sorted() if outer.members[x] <= n]
    moved = fixes_pointwise(h, inner)
    if moved is not None:
        raise PreconditionFailed(f"h moves {moved!r} in B(R, {n})")
    classes = {}
    for P in panels_in(outer):
        chambers = P.chambers()
        if all(outer.members[y] > n for y in chambers):
            continue
        if all(h.apply(y) == y for y in chambers):
            continue
        (t,) = P.J
        key = (t, _wall(P.base, t))
        classes.setdefault(key, []).append(P)
    parts = []
    for key in sorted(classes, key=lambda k: (k[0], sort_key(k[1].base))):
        sigma = min(classes[key], key=lambda P: sort_key(P.base))
        (t,) = sigma.J
        chambers = sigma.chambers()
        near = [y for y in chambers if outer.members.get(y, n + 2) <= n]
        if len(near) != 1:
            raise NotAdmissible(f"{sigma!r} does not meet B(R, {n}) in exactly one chamber")
        c_s = near[0]
        if not is_admissible(c_s, spec.diagram.generators[t], R):
            raise NotAdmissible(f"({c_s!r}, {spec.diagram.generators[t]!r}) is not admissible")
        image = {y: h.apply(y) for y in chambers}
        if set(image.values()) != set(chambers):
            raise NotAdmissible(f"h does not stabilise {sigma!r}")
        inverse = {v: k for k, v in image.items()}
        parts.append(panel_extension(sigma, inverse))
    g = compose(Identity(spec), *parts)
    gh = compose(g, h)
    certified = fixes_pointwise(gh, outer.sorted()) is None
    return g, certified


def approximate_by_generators(h: Automorphism, R: Residue, N: int) -> list:
    """u_0, …, u_{N-1} with u_{N-1}⋯u_0∘h fixing B(R, N)."""
    moved = fixes_pointwise(h, R.chambers())
    if moved is not None:
        raise PreconditionFailed(f"h moves {moved!r} of R")
    out = []
    residual = h
    for n in range(N):
        g, certified = peel(residual, R, n)
        if not certified:
            raise NotAdmissible(f"peeling at depth {n} did not certify")
        out.append(g)
        residual = compose(g, residual)
    return out


def residual_of(h: Automorphism, us) -> Automorphism:
    res = h
    for u in us:
        res = compose(u, res)
    return res


# ---------------------------------------------------------------------------
# Commutators


def _factors(a: Automorphism):
    if isinstance(a, Compose):
        out = []
        for p in a.parts:
            out.extend(_factors(p))
        return out
    return [a]


def _structural_support(h: Automorphism, sigma: Residue, middle: list) -> bool:
    """True if every factor of h is a panel extension whose moved wings nest in X_i(d), d ∈ middle."""
    (t,) = sigma.J
    for f in _factors(h):
        if isinstance(f, Identity):
            continue
        if not isinstance(f, PanelExt):
            return False
        for e, e2 in enumerate(f.exps):
            if e == e2:
                continue
            m = f.panel.base if e == 0 else Chamber(f.spec, f.spec._nf(f.panel.base.word + ((f.t, e),)))
            if not any(_wing_included_idx(m, f.t, d, t) for d in middle):
                return False
    return True


def _wing_included_idx(c: Chamber, t: int, c2: Chamber, t2: int) -> bool:
    D = c.spec.diagram
    return wing_included(c, D.generators[t], c2, D.generators[t2])


def commutator_witness(g: Automorphism, sigma: Residue, c: Chamber, c2: Chamber, h: Automorphism,
                       certify_radius: int | None = None) -> Ladder:
    """x with [x, g] = h, for h supported on the wings of σ away from c and c2.

    When h is a product of panel extensions whose moved wings are certified to
    nest inside those wings, the resulting node is exact everywhere.  Otherwise
    the support of h is checked on B(c, certify_radius) (default 6) and
    evaluation is limited to that radius.
    """
    spec = c.spec
    D = spec.diagram
    if len(sigma.J) != 1:
        raise PreconditionFailed("sigma must be a panel")
    (t,) = sigma.J
    if c == c2 or not sigma.contains(c) or not sigma.contains(c2):
        raise PreconditionFailed("c and c2 must be distinct chambers of sigma")
    gc = g.apply(c)
    delta = spec._delta(gc, c2)
    if len(delta) != 1 or D.commutes(delta[0], t) or delta[0] == t:
        raise PreconditionFailed("g(c) must be j-adjacent to c2 with m(i, j) = ∞")
    middle = [d for d in sigma.chambers() if d != c and d != c2]
    if _structural_support(h, sigma, middle):
        return Ladder(g, h, sigma, c, c2, None)
    if certify_radius is None:
        certify_radius = 6
    for y in ball(spec, c, certify_radius).sorted():
        hy = h.apply(y)
        if hy == y:
            continue
        p = proj_chamber(sigma, y)
        if p == c or p == c2 or proj_chamber(sigma, hy) != p:
            raise PreconditionFailed(f"h moves {y!r} outside the product of V_i(d), d ≠ c, c2")
    return Ladder(g, h, sigma, c, c2, certify_radius)


# ---------------------------------------------------------------------------
# Local splittings


@dataclass
class GeneratorSet:
    label: str
    gens: list = field(default_factory=list)
    provenance: str = ""


def local_splitting_generators(R: Residue, partition, count: int, seed):
    """Commuting generator families U1, U2 of the fixator of R (type I0)."""
    spec = R.spec
    D = spec.diagram
    if not is_valid_partition(D, partition):
        raise InvalidPartition(f"{partition!r} is not a separating partition")
    I0, I1, I2 = (D.idx_set(s) for s in partition)
    if R.J != I0:
        raise InvalidPartition("R must have type I0")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    chambers = R.chambers()
    out = []
    for k, types in ((1, sorted(I1)), (2, sorted(I2))):
        gens = []
        for _ in range(count):
            c = rng.choice(chambers)
            t = rng.choice(types)
            gens.append(u_i_sample(c, D.generators[t], rng))
        out.append(GeneratorSet(f"U{k} for {partition!r}", gens, "local_splitting_generators"))
    return out[0], out[1]
