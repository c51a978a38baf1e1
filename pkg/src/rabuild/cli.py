"""Command-line entry point: ``rabuild check | ends | export``.

Spec files are TOML.  The order of ``generators`` fixes the canonical order
used by every normal form, so it changes every canonical output::

    generators = [{ name = "a", q = 3 }, { name = "b", q = 3 }]
    m = [{ i = "a", j = "b", m = "inf" }]

    [defaults]
    radius = 4
    seed = 0
    trials = 20

Exit codes: 0 success, 1 check failure, 2 unreadable or invalid spec,
3 resource limit, 4 classification hypotheses not met.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import verify
from .chambers import BuildingSpec, sort_key
from .coxeter import INF, ONE_ENDED, DiagramError, NotIrreducible, Spherical, ends_classify, validate_diagram
from .geometry import ResourceLimit, ball, in_i_wing, panel

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_RESOURCE = 3
EXIT_HYPOTHESES = 4

_TOP_KEYS = {"generators", "m", "defaults", "debug"}
_GEN_KEYS = {"name", "q"}
_M_KEYS = {"i", "j", "m"}
_DEFAULT_KEYS = {"radius", "seed", "trials"}
_DEBUG_KEYS = {"corrupt"}


class SpecError(ValueError):
    pass


@dataclass
class SpecFile:
    spec: BuildingSpec
    defaults: dict = field(default_factory=dict)
    debug: dict = field(default_factory=dict)


def _reject_unknown(table: dict, allowed: set, where: str):
    extra = set(table) - allowed
    if extra:
        raise SpecError(f"unknown field(s) {sorted(extra)} in {where}")


def parse_spec(text: str) -> SpecFile:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SpecError(f"not valid TOML: {exc}") from None
    _reject_unknown(data, _TOP_KEYS, "spec file")
    gens = data.get("generators")
    if not isinstance(gens, list) or not gens:
        raise SpecError("'generators' must be a nonempty list of {name, q} tables")
    names = []
    thickness = {}
    for g in gens:
        if not isinstance(g, dict):
            raise SpecError("each generator must be a table with 'name' and 'q'")
        _reject_unknown(g, _GEN_KEYS, "a generator")
        if "name" not in g or "q" not in g:
            raise SpecError("each generator needs both 'name' and 'q'")
        name = g["name"]
        if isinstance(name, bool) or not isinstance(name, (str, int)):
            raise SpecError(f"generator name {name!r} must be a string or an integer")
        names.append(name)
        thickness[name] = g["q"]
    entries = data.get("m", [])
    if not isinstance(entries, list):
        raise SpecError("'m' must be a list of {i, j, m} tables")
    for e in entries:
        if not isinstance(e, dict):
            raise SpecError("each 'm' entry must be a table")
        _reject_unknown(e, _M_KEYS, "an 'm' entry")
        if set(e) != _M_KEYS:
            raise SpecError(f"'m' entry {e!r} needs i, j and m")
    defaults = data.get("defaults", {})
    _reject_unknown(defaults, _DEFAULT_KEYS, "[defaults]")
    for k, v in defaults.items():
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise SpecError(f"default {k} must be a non-negative integer")
    debug = data.get("debug", {})
    _reject_unknown(debug, _DEBUG_KEYS, "[debug]")
    if "corrupt" in debug and debug["corrupt"] not in verify.CORRUPTIONS:
        raise SpecError(f"[debug] corrupt must be one of {sorted(verify.CORRUPTIONS)}")
    try:
        diagram = validate_diagram({"generators": names, "m": entries})
        spec = BuildingSpec(diagram, thickness)
    except (DiagramError, ValueError) as exc:
        raise SpecError(str(exc)) from None
    return SpecFile(spec, dict(defaults), dict(debug))


def load_spec(path) -> SpecFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from None
    return parse_spec(text)


def _toml_value(v) -> str:
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    return str(v)


def dump_spec(sf: SpecFile) -> str:
    """Serialize a spec back to TOML; ``parse_spec(dump_spec(s))`` reproduces ``s``."""
    spec = sf.spec
    D = spec.diagram
    lines = ["generators = ["]
    for g, q in zip(D.generators, spec.q):
        lines.append(f"  {{ name = {_toml_value(g)}, q = {q} }},")
    lines.append("]")
    lines.append("m = [")
    for a in range(D.n):
        for b in range(a + 1, D.n):
            order = '"inf"' if D.m(D.generators[a], D.generators[b]) == INF else "2"
            lines.append(f"  {{ i = {_toml_value(D.generators[a])}, j = {_toml_value(D.generators[b])}, m = {order} }},")
    lines.append("]")
    for section, values in (("defaults", sf.defaults), ("debug", sf.debug)):
        if values:
            lines.append("")
            lines.append(f"[{section}]")
            for k in sorted(values):
                lines.append(f"{k} = {_toml_value(values[k])}")
    return "\n".join(lines) + "\n"


def fixture_path(name: str) -> Path:
    """Path of a bundled spec (``dihedral``, ``pentagon``, ``split3``, ...)."""
    return Path(str(resources.files("rabuild") / "fixtures" / f"{name}.toml"))


def load_fixture(name: str) -> SpecFile:
    return load_spec(fixture_path(name))


def make_config(sf: SpecFile, radius=None, trials=None, seed=None) -> verify.CheckConfig:
    ops = verify.Ops()
    if "corrupt" in sf.debug:
        ops = verify.corrupted_ops(sf.debug["corrupt"])
    return verify.CheckConfig(
        spec=sf.spec,
        radius=radius if radius is not None else sf.defaults.get("radius", 3),
        trials=trials if trials is not None else sf.defaults.get("trials", 20),
        seed=seed if seed is not None else sf.defaults.get("seed", 0),
        ops=ops,
    )


# ---------------------------------------------------------------------------
# Commands


def _write_json(payload: dict, target: str):
    text = json.dumps(payload, indent=2, ensure_ascii=False)
    if target == "-":
        sys.stdout.write(text + "\n")
    else:
        Path(target).write_text(text + "\n", encoding="utf-8")


def cmd_check(args) -> int:
    sf = load_spec(args.spec)
    try:
        cfg = make_config(sf, args.radius, args.trials, args.seed)
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    if args.suite == "all":
        names = verify.CHECK_NAMES
    elif args.suite in verify.CHECK_NAMES:
        names = [args.suite]
    else:
        print(f"unknown check {args.suite!r}; choose 'all' or one of {', '.join(verify.CHECK_NAMES)}", file=sys.stderr)
        return EXIT_PARSE
    log = sys.stderr if args.json == "-" else sys.stdout
    reports = []
    for name in names:
        rep = verify.run_check(name, cfg)
        reports.append(rep)
        counts = rep.counts
        print(f"{rep.status.upper():4} {name} ({counts['instances']} instances, "
              f"{counts['counterexamples']} counterexamples, {rep.elapsed_ms:.0f} ms)", file=log)
        if rep.counterexample:
            print(f"     {rep.counterexample['reason']}", file=log)
    status = "pass" if all(r.passed for r in reports) else "fail"
    if args.json:
        _write_json({
            "schema_version": SCHEMA_VERSION,
            "spec": str(args.spec),
            "radius": cfg.radius,
            "trials": cfg.trials,
            "status": status,
            "reports": [r.to_dict() for r in reports],
        }, args.json)
    return EXIT_OK if status == "pass" else EXIT_FAIL


def cmd_ends(args) -> int:
    sf = load_spec(args.spec)
    D = sf.spec.diagram
    try:
        result = ends_classify(D)
    except (NotIrreducible, Spherical) as exc:
        print(f"hypotheses of the ends classification fail: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESES
    if result is ONE_ENDED:
        payload = {"schema_version": SCHEMA_VERSION, "result": "OneEnded"}
    else:
        order = {g: k for k, g in enumerate(D.generators)}
        payload = {
            "schema_version": SCHEMA_VERSION,
            "result": "Partition",
            "I0": sorted(result.I0, key=order.get),
            "I1": sorted(result.I1, key=order.get),
            "I2": sorted(result.I2, key=order.get),
        }
    if args.json:
        _write_json(payload, "-")
    else:
        print(repr(result))
    return EXIT_OK


def _chamber_label(c) -> str:
    if not c.word:
        return "e"
    return " ".join(f"{g}{e}" for g, e in c.syllables)


def _dot_ball(spec, radius, colors=None) -> str:
    b = ball(spec, spec.identity, radius)
    members = b.sorted()
    pos = {x: k for k, x in enumerate(members)}
    ids = {x: f"c{k}" for k, x in enumerate(members)}
    palette = ["red", "blue", "darkgreen", "orange", "purple", "brown", "cyan", "magenta"]
    lines = ["graph ball {"]
    for x in members:
        attrs = f'label="{_chamber_label(x)}"'
        if colors is not None:
            attrs += f', color="{palette[colors[x] % len(palette)]}", wing={colors[x]}'
        lines.append(f"  {ids[x]} [{attrs}];")
    D = spec.diagram
    for x in members:
        for t, y in spec.neighbours(x):
            if y in pos and pos[x] < pos[y]:
                lines.append(f'  {ids[x]} -- {ids[y]} [label="{D.generators[t]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_tree(spec, partition, radius) -> str:
    b = ball(spec, spec.identity, radius)
    vertices, edges = verify.residue_graph(spec, partition, b.sorted())
    order = sorted(vertices, key=lambda v: (v[0], sort_key(v[1].base), sorted(v[1].J)))
    ids = {v: f"r{k}" for k, v in enumerate(order)}
    lines = ["graph tree {"]
    for v in order:
        side, R = v
        types = ",".join(str(g) for g in sorted(R.type_set, key=str))
        shape = "box" if side == 1 else "ellipse"
        lines.append(f'  {ids[v]} [label="{_chamber_label(R.base)} {{{types}}}", shape={shape}];')
    for a, c in sorted(edges, key=lambda e: (ids[e[0]], ids[e[1]])):
        lines.append(f"  {ids[a]} -- {ids[c]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export(args) -> int:
    sf = load_spec(args.spec)
    spec = sf.spec
    radius = args.radius if args.radius is not None else sf.defaults.get("radius", 2)
    if args.what == "ball":
        text = _dot_ball(spec, radius)
    elif args.what == "wings":
        label = args.panel if args.panel is not None else spec.diagram.generators[0]
        label = _match_label(spec, label)
        if label is None:
            print(f"unknown generator {args.panel!r}", file=sys.stderr)
            return EXIT_PARSE
        P = panel(spec.identity, label)
        t = spec.diagram.idx(label)
        chambers = P.chambers()
        b = ball(spec, spec.identity, radius)
        colors = {x: next(k for k, d in enumerate(chambers) if in_i_wing(d, t, x)) for x in b}
        text = _dot_ball(spec, radius, colors)
    else:
        try:
            result = ends_classify(spec.diagram)
        except (NotIrreducible, Spherical) as exc:
            print(f"hypotheses of the ends classification fail: {exc}", file=sys.stderr)
            return EXIT_HYPOTHESES
        if result is ONE_ENDED:
            print("the diagram is one-ended; no tree decomposition exists", file=sys.stderr)
            return EXIT_HYPOTHESES
        text = _dot_tree(spec, result, radius)
    if args.dot in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.dot).write_text(text, encoding="utf-8")
    return EXIT_OK


def _match_label(spec, raw):
    for g in spec.diagram.generators:
        if g == raw or str(g) == str(raw):
            return g
    return None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rabuild", description="Right-angled building toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run property checks on a building spec")
    p.add_argument("spec")
    p.add_argument("--suite", default="all", help="'all' or one check name")
    p.add_argument("--radius", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--json", metavar="OUT", help="write a JSON report ('-' for stdout)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("ends", help="classify the number of ends")
    p.add_argument("spec")
    p.add_argument("--json", action="store_true", help="print the result as JSON")
    p.set_defaults(func=cmd_ends)

    p = sub.add_parser("export", help="write a DOT graph")
    p.add_argument("spec")
    p.add_argument("--what", choices=["ball", "tree", "wings"], default="ball")
    p.add_argument("--radius", type=int)
    p.add_argument("--panel", help="generator whose identity panel colours the wings")
    p.add_argument("--dot", metavar="OUT", help="output path ('-' or omitted for stdout)")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
