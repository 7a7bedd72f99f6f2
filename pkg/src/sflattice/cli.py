"""
Command line, scenario runner and the operation registry behind both.

Every operation takes a JSON object of arguments and a window and returns
plain JSON data, so a scenario step, a CLI call and a library call all go
through the same code.  Values may be written in full JSON form or in the
shorthands accepted by the parsers:

* permutations: ``[[0, 1], [2, 3]]`` or ``"(0 1)(2 3)"``
* partitions: ``"mod3"``, ``"blocks2"``, ``"pairs"``, ``"singletons"``, ``"e0"``, ...
* groups: ``"gstar"``, ``"gstar:evens"``, ``"trivial"``, ``"partition:mod2"``,
  a list of permutations (the group they generate) or a tagged object.

Errors leave the process with a non-zero status and a JSON error document
on stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from . import constructions as C
from . import forcing as Fo
from . import groups as Gr
from . import lattice as L
from . import partitions as Pa
from .errors import LFError, ParseError, StepMismatch
from .perm import FinPerm, cycle_decomposition, make_k_cycle, sf_at, sf_index
from .serialize import dumps, to_jsonable

__all__ = [
    "OPERATIONS",
    "Scenario",
    "Transcript",
    "run_scenario",
    "replay_transcript",
    "bundled_corpus",
    "bundled_path",
    "default_window",
    "main",
]

DEFAULT_WINDOW = 64
DEFAULT_BUDGET = 10 ** 6


def default_window() -> Gr.WindowConfig:
    """Window from ``LF_WINDOW`` (falling back to 64) with the default budget."""
    raw = os.environ.get("LF_WINDOW")
    try:
        bound = int(raw) if raw else DEFAULT_WINDOW
    except ValueError:
        raise ParseError(f"must be an integer, got {raw!r}", "LF_WINDOW") from None
    return Gr.WindowConfig(bound, DEFAULT_BUDGET)


# ---------------------------------------------------------------------------
# value readers


def _perm(v) -> FinPerm:
    if isinstance(v, FinPerm):
        return v
    if isinstance(v, str):
        return FinPerm.parse(v)
    return FinPerm.from_json(v)


def _perms(v) -> list[FinPerm]:
    if v is None:
        return []
    if isinstance(v, str):
        return [_perm(v)]
    if not isinstance(v, list):
        raise ParseError("expected a list of permutations")
    return [_perm(p) for p in v]


def _partition(v) -> Pa.PartitionDesc:
    if isinstance(v, Pa.PartitionDesc):
        return v
    if isinstance(v, str):
        return Pa.PartitionDesc.parse(v)
    return Pa.PartitionDesc.from_json(v)


def _group(v) -> Gr.GroupDesc:
    if isinstance(v, Gr.GroupDesc):
        return v
    if isinstance(v, list):
        return Gr.FinitelyGenerated(tuple(_perms(v)))
    if isinstance(v, str) and v.lstrip().startswith("("):
        return Gr.FinitelyGenerated((_perm(v),))
    return Gr.group_from_json(v)


def _groups(v) -> list[Gr.GroupDesc]:
    if not isinstance(v, list):
        raise ParseError("expected a list of groups")
    return [_group(g) for g in v]


def _points(v) -> list[int]:
    if isinstance(v, str):
        lo, sep, hi = v.partition("..")
        if sep:
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in v.replace(",", " ").split()]
    if not isinstance(v, list) or not all(isinstance(x, int) and x >= 0 for x in v):
        raise ParseError("expected a list of naturals")
    return list(v)


def _need(args: dict, key: str):
    if key not in args:
        raise ParseError(f"missing argument {key!r}", key)
    return args[key]


def _fraction(q) -> dict:
    return {"num": q.numerator, "den": q.denominator, "float": float(q)}


# ---------------------------------------------------------------------------
# operations


def _op_perm_compose(a, w):
    return (_perm(_need(a, "p")) * _perm(_need(a, "q"))).to_json()


def _op_perm_inverse(a, w):
    return _perm(_need(a, "p")).inverse().to_json()


def _op_perm_cycles(a, w):
    return [list(c) for c in cycle_decomposition(_perm(_need(a, "p")))]


def _op_perm_sf_at(a, w):
    return sf_at(int(_need(a, "i"))).to_json()


def _op_perm_sf_index(a, w):
    return sf_index(_perm(_need(a, "p")))


def _op_perm_k_cycle(a, w):
    return make_k_cycle(_points(_need(a, "points"))).to_json()


def _op_group_member(a, w):
    return Gr.membership(_perm(_need(a, "perm")), _group(_need(a, "group")), w).to_json()


def _op_group_local(a, w):
    lp = Gr.local_part(_group(_need(a, "group")), _points(_need(a, "points")), w)
    return {"domain": sorted(lp.domain), "size": len(lp.elements), "exact": lp.exact,
            "elements": to_jsonable(sorted(lp.elements, key=FinPerm.sort_key))}


def _op_group_transport(a, w):
    tm = Gr.transport_maps(_group(_need(a, "group")), _points(_need(a, "A")),
                           _points(_need(a, "B")), w)
    return {"size": len(tm.maps), "exact": tm.exact,
            "maps": sorted([list(map(list, f)) for f in tm.maps])}


def _op_group_trace(a, w):
    members, unknown = Gr.trace_set(_group(_need(a, "group")), int(a.get("upto", 16)), w)
    return {"members": sorted(members), "unknown": sorted(unknown)}


def _op_group_show(a, w):
    G = _group(_need(a, "group"))
    return {"group": G.to_json(), "describe": Gr.describe(G), "finite": Gr.is_finite_desc(G),
            "orbits": sorted({tuple(sorted(o)) for o in Gr.window_orbits(G, w).values()
                              if len(o) > 1})}


def _op_partition_show(a, w):
    E = _partition(_need(a, "partition"))
    n = int(a.get("upto", 24))
    return {"partition": E.to_json(), "labels": E.labels_upto(n),
            "group_finite": Pa.group_is_finite(E)}


def _op_partition_meet(a, w):
    return Pa.meet(_partition(_need(a, "E")), _partition(_need(a, "F"))).to_json()


def _op_partition_join(a, w):
    return Pa.join(_partition(_need(a, "E")), _partition(_need(a, "F"))).to_json()


def _op_partition_refines(a, w):
    return Pa.refines(_partition(_need(a, "F")), _partition(_need(a, "E")))


def _op_partition_coarsen(a, w):
    E, g = _partition(_need(a, "E")), _perm(_need(a, "g"))
    return {"partition": Pa.coarsen_by_perm(E, g).to_json(),
            "exact": Pa.coarsen_is_exact(E, g)}


def _op_partition_extract(a, w):
    E, g = _partition(_need(a, "E")), _perm(_need(a, "g"))
    t, word = Pa.extract_transposition_word(E, g, int(_need(a, "a")), int(_need(a, "b")),
                                            a.get("bound"))
    return {"transposition": t.to_json(), "word": [[p.to_json(), e] for p, e in word]}


def _op_partition_almost_coarser(a, w):
    return Pa.almost_coarser(_partition(_need(a, "Y")), _partition(_need(a, "X")),
                             int(a.get("patch_budget", 64))).to_json()


def _op_partition_finite(a, w):
    return Pa.group_is_finite(_partition(_need(a, "E")))


def _op_orth(a, w):
    return L.orthogonal(_group(_need(a, "G1")), _group(_need(a, "G2")), w).to_json()


def _op_almost(a, w):
    G1, G2 = _group(_need(a, "G1")), _group(_need(a, "G2"))
    if "X" in a:
        return L.almost_contained_verify(G1, G2, _perms(a["X"]), w).to_json()
    return L.almost_contained(G1, G2, w).to_json()


def _op_almost_search(a, w):
    found = L.almost_witness_search(_group(_need(a, "G1")), _group(_need(a, "G2")),
                                    int(a.get("size", 1)), int(a.get("support", 4)), w)
    if found is None:
        return {"found": False}
    return {"found": True, "X": [p.to_json() for p in found.X],
            "certificates": [[g.to_json(), [[p.to_json(), e] for p, e in word]]
                             for g, word in found.certificates]}


def _op_metric(a, w):
    value, err = L.metric_d(_group(_need(a, "G1")), _group(_need(a, "G2")),
                            int(a.get("N", 64)), w)
    return {"value": _fraction(value), "tail_bound": _fraction(err)}


def _op_splits(a, w):
    pool = _groups(a["pool"]) if "pool" in a else None
    return L.splits(_group(_need(a, "a")), _group(_need(a, "b")), pool, w).to_json()


def _op_family(a, w):
    kind = _need(a, "kind")
    fam = _need(a, "family")
    family = [_groups(f) for f in fam] if kind == "shattering" else _groups(fam)
    pool = _groups(a["pool"]) if "pool" in a else None
    rep = L.family_check(kind, family, _groups(_need(a, "probes")), w, pool)
    return {"kind": kind, "passed": rep.passed, "outcomes": to_jsonable(rep.outcomes)}


def _op_shatter(a, w):
    out = L.shattering_from_splitting(_groups(_need(a, "family")),
                                      _groups(_need(a, "pool")), w)
    return [[G.to_json() for G in psi] for psi in out]


def _op_construct_avoid(a, w):
    g = C.avoid_support(_group(_need(a, "group")), int(_need(a, "m")), w)
    return {"perm": g.to_json()}


def _op_construct_avoid_constrained(a, w):
    g = C.avoid_support_constrained(_group(_need(a, "group")), int(_need(a, "m")),
                                    _perms(a.get("H")), _groups(a.get("others", [])), w)
    return {"perm": g.to_json()}


def _op_construct_rho(a, w):
    return C.build_rho(_groups(_need(a, "groups")), int(a.get("k", 1)), int(a.get("m", 0)),
                       _perms(a.get("H")), w, int(a.get("max_size", 4))).to_json()


def _op_construct_pseudo(a, w):
    G, witnesses = C.pseudo_intersection(C.ChainPrefix(tuple(_groups(_need(a, "chain")))), w)
    return {"group": G.to_json(), "witnesses": [[p.to_json() for p in ws] for ws in witnesses]}


def _op_construct_antireap(a, w):
    fam = C.EnumeratedFamily(tuple(_groups(_need(a, "family"))))
    g, h = C.anti_reaping_pair(fam, int(a.get("steps", 4)), w)
    return {"first": g.to_json(), "second": h.to_json()}


def _op_construct_diag(a, w):
    fam = C.EnumeratedFamily(tuple(_groups(_need(a, "family"))))
    k = int(a.get("k", 1))
    G = C.orthogonal_diagonal(fam, int(a.get("steps", 2)), lambda n: k, w)
    return {"group": G.to_json()}


def _op_force_run(a, w):
    poset, oracles = Fo.oracles_from_json(a)
    chain = Fo.rasiowa_sikorski(poset, oracles, w)
    doc = Fo.transcript(chain, oracles, w)
    doc["verified"] = Fo.verify(chain, oracles, w)
    return doc


def _op_force_verify(a, w):
    return {"verified": Fo.verify_transcript(_need(a, "transcript"))}


OPERATIONS: dict[str, Callable[[dict, Gr.WindowConfig], Any]] = {
    "perm.compose": _op_perm_compose,
    "perm.inverse": _op_perm_inverse,
    "perm.cycles": _op_perm_cycles,
    "perm.sf_at": _op_perm_sf_at,
    "perm.sf_index": _op_perm_sf_index,
    "perm.k_cycle": _op_perm_k_cycle,
    "group.member": _op_group_member,
    "group.local_part": _op_group_local,
    "group.transport": _op_group_transport,
    "group.trace": _op_group_trace,
    "group.show": _op_group_show,
    "partition.show": _op_partition_show,
    "partition.meet": _op_partition_meet,
    "partition.join": _op_partition_join,
    "partition.refines": _op_partition_refines,
    "partition.coarsen": _op_partition_coarsen,
    "partition.extract_transposition": _op_partition_extract,
    "partition.almost_coarser": _op_partition_almost_coarser,
    "partition.group_is_finite": _op_partition_finite,
    "orth": _op_orth,
    "almost": _op_almost,
    "almost.search": _op_almost_search,
    "metric": _op_metric,
    "splits": _op_splits,
    "family": _op_family,
    "shattering_from_splitting": _op_shatter,
    "construct.avoid": _op_construct_avoid,
    "construct.avoid_constrained": _op_construct_avoid_constrained,
    "construct.rho": _op_construct_rho,
    "construct.pseudo": _op_construct_pseudo,
    "construct.antireap": _op_construct_antireap,
    "construct.diag": _op_construct_diag,
    "force.run": _op_force_run,
    "force.verify": _op_force_verify,
}


def call(op: str, args: dict, w=None):
    """Run one registered operation and return its JSON output."""
    if op not in OPERATIONS:
        raise ParseError(f"unknown operation {op!r}", "op")
    if not isinstance(args, dict):
        raise ParseError("arguments must be an object", op)
    return to_jsonable(OPERATIONS[op](args, Gr._window(w if w is not None else default_window())))


# ---------------------------------------------------------------------------
# scenarios


@dataclass
class Scenario:
    name: str
    steps: list = field(default_factory=list)  # [{"op", "args", "expect"?}]
    window: int | None = None
    budget: int | None = None
    description: str = ""

    @classmethod
    def from_json(cls, doc) -> "Scenario":
        if not isinstance(doc, dict):
            raise ParseError("scenario must be an object")
        steps = doc.get("steps", [])
        if not isinstance(steps, list):
            raise ParseError("steps must be a list", "steps")
        for i, s in enumerate(steps):
            if not isinstance(s, dict) or "op" not in s:
                raise ParseError("each step needs an 'op'", f"steps[{i}]")
            if s["op"] not in OPERATIONS:
                raise ParseError(f"unknown operation {s['op']!r}", f"steps[{i}].op")
        return cls(doc.get("name", "unnamed"), steps, doc.get("window"), doc.get("budget"),
                   doc.get("description", ""))

    def to_json(self) -> dict:
        doc: dict = {"name": self.name, "steps": self.steps}
        if self.description:
            doc["description"] = self.description
        if self.window is not None:
            doc["window"] = self.window
        if self.budget is not None:
            doc["budget"] = self.budget
        return doc

    def window_config(self, override: Gr.WindowConfig | None = None) -> Gr.WindowConfig:
        if override is not None:
            return override
        base = default_window()
        return Gr.WindowConfig(self.window or base.bound, self.budget or base.element_budget)


@dataclass
class Transcript:
    scenario: str
    window: int
    budget: int
    steps: list = field(default_factory=list)  # [{"op", "args", "output", "checked"}]

    @property
    def passed(self) -> bool:
        return True  # a mismatch raises before a transcript exists

    def to_json(self) -> dict:
        checked = sum(1 for s in self.steps if s["checked"])
        return {
            "scenario": self.scenario,
            "window": self.window,
            "budget": self.budget,
            "steps": self.steps,
            "summary": {"steps": len(self.steps), "checked": checked, "verdict": "pass"},
        }


def _matches(expect, got) -> bool:
    """Exact match, except that an expected object only constrains the keys it names."""
    if isinstance(expect, dict) and isinstance(got, dict):
        return all(k in got and _matches(v, got[k]) for k, v in expect.items())
    return dumps(expect) == dumps(got)


def _load_scenario(src) -> Scenario:
    if isinstance(src, Scenario):
        return src
    if isinstance(src, dict):
        return Scenario.from_json(src)
    path = Path(src)
    if not path.exists():
        bundled = bundled_path(str(src))
        if bundled is None:
            raise ParseError(f"no scenario file or bundled scenario named {src!r}")
        path = bundled
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from None
    return Scenario.from_json(doc)


def run_scenario(src, w: Gr.WindowConfig | None = None) -> Transcript:
    """Run the steps of a scenario (path, bundled name, dict or :class:`Scenario`) in order.

    A step with ``expect`` that does not match raises :class:`StepMismatch`
    carrying the step index.
    """
    sc = _load_scenario(src)
    w = sc.window_config(w)
    tr = Transcript(sc.name, w.bound, w.element_budget)
    for i, step in enumerate(sc.steps):
        args = step.get("args", {})
        try:
            out = call(step["op"], args, w)
        except LFError as exc:
            out = {"error": exc.to_json()}
            if "expect" not in step:
                raise
        if "expect" in step and not _matches(step["expect"], out):
            raise StepMismatch(i, step["expect"], out)
        tr.steps.append({"op": step["op"], "args": args, "output": out,
                         "checked": "expect" in step})
    return tr


def replay_transcript(doc: dict) -> bool:
    """Re-run every step of a transcript and demand byte-identical outputs."""
    w = Gr.WindowConfig(int(doc["window"]), int(doc["budget"]))
    for i, step in enumerate(doc.get("steps", [])):
        try:
            out = call(step["op"], step.get("args", {}), w)
        except LFError as exc:
            out = {"error": exc.to_json()}
        if dumps(out) != dumps(step["output"]):
            raise StepMismatch(i, step["output"], out)
    return True


def _scenario_dir():
    return resources.files("sflattice") / "scenarios"


def bundled_path(name: str):
    """Path of a bundled scenario by name (aliases included), or ``None``."""
    for entry in _scenario_dir().iterdir():
        if not entry.name.endswith(".json"):
            continue
        doc = json.loads(entry.read_text(encoding="utf-8"))
        if name == entry.name[:-5] or name == doc.get("name") or name in doc.get("aliases", []):
            return Path(str(entry))
    return None


def bundled_corpus() -> list[Scenario]:
    """The scenarios shipped with the package, sorted by name."""
    out = []
    for entry in sorted(_scenario_dir().iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            out.append(Scenario.from_json(json.loads(entry.read_text(encoding="utf-8"))))
    return out


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message, "arguments")


def _value(text: str):
    """Read a CLI value: ``-`` is stdin, ``@path`` or an existing ``.json`` path is a file,
    anything else is parsed as JSON and, failing that, kept as a string."""
    if text == "-":
        return json.load(sys.stdin)
    path = text[1:] if text.startswith("@") else text
    if text.startswith("@") or (path.endswith(".json") and os.path.exists(path)):
        try:
            return json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ParseError(str(exc), path) from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--window", type=int, default=argparse.SUPPRESS,
                   help="window bound (default: LF_WINDOW or 64)")
    p.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                   help="element budget for closures (default 10^6)")
    p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS,
                   help="indent the JSON output")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="sflattice", parents=[common],
                     description="Subgroups of the finitary symmetric group, window by window.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_, *args, parent=sub, **kw):
        p = parent.add_parser(name, help=help_, parents=[common], **kw)
        for a in args:
            p.add_argument(a)
        return p

    perm = cmd("perm", "permutation arithmetic")
    psub = perm.add_subparsers(dest="action", required=True, parser_class=_Parser)
    cmd("compose", "p * q, acting right to left", "p", "q", parent=psub)
    cmd("inverse", "inverse permutation", "p", parent=psub)
    cmd("cycles", "disjoint cycle decomposition", "p", parent=psub)
    cmd("index", "position in the canonical enumeration", "p", parent=psub)
    cmd("at", "permutation at a position of the enumeration", "i", parent=psub)
    cmd("kcycle", "cycle through the given points", "points", parent=psub)

    grp = cmd("group", "membership and local structure of a group")
    gsub = grp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    cmd("show", "describe a group and its window orbits", "group", parent=gsub)
    cmd("member", "membership with certificate", "group", "perm", parent=gsub)
    cmd("local", "local part on a finite set", "group", "points", parent=gsub)
    cmd("transport", "bijections A -> B induced by the group", "group", "A", "B", parent=gsub)
    t = cmd("trace", "indices i with sf_at(i) in the group", "group", parent=gsub)
    t.add_argument("--upto", type=int, default=16)

    part = cmd("partition", "partition lattice operations")
    qsub = part.add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = cmd("show", "labels and JSON form", "partition", parent=qsub)
    s.add_argument("--upto", type=int, default=24)
    cmd("meet", "common refinement", "E", "F", parent=qsub)
    cmd("join", "finest common coarsening", "E", "F", parent=qsub)
    cmd("refines", "is F finer than E", "F", "E", parent=qsub)
    cmd("coarsen", "partition of the group generated over by g", "E", "g", parent=qsub)
    cmd("extract", "transposition obtained from g moving a to b", "E", "g", "a", "b", parent=qsub)
    cmd("almost-coarser", "X inside Y joined with finitely many pairs", "Y", "X", parent=qsub)
    cmd("finite", "is the partition group finite", "E", parent=qsub)

    cmd("orth", "orthogonality verdict", "G1", "G2")
    al = cmd("almost", "almost containment of G1 in G2", "G1", "G2")
    al.add_argument("--with", dest="X", help="finite set X to verify with")
    al.add_argument("--search", nargs=2, type=int, metavar=("SIZE", "SUPPORT"),
                    help="search for X instead")
    m = cmd("metric", "distance between two groups", "G1", "G2")
    m.add_argument("-N", type=int, default=64)
    f = cmd("family", "check a splitting, reaping or shattering family",
            "kind", "family", "probes")
    f.add_argument("--pool", help="candidate pool for splitting witnesses")

    con = cmd("construct", "the constructive lemmas on a JSON instance")
    con.add_argument("which", choices=["avoid", "avoid-constrained", "rho", "pseudo",
                                       "antireap", "diag"])
    con.add_argument("instance")

    fo = cmd("force", "generic-filter runs over P_r and P_a")
    fo.add_argument("which", choices=["pr", "pa", "verify"])
    fo.add_argument("file", nargs="?", help="transcript to verify")
    fo.add_argument("--oracles", help="oracle list (JSON file or inline JSON)")

    sc = cmd("scenario", "run, list or replay scenarios")
    sc.add_argument("which", choices=["run", "list", "replay", "show"])
    sc.add_argument("target", nargs="?")
    return parser


_PERM_OPS = {"compose": ("perm.compose", ("p", "q")), "inverse": ("perm.inverse", ("p",)),
             "cycles": ("perm.cycles", ("p",)), "index": ("perm.sf_index", ("p",)),
             "at": ("perm.sf_at", ("i",)), "kcycle": ("perm.k_cycle", ("points",))}
_GROUP_OPS = {"show": ("group.show", ("group",)), "member": ("group.member", ("group", "perm")),
              "local": ("group.local_part", ("group", "points")),
              "transport": ("group.transport", ("group", "A", "B")),
              "trace": ("group.trace", ("group",))}
_PART_OPS = {"show": ("partition.show", ("partition",)), "meet": ("partition.meet", ("E", "F")),
             "join": ("partition.join", ("E", "F")), "refines": ("partition.refines", ("F", "E")),
             "coarsen": ("partition.coarsen", ("E", "g")),
             "extract": ("partition.extract_transposition", ("E", "g", "a", "b")),
             "almost-coarser": ("partition.almost_coarser", ("Y", "X")),
             "finite": ("partition.group_is_finite", ("E",))}


def _dispatch(ns, w):
    c = ns.command
    if c in ("perm", "group", "partition"):
        table = {"perm": _PERM_OPS, "group": _GROUP_OPS, "partition": _PART_OPS}[c]
        op, names = table[ns.action]
        args = {n: _value(getattr(ns, n)) for n in names}
        if getattr(ns, "upto", None) is not None:
            args["upto"] = ns.upto
        return call(op, args, w)
    if c == "orth":
        return call("orth", {"G1": _value(ns.G1), "G2": _value(ns.G2)}, w)
    if c == "almost":
        args = {"G1": _value(ns.G1), "G2": _value(ns.G2)}
        if ns.search:
            args.update(size=ns.search[0], support=ns.search[1])
            return call("almost.search", args, w)
        if ns.X is not None:
            args["X"] = _value(ns.X)
        return call("almost", args, w)
    if c == "metric":
        return call("metric", {"G1": _value(ns.G1), "G2": _value(ns.G2), "N": ns.N}, w)
    if c == "family":
        args = {"kind": ns.kind, "family": _value(ns.family), "probes": _value(ns.probes)}
        if ns.pool:
            args["pool"] = _value(ns.pool)
        return call("family", args, w)
    if c == "construct":
        inst = _value(ns.instance)
        return call("construct." + ns.which.replace("-", "_"), inst, w)
    if c == "force":
        if ns.which == "verify":
            if not ns.file:
                raise ParseError("force verify needs a transcript file", "file")
            return call("force.verify", {"transcript": _value(ns.file)}, w)
        if not ns.oracles:
            raise ParseError("--oracles is required", "--oracles")
        doc = _value(ns.oracles)
        if isinstance(doc, list):
            doc = {"oracles": doc}
        doc["poset"] = ns.which
        return call("force.run", doc, w)
    if c == "scenario":
        if ns.which == "list":
            return [{"name": s.name, "steps": len(s.steps), "description": s.description}
                    for s in bundled_corpus()]
        if not ns.target:
            raise ParseError(f"scenario {ns.which} needs a target", "target")
        if ns.which == "show":
            return _load_scenario(ns.target).to_json()
        if ns.which == "replay":
            return {"replayed": replay_transcript(_value(ns.target))}
        override = w if (ns.window_given or ns.budget_given) else None
        return run_scenario(ns.target, override).to_json()
    raise ParseError(f"unknown command {c!r}")  # pragma: no cover


def main(argv: list[str] | None = None) -> int:
    pretty = False
    try:
        ns = build_parser().parse_args(argv)
        pretty = getattr(ns, "pretty", False)
        base = default_window()
        ns.window_given = hasattr(ns, "window")
        ns.budget_given = hasattr(ns, "budget")
        w = Gr.WindowConfig(getattr(ns, "window", base.bound),
                            getattr(ns, "budget", base.element_budget))
        out = _dispatch(ns, w)
        status = 0
    except LFError as exc:
        out, status = exc.to_json(), 1
    except ValueError as exc:
        out, status = {"error": "invalid_argument", "message": str(exc)}, 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    text = json.dumps(to_jsonable(out), sort_keys=True, ensure_ascii=False,
                      indent=2 if pretty else None,
                      separators=None if pretty else (",", ":"))
    sys.stdout.write(text + "\n")
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
