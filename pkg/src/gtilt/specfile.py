"""Plain-text input format.

A spec file is a list of ``[section]`` blocks holding ``key = value`` lines;
``#`` starts a comment.  Vertices are numbered from 1 and path words are
arrow names joined by ``*``, read left to right::

    [field]
    field = rational            # or a prime, e.g. 3

    [quiver]
    vertices = 3
    arrow a1 = 1 -> 2

    [relations]
    rel = a1*a2*a3*a1

    [action]
    kind = finite               # trivial | finite | free-cyclic
    generator s = 2 1 3         # image of vertex 1, 2, ...
    image s a1 = a2             # arrows not listed are fixed
    element 1 =                 # finite groups: every element as a word
    element s = s

    [objects]
    S1 = simple(1)              # simple | projective | injective (i)
    O = syzygy(S1, 2)           #   syzygy(name, n) | twist(gen, name)

    [complex Q]
    term 0 = 2                  # summands P_v of the degree-0 term
    term 1 = 1
    d 0 = a1                    # rows ';'-separated, entries ','-separated

    [complex T]
    sum = P, Q                  # alternatives: resolution = M, n | regular = yes

    [conditions]
    objects = S1, S2, X[1]      # optional shift in brackets
    gset s = S2, S1, X          # image of each listed object
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .exact import QQ, GF
from .quiver import (Automorphism, GroupAction, MalformedRelation, PathAlgebra, Quiver,
                     parse_combination)


class ParseError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line, self.col, self.message = line, col, message


_NAME = r"[A-Za-z_][A-Za-z_0-9]*"
_OBJECT = re.compile(rf"^(simple|projective|injective)\(\s*(\d+)\s*\)$|"
                     rf"^syzygy\(\s*({_NAME})\s*,\s*(\d+)\s*\)$|"
                     rf"^twist\(\s*({_NAME})\s*,\s*({_NAME})\s*\)$")
_SECTIONS = ("field", "quiver", "relations", "action", "objects", "conditions")


@dataclass
class SpecFile:
    field: str = "rational"
    vertices: int = 0
    arrows: list = dc_field(default_factory=list)          # [(name, src, tgt)], 1-based
    relations: list = dc_field(default_factory=list)       # [text]
    action_kind: str = "trivial"
    generators: dict = dc_field(default_factory=dict)      # name -> (perm tuple, {arrow: text})
    elements: dict = dc_field(default_factory=dict)        # name -> tuple of generator words
    objects: dict = dc_field(default_factory=dict)         # name -> (kind, args)
    complexes: dict = dc_field(default_factory=dict)       # name -> ("terms", terms, diffs) | ("sum", names) | ...
    condition_objects: list = dc_field(default_factory=list)   # [(name, shift)]
    gset: dict = dc_field(default_factory=dict)            # generator -> tuple of object names
    where: dict = dc_field(default_factory=dict, compare=False, repr=False)


# -- parsing ---------------------------------------------------------------------------

def _fail(ln, line, token, msg, start=0):
    at = line.find(token, start) if token else -1
    col = at + 1 if at >= 0 else 1
    raise ParseError(ln, col, msg)


def _check_expr(spec, ln, line, text):
    try:
        terms = parse_combination(text)
    except ValueError as exc:
        _fail(ln, line, text, f"bad path expression: {exc}")
    names = {a[0] for a in spec.arrows}
    for _, words in terms:
        for w in words:
            if w not in names and not re.fullmatch(r"e_?\d+", w):
                _fail(ln, line, w, f"unknown arrow {w!r}")
    return text.strip()


def parse_spec(text: str) -> SpecFile:
    spec = SpecFile()
    section = None
    seen = set()
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = re.fullmatch(r"\s*\[\s*([^\]]+?)\s*\]\s*", line)
        if m:
            head = m.group(1)
            cm = re.fullmatch(rf"complex\s+({_NAME})", head)
            if cm:
                name = cm.group(1)
                if name in spec.complexes:
                    _fail(ln, line, name, f"complex {name!r} defined twice")
                section = ("complex", name)
                spec.complexes[name] = None
                spec.where[("complex", name)] = ln
            elif head in _SECTIONS:
                if head in seen:
                    _fail(ln, line, head, f"section [{head}] repeated")
                seen.add(head)
                section = head
            else:
                _fail(ln, line, head, f"unknown section [{head}]")
            continue
        if section is None:
            _fail(ln, line, line.strip(), "content before the first section")
        if "=" not in line:
            _fail(ln, line, line.strip(), "expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        _entry(spec, section, key, value, ln, line)
    _finish(spec)
    return spec


def _entry(spec: SpecFile, section, key, value, ln, line):
    parts = key.split()
    if section == "field":
        if key != "field":
            _fail(ln, line, key, f"unknown key {key!r} in [field]")
        if value != "rational":
            if not value.isdigit() or not _is_prime(int(value)):
                _fail(ln, line, value, "field must be 'rational' or a prime")
        spec.field = value
    elif section == "quiver":
        if key == "vertices":
            if not value.isdigit() or int(value) < 1:
                _fail(ln, line, value, "vertex count must be a positive integer")
            spec.vertices = int(value)
            spec.where["vertices"] = ln
        elif len(parts) == 2 and parts[0] == "arrow":
            m = re.fullmatch(r"(\d+)\s*->\s*(\d+)", value)
            if not m:
                _fail(ln, line, value, "arrow must read 'SRC -> TGT'")
            if not re.fullmatch(_NAME, parts[1]) or any(a[0] == parts[1] for a in spec.arrows):
                _fail(ln, line, parts[1], f"bad or repeated arrow name {parts[1]!r}")
            if not spec.vertices:
                _fail(ln, line, key, "declare 'vertices' before arrows")
            s, t = int(m.group(1)), int(m.group(2))
            eq = line.index("=")
            for v, grp in ((s, 1), (t, 2)):
                if not 1 <= v <= spec.vertices:
                    _fail(ln, line, m.group(grp), f"vertex {v} out of range 1..{spec.vertices}",
                          start=eq + 1 + m.start(grp))
            spec.arrows.append((parts[1], s, t))
        else:
            _fail(ln, line, key, f"unknown key {key!r} in [quiver]")
    elif section == "relations":
        if key != "rel":
            _fail(ln, line, key, f"unknown key {key!r} in [relations]")
        spec.relations.append(_check_expr(spec, ln, line, value))
        spec.where[("rel", len(spec.relations) - 1)] = ln
    elif section == "action":
        _action_entry(spec, parts, key, value, ln, line)
    elif section == "objects":
        if not re.fullmatch(_NAME, key):
            _fail(ln, line, key, f"bad object name {key!r}")
        if key in spec.objects:
            _fail(ln, line, key, f"object {key!r} defined twice")
        m = _OBJECT.match(value)
        if not m:
            _fail(ln, line, value, "unknown object construction")
        if m.group(1):
            v = int(m.group(2))
            if not 1 <= v <= spec.vertices:
                _fail(ln, line, m.group(2), f"vertex {v} out of range")
            spec.objects[key] = (m.group(1), (v,))
        elif m.group(3):
            if m.group(3) not in spec.objects:
                _fail(ln, line, m.group(3), f"unknown object {m.group(3)!r}")
            spec.objects[key] = ("syzygy", (m.group(3), int(m.group(4))))
        else:
            if m.group(5) not in spec.generators:
                _fail(ln, line, m.group(5), f"unknown generator {m.group(5)!r}")
            if m.group(6) not in spec.objects:
                _fail(ln, line, m.group(6), f"unknown object {m.group(6)!r}")
            spec.objects[key] = ("twist", (m.group(5), m.group(6)))
        spec.where[("object", key)] = ln
    elif section == "conditions":
        if key == "objects":
            out = []
            for item in _split(value):
                m = re.fullmatch(rf"({_NAME})(?:\[\s*(-?\d+)\s*\])?", item)
                if not m or m.group(1) not in spec.objects:
                    _fail(ln, line, item, f"unknown object {item!r}")
                out.append((m.group(1), int(m.group(2) or 0)))
            spec.condition_objects = out
        elif len(parts) == 2 and parts[0] == "gset":
            if parts[1] not in spec.generators:
                _fail(ln, line, parts[1], f"unknown generator {parts[1]!r}")
            names = tuple(_split(value))
            for nm in names:
                if nm not in spec.objects:
                    _fail(ln, line, nm, f"unknown object {nm!r}")
            spec.gset[parts[1]] = names
            spec.where[("gset", parts[1])] = ln
        else:
            _fail(ln, line, key, f"unknown key {key!r} in [conditions]")
    else:
        _complex_entry(spec, section[1], parts, key, value, ln, line)


def _action_entry(spec, parts, key, value, ln, line):
    if key == "kind":
        if value not in ("trivial", "finite", "free-cyclic"):
            _fail(ln, line, value, f"unknown group kind {value!r}")
        spec.action_kind = value
    elif len(parts) == 2 and parts[0] == "generator":
        try:
            perm = tuple(int(x) for x in value.split())
        except ValueError:
            _fail(ln, line, value, "vertex permutation must be integers")
        if sorted(perm) != list(range(1, spec.vertices + 1)):
            _fail(ln, line, value, "not a permutation of the vertices")
        spec.generators[parts[1]] = (perm, {})
        spec.where[("generator", parts[1])] = ln
    elif len(parts) == 3 and parts[0] == "image":
        if parts[1] not in spec.generators:
            _fail(ln, line, parts[1], f"unknown generator {parts[1]!r}")
        if parts[2] not in {a[0] for a in spec.arrows}:
            _fail(ln, line, parts[2], f"unknown arrow {parts[2]!r}")
        spec.generators[parts[1]][1][parts[2]] = _check_expr(spec, ln, line, value)
    elif len(parts) == 2 and parts[0] == "element":
        word = tuple(value.split())
        for w in word:
            if w.removesuffix("^-1") not in spec.generators:
                _fail(ln, line, w, f"unknown generator {w!r}")
        spec.elements[parts[1]] = word
        spec.where["elements"] = ln
    else:
        _fail(ln, line, key, f"unknown key {key!r} in [action]")


def _complex_entry(spec, name, parts, key, value, ln, line):
    cur = spec.complexes[name]
    if key in ("sum", "resolution", "regular"):
        if cur is not None:
            _fail(ln, line, key, f"complex {name!r} already has a definition")
        if key == "sum":
            names = tuple(_split(value))
            for nm in names:
                if nm not in spec.complexes or spec.complexes[nm] is None:
                    _fail(ln, line, nm, f"unknown complex {nm!r}")
            spec.complexes[name] = ("sum", names)
        elif key == "resolution":
            m = re.fullmatch(rf"({_NAME})\s*,\s*(\d+)", value)
            if not m or m.group(1) not in spec.objects:
                _fail(ln, line, value, "resolution needs 'OBJECT, LENGTH'")
            spec.complexes[name] = ("resolution", (m.group(1), int(m.group(2))))
        else:
            if value != "yes":
                _fail(ln, line, value, "write 'regular = yes'")
            spec.complexes[name] = ("regular", ())
        return
    if len(parts) != 2 or parts[0] not in ("term", "d") or not re.fullmatch(r"-?\d+", parts[1]):
        _fail(ln, line, key, f"unknown key {key!r} in [complex {name}]")
    if cur is None:
        cur = spec.complexes[name] = ("terms", {}, {})
    elif cur[0] != "terms":
        _fail(ln, line, key, f"complex {name!r} already has a definition")
    deg = int(parts[1])
    if parts[0] == "term":
        try:
            vs = tuple(int(x) for x in value.split())
        except ValueError:
            _fail(ln, line, value, "term must list vertices")
        for v in vs:
            if not 1 <= v <= spec.vertices:
                _fail(ln, line, value, f"vertex {v} out of range")
        cur[1][deg] = vs
    else:
        rows = tuple(tuple(_check_expr(spec, ln, line, e) for e in r.split(",")) for r in value.split(";"))
        cur[2][deg] = rows
        spec.where[("d", name, deg)] = ln


def _finish(spec: SpecFile):
    if not spec.vertices:
        raise ParseError(1, 1, "missing or empty [quiver] section")
    if spec.action_kind == "trivial" and spec.generators:
        raise ParseError(spec.where[("generator", next(iter(spec.generators)))], 1,
                         "generators given for a trivial action")
    if spec.action_kind != "trivial" and not spec.generators:
        raise ParseError(1, 1, f"{spec.action_kind} action needs a generator")
    if spec.action_kind == "finite" and not spec.elements:
        raise ParseError(1, 1, "finite action needs its element list")
    for name, c in spec.complexes.items():
        ln = spec.where[("complex", name)]
        if c is None:
            raise ParseError(ln, 1, f"complex {name!r} is empty")
        if c[0] != "terms":
            continue
        for deg, rows in c[2].items():
            src, tgt = c[1].get(deg, ()), c[1].get(deg + 1, ())
            dl = spec.where[("d", name, deg)]
            if len(rows) != len(tgt) or any(len(r) != len(src) for r in rows):
                raise ParseError(dl, 1, f"differential d{deg} of {name!r} should be "
                                        f"{len(tgt)} x {len(src)}")
    for g, names in spec.gset.items():
        if len(names) != len(spec.condition_objects):
            raise ParseError(spec.where[("gset", g)], 1, "g-set must list one image per condition object")


def _split(value: str) -> list[str]:
    return [s.strip() for s in value.split(",") if s.strip()]


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


# -- serialization -------------------------------------------------------------------

def serialize_spec(spec: SpecFile) -> str:
    out = ["[field]", f"field = {spec.field}", "", "[quiver]", f"vertices = {spec.vertices}"]
    out += [f"arrow {a} = {s} -> {t}" for a, s, t in spec.arrows]
    if spec.relations:
        out += ["", "[relations]"] + [f"rel = {r}" for r in spec.relations]
    if spec.action_kind != "trivial" or spec.generators:
        out += ["", "[action]", f"kind = {spec.action_kind}"]
        for g, (perm, imgs) in spec.generators.items():
            out.append(f"generator {g} = {' '.join(map(str, perm))}")
            out += [f"image {g} {a} = {t}" for a, t in imgs.items()]
        out += [f"element {e} = {' '.join(w)}".rstrip() for e, w in spec.elements.items()]
    if spec.objects:
        out += ["", "[objects]"]
        for nm, (kind, args) in spec.objects.items():
            out.append(f"{nm} = {kind}({', '.join(map(str, args))})")
    for nm, c in spec.complexes.items():
        out += ["", f"[complex {nm}]"]
        if c[0] == "sum":
            out.append(f"sum = {', '.join(c[1])}")
        elif c[0] == "resolution":
            out.append(f"resolution = {c[1][0]}, {c[1][1]}")
        elif c[0] == "regular":
            out.append("regular = yes")
        else:
            out += [f"term {k} = {' '.join(map(str, vs))}" for k, vs in c[1].items()]
            out += [f"d {k} = {' ; '.join(', '.join(r) for r in rows)}" for k, rows in c[2].items()]
    if spec.condition_objects or spec.gset:
        out += ["", "[conditions]"]
        if spec.condition_objects:
            out.append("objects = " + ", ".join(f"{n}[{s}]" if s else n for n, s in spec.condition_objects))
        out += [f"gset {g} = {', '.join(v)}" for g, v in spec.gset.items()]
    return "\n".join(out) + "\n"


# -- building domain objects -----------------------------------------------------------

@dataclass
class Workspace:
    spec: SpecFile
    algebra: PathAlgebra
    action: GroupAction
    objects: dict
    complexes: dict

    def condition_inputs(self):
        """(objects for the condition checker, g-set as index permutations)."""
        names = [n for n, _ in self.spec.condition_objects] or list(self.objects)
        shifts = dict(self.spec.condition_objects)
        objs = [(self.objects[n], shifts.get(n, 0)) for n in names]
        gset = {g: [names.index(x) if x in names else -1 for x in imgs] for g, imgs in self.spec.gset.items()}
        return objs, gset


def build(spec: SpecFile) -> Workspace:
    from . import modules as mod
    from .complexes import ProjComplex, direct_sum, projective_resolution

    F = QQ if spec.field == "rational" else GF(int(spec.field))
    Q = Quiver.from_arrows(spec.vertices, {a: (s - 1, t - 1) for a, s, t in spec.arrows})
    rels = []
    for k, text in enumerate(spec.relations):
        rel = {}
        for c, words in parse_combination(text):
            key = tuple(Q.arrow_index(w) for w in words)
            rel[key] = rel.get(key, Fraction(0)) + c
        rels.append((k, rel))
    try:
        A = PathAlgebra(Q, [r for _, r in rels], F)
    except MalformedRelation as exc:
        raise ParseError(spec.where.get(("rel", 0), 1), 1, f"relations: {exc}") from None
    except ValueError as exc:
        raise ParseError(spec.where.get("vertices", 1), 1, str(exc)) from None
    gens = {}
    for g, (perm, imgs) in spec.generators.items():
        try:
            gens[g] = Automorphism.from_strings(A, [p - 1 for p in perm], imgs, name=g)
        except ValueError as exc:
            raise ParseError(spec.where[("generator", g)], 1, f"generator {g}: {exc}") from None
    try:
        action = GroupAction(A, gens, spec.action_kind, {e: list(w) for e, w in spec.elements.items()})
    except ValueError as exc:
        raise ParseError(spec.where.get("elements", 1), 1, f"action: {exc}") from None
    objects = {}
    for nm, (kind, args) in spec.objects.items():
        if kind == "simple":
            M = mod.simple(A, args[0] - 1)
        elif kind == "projective":
            M = mod.projective(A, args[0] - 1)
        elif kind == "injective":
            M = mod.injective(A, args[0] - 1)
        elif kind == "syzygy":
            M = mod.syzygy(objects[args[0]], args[1])
        else:
            M = mod.twist(gens[args[0]], objects[args[1]])
        M.name = nm
        objects[nm] = M
    complexes = {}
    for nm, c in spec.complexes.items():
        if c[0] == "sum":
            T = direct_sum([complexes[x] for x in c[1]], A)
        elif c[0] == "resolution":
            T = projective_resolution(objects[c[1][0]], c[1][1])
        elif c[0] == "regular":
            T = ProjComplex.regular(A)
        else:
            terms = {k: tuple(v - 1 for v in vs) for k, vs in c[1].items()}
            diffs = {k: [[A.element(e) for e in row] for row in rows] for k, rows in c[2].items()}
            try:
                T = ProjComplex(A, terms, diffs, check=True)
            except ValueError as exc:
                raise ParseError(spec.where[("complex", nm)], 1, f"complex {nm}: {exc}") from None
        T.name = nm
        complexes[nm] = T
    return Workspace(spec, A, action, objects, complexes)


def load(path: str) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return build(parse_spec(fh.read()))
