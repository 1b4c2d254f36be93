"""Definition files (``.shl``): a YAML document describing a pair and its data.

Layout::

    field: Q
    L:
      basis:
        - {name: a1, degree: -1, part: A}
        - {name: b, degree: 0, part: B}
    brackets:
      - inputs: [a1, a2, b]              # any order; Koszul sign is folded in
        output: [{basis: a1, coeff: -1}, {basis: a2, coeff: "-2"}]
    modules:
      E:
        basis: [{name: e, degree: 0}]
        actions:
          - a_inputs: [a1]               # m_{k+1}(a_1..a_k, e)
            element: e
            output: [{basis: e, coeff: -3}]
    deformations:                        # images of dual generators under Q_+
      d1:
        - generator: a1
          image: [{monomial: [a1, a2, b], coeff: 1}]
    gauges:                              # images under lambda (degree 0)
      g1:
        - generator: a1
          image: [{monomial: [a2, b], coeff: 1}]

Coefficients are integers or ``"p/q"`` strings.  Monomials name the dual
generators ``x^`` by the basis name ``x``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import yaml

from .deformations import Deformation, GaugeMap
from .graded import GradedSpace, sort_sign
from .multilinear import Derivation, SymMap, mono_degree
from .shlie import AModule, LInftyAlgebra, SHLiePair, StructureError

_RATIONAL = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


# --- errors ---------------------------------------------------------------------------

class DefinitionError(ValueError):
    """Input error; ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message: str, mark=None):
        self.line = mark.line + 1 if mark is not None else None
        self.column = mark.column + 1 if mark is not None else None
        self.message = message
        where = "line %d, column %d: " % (self.line, self.column) if mark is not None else ""
        super().__init__(where + message)


class DefinitionSyntaxError(DefinitionError):
    pass


class UnknownName(DefinitionError):
    pass


class DegreeMismatch(DefinitionError):
    pass


class OddRepetition(DefinitionError):
    pass


class DuplicateKey(DefinitionError):
    pass


# --- loader keeping positions -------------------------------------------------------------

class _Map(dict):
    mark = None


class _Seq(list):
    mark = None


class _Loader(yaml.SafeLoader):
    pass


def _construct_mapping(loader, node):
    out = _Map()
    out.mark = node.start_mark
    for knode, vnode in node.value:
        key = loader.construct_object(knode, deep=True)
        if key in out:
            raise DuplicateKey("duplicate key %r" % (key,), knode.start_mark)
        out[key] = loader.construct_object(vnode, deep=True)
    return out


def _construct_sequence(loader, node):
    out = _Seq(loader.construct_object(v, deep=True) for v in node.value)
    out.mark = node.start_mark
    return out


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)
_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_SEQUENCE_TAG, _construct_sequence)


def _mark(x, default=None):
    return getattr(x, "mark", None) or default


# --- document --------------------------------------------------------------------------------

@dataclass
class Normalization:
    """An input list that was reordered; ``sign`` was folded into the coefficients."""
    where: str
    given: tuple
    canonical: tuple
    sign: int


@dataclass
class DefinitionFile:
    path: str | None
    algebra: LInftyAlgebra
    pair: SHLiePair
    parts: dict                      # basis name -> "A" | "B"
    brackets: list                   # SymMaps on the L basis in file order
    modules: dict = field(default_factory=dict)
    deformations: dict = field(default_factory=dict)
    gauges: dict = field(default_factory=dict)
    normalizations: list = field(default_factory=list)


def _require(doc, key, typ, mark, what=None):
    if key not in doc:
        raise DefinitionSyntaxError("missing key %r%s" % (key, " in " + what if what else ""), mark)
    v = doc[key]
    if not isinstance(v, typ):
        raise DefinitionSyntaxError("%r must be a %s" % (key, typ.__name__ if isinstance(typ, type) else "mapping/list"),
                                    _mark(v, mark))
    return v


def _allowed_keys(doc, keys, what):
    for k in doc:
        if k not in keys:
            raise DefinitionSyntaxError("unexpected key %r in %s" % (k, what), doc.mark)


def parse_coeff(x, mark=None) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise DefinitionSyntaxError("coefficient %r must be an integer or a \"p/q\" string" % (x,), mark)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str) and _RATIONAL.match(x):
        try:
            return Fraction(x.replace(" ", ""))
        except ZeroDivisionError:
            raise DefinitionSyntaxError("zero denominator in %r" % x, mark) from None
    raise DefinitionSyntaxError("coefficient %r must be an integer or a \"p/q\" string" % (x,), mark)


def _index(space: GradedSpace, name, mark, what):
    if not isinstance(name, str):
        raise DefinitionSyntaxError("%s must be a name, got %r" % (what, name), mark)
    try:
        return space.index(name)
    except KeyError:
        raise UnknownName("unknown %s %r" % (what, name), mark) from None


def _outputs(entries, space: GradedSpace, mark, what) -> dict:
    if not isinstance(entries, list):
        raise DefinitionSyntaxError("output of %s must be a list" % what, mark)
    out: dict = {}
    for ent in entries:
        m = _mark(ent, mark)
        if not isinstance(ent, dict):
            raise DefinitionSyntaxError("output entry must be a mapping", m)
        _allowed_keys(ent, ("basis", "coeff"), "output entry")
        w = _index(space, _require(ent, "basis", str, m), m, "basis element")
        c = parse_coeff(_require(ent, "coeff", (int, str), m), m)
        if w in out:
            raise DuplicateKey("basis element %r listed twice in %s" % (space.basis[w].name, what), m)
        if c:
            out[w] = c
    return out


def _canonical(indices, degrees, names, mark, what, norms):
    sign, key = sort_sign(indices, degrees)
    if sign == 0:
        raise OddRepetition("odd element repeated in %s" % what, mark)
    if tuple(indices) != key:
        norms.append(Normalization(what, tuple(names[i] for i in indices), tuple(names[i] for i in key), sign))
    return sign, key


def _polys(entries, pair: SHLiePair, degree: int, mark, what, norms) -> dict:
    """Generator-image entries of a derivation, in pair order."""
    space = pair.L.space
    dd = pair.dd
    names = space.names()
    if not isinstance(entries, list):
        raise DefinitionSyntaxError("%s must be a list of generator images" % what, mark)
    images: dict = {}
    for ent in entries:
        m = _mark(ent, mark)
        if not isinstance(ent, dict):
            raise DefinitionSyntaxError("generator image must be a mapping", m)
        _allowed_keys(ent, ("generator", "image"), "generator image")
        g = _index(space, _require(ent, "generator", str, m), m, "generator")
        if g in images:
            raise DuplicateKey("generator %r given twice in %s" % (names[g], what), m)
        img: dict = {}
        for term in _require(ent, "image", list, m):
            tm = _mark(term, m)
            if not isinstance(term, dict):
                raise DefinitionSyntaxError("image term must be a mapping", tm)
            _allowed_keys(term, ("monomial", "coeff"), "image term")
            mono = _require(term, "monomial", list, tm)
            idx = [_index(space, x, tm, "generator") for x in mono]
            sign, key = _canonical(idx, dd, names, tm, "%s image of %s^" % (what, names[g]), norms)
            c = parse_coeff(_require(term, "coeff", (int, str), tm), tm)
            if mono_degree(key, dd) != dd[g] + degree:
                raise DegreeMismatch("term of degree %d in the image of %s^ (expected %d)"
                                     % (mono_degree(key, dd), names[g], dd[g] + degree), tm)
            if key in img:
                raise DuplicateKey("monomial %s repeated in the image of %s^" % (list(mono), names[g]), tm)
            if c:
                img[key] = sign * c
        images[g] = img
    return images


def load(text: str, path: str | None = None) -> DefinitionFile:
    try:
        doc = yaml.load(text, Loader=_Loader)
    except DuplicateKey:
        raise
    except yaml.MarkedYAMLError as exc:
        raise DefinitionSyntaxError(exc.problem or str(exc), exc.problem_mark) from None
    if not isinstance(doc, dict):
        raise DefinitionSyntaxError("top level must be a mapping")
    top = doc.mark
    _allowed_keys(doc, ("field", "L", "brackets", "modules", "deformations", "gauges"), "the document")
    fld = doc.get("field", "Q")
    if fld != "Q":
        raise DefinitionSyntaxError("only field Q is supported, got %r" % (fld,), top)
    Ldoc = _require(doc, "L", dict, top)
    _allowed_keys(Ldoc, ("basis",), "L")
    pairs, parts = [], {}
    for ent in _require(Ldoc, "basis", list, Ldoc.mark, "L"):
        m = _mark(ent, Ldoc.mark)
        if not isinstance(ent, dict):
            raise DefinitionSyntaxError("basis entry must be a mapping", m)
        _allowed_keys(ent, ("name", "degree", "part"), "basis entry")
        name = _require(ent, "name", str, m)
        deg = _require(ent, "degree", int, m)
        part = _require(ent, "part", str, m)
        if part not in ("A", "B"):
            raise DefinitionSyntaxError("part must be A or B, got %r" % part, m)
        if name in parts:
            raise DuplicateKey("basis element %r declared twice" % name, m)
        parts[name] = part
        pairs.append((name, deg))
    space = GradedSpace.from_pairs("L", pairs)
    names = space.names()
    norms: list = []
    brackets: dict = {}
    seen: set = set()
    for ent in doc.get("brackets") or []:
        m = _mark(ent, top)
        if not isinstance(ent, dict):
            raise DefinitionSyntaxError("bracket entry must be a mapping", m)
        _allowed_keys(ent, ("inputs", "output"), "bracket entry")
        inputs = _require(ent, "inputs", list, m)
        idx = [_index(space, x, m, "basis element") for x in inputs]
        sign, key = _canonical(idx, space.degrees, names, m, "bracket inputs", norms)
        if key in seen:
            raise DuplicateKey("bracket on %s given twice (after normalization)" % list(names[i] for i in key), m)
        seen.add(key)
        out = _outputs(_require(ent, "output", list, m), space, m, "bracket")
        din = sum(space.degree(i) for i in key)
        for w in out:
            if space.degree(w) != din + 1:
                raise DegreeMismatch("lambda_%d(%s) has output %s of degree %d, expected %d"
                                     % (len(key), ", ".join(names[i] for i in key), names[w],
                                        space.degree(w), din + 1), m)
        k = len(key)
        f = brackets.setdefault(k, SymMap(k, space, space, 1))
        f.add_value(list(key), {w: sign * c for w, c in out.items()})
    alg = LInftyAlgebra.from_brackets(space, [brackets[k] for k in sorted(brackets)])
    a_part = [n for n in names if parts[n] == "A"]
    try:
        pair = SHLiePair(alg, a_part)
    except StructureError as exc:
        raise DefinitionError(str(exc), top) from None
    df = DefinitionFile(path, alg, pair, parts, [brackets[k] for k in sorted(brackets)], normalizations=norms)
    for name, mdoc in (doc.get("modules") or {}).items():
        df.modules[name] = _module(name, mdoc, pair, norms, top)
    for name, ddoc in (doc.get("deformations") or {}).items():
        df.deformations[name] = Deformation(Derivation(pair.dd, 1, _polys(ddoc, pair, 1, _mark(ddoc, top),
                                                                          "deformation %s" % name, norms)), name)
    for name, gdoc in (doc.get("gauges") or {}).items():
        df.gauges[name] = GaugeMap(Derivation(pair.dd, 0, _polys(gdoc, pair, 0, _mark(gdoc, top),
                                                                "gauge %s" % name, norms)))
    return df


def _module(name, mdoc, pair: SHLiePair, norms, top) -> AModule:
    m0 = _mark(mdoc, top)
    if not isinstance(mdoc, dict):
        raise DefinitionSyntaxError("module %r must be a mapping" % name, m0)
    _allowed_keys(mdoc, ("basis", "actions"), "module %s" % name)
    pairs = []
    for ent in _require(mdoc, "basis", list, m0):
        m = _mark(ent, m0)
        if not isinstance(ent, dict):
            raise DefinitionSyntaxError("basis entry must be a mapping", m)
        _allowed_keys(ent, ("name", "degree"), "module basis entry")
        nm = _require(ent, "name", str, m)
        if nm in [p[0] for p in pairs]:
            raise DuplicateKey("module basis element %r declared twice" % nm, m)
        pairs.append((nm, _require(ent, "degree", int, m)))
    E = GradedSpace.from_pairs(name, pairs)
    A = pair.A_space
    acts: dict = {}
    seen: set = set()
    for ent in mdoc.get("actions") or []:
        m = _mark(ent, m0)
        if not isinstance(ent, dict):
            raise DefinitionSyntaxError("action entry must be a mapping", m)
        _allowed_keys(ent, ("a_inputs", "element", "output"), "action entry")
        a_in = _require(ent, "a_inputs", list, m)
        idx = []
        for x in a_in:
            if isinstance(x, str) and x in pair.B_space.names():
                raise UnknownName("%r is not in the A-part" % x, m)
            idx.append(_index(A, x, m, "A-element"))
        sign, key = _canonical(idx, A.degrees, A.names(), m, "action inputs", norms)
        e = _index(E, _require(ent, "element", str, m), m, "module element")
        if (key, e) in seen:
            raise DuplicateKey("action on %s given twice (after normalization)"
                               % (list(A.names()[i] for i in key) + [E.names()[e]]), m)
        seen.add((key, e))
        out = _outputs(_require(ent, "output", list, m), E, m, "action")
        din = sum(A.degree(i) for i in key) + E.degree(e)
        for w in out:
            if E.degree(w) != din + 1:
                raise DegreeMismatch("m_%d(%s) has output %s of degree %d, expected %d"
                                     % (len(key) + 1, ", ".join(list(A.names()[i] for i in key) + [E.names()[e]]),
                                        E.names()[w], E.degree(w), din + 1), m)
        k = len(key) + 1
        f = acts.setdefault(k, SymMap(k, A, E, 1, slot=E))
        f.add_value(list(key), {w: sign * c for w, c in out.items()}, e)
    return AModule.from_actions(pair.A, E, [acts[k] for k in sorted(acts)], name)


def parse(path) -> DefinitionFile:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise DefinitionError("cannot read %s: %s" % (path, exc.strerror)) from None
    return load(text, str(path))


# --- serialization --------------------------------------------------------------------------

def _coeff_out(c: Fraction):
    return int(c) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


def _image_entries(D: Derivation, pair: SHLiePair) -> list:
    names = pair.L.space.names()
    out = []
    for g in sorted(D.images):
        img = D.images[g]
        if not img:
            continue
        out.append({"generator": names[g],
                    "image": [{"monomial": [names[x] for x in mono], "coeff": _coeff_out(c)}
                              for mono, c in sorted(img.items(), key=lambda kv: (len(kv[0]), kv[0]))]})
    return out


def to_document(df: DefinitionFile) -> dict:
    """Canonical document: sorted keys, canonical input order, zero terms dropped."""
    sp = df.algebra.space
    names = sp.names()
    doc: dict = {"field": "Q",
                 "L": {"basis": [{"name": n, "degree": sp.degree(i), "part": df.parts[n]}
                                 for i, n in enumerate(names)]}}
    br = []
    for f in df.brackets:
        for U in sorted(f.coeffs):
            val = f.coeffs[U]
            if val:
                br.append({"inputs": [names[u] for u in U],
                           "output": [{"basis": names[w], "coeff": _coeff_out(c)} for w, c in sorted(val.items())]})
    doc["brackets"] = br
    if df.modules:
        mods = {}
        for name, mod in df.modules.items():
            E = mod.space
            An = df.pair.A_space.names()
            acts = []
            for k in sorted(mod.actions):
                f = mod.actions[k]
                for (U, e) in sorted(f.coeffs):
                    val = f.coeffs[(U, e)]
                    if val:
                        acts.append({"a_inputs": [An[u] for u in U], "element": E.names()[e],
                                     "output": [{"basis": E.names()[w], "coeff": _coeff_out(c)}
                                                for w, c in sorted(val.items())]})
            mods[name] = {"basis": [{"name": n, "degree": E.degree(i)} for i, n in enumerate(E.names())],
                          "actions": acts}
        doc["modules"] = mods
    if df.deformations:
        doc["deformations"] = {n: _image_entries(d.Q_plus, df.pair) for n, d in df.deformations.items()}
    if df.gauges:
        doc["gauges"] = {n: _image_entries(g.psi, df.pair) for n, g in df.gauges.items()}
    return doc


class _Dumper(yaml.SafeDumper):
    pass


def _flow_small(dumper, data):
    flow = all(not isinstance(v, (dict, list)) for v in data.values())
    return dumper.represent_mapping("tag:yaml.org,2002:map", data.items(), flow_style=flow)


def _flow_list(dumper, data):
    flow = all(not isinstance(v, (dict, list)) for v in data)
    return dumper.represent_sequence("tag:yaml.org,2002:seq", data, flow_style=flow)


_Dumper.add_representer(dict, _flow_small)
_Dumper.add_representer(list, _flow_list)


def dumps(df: DefinitionFile) -> str:
    return yaml.dump(to_document(df), Dumper=_Dumper, sort_keys=False, default_flow_style=False, width=100)
