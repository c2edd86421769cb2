"""Text formats for monoids, sites and log structures, with a writer for round trips.

A document is a sequence of blocks, each opened by a header line::

    monoid N affine dim=1        gen lines
    monoid Q presented gens=2    rel lines
    site S                       object / cover lines
    sheaf O                      at / restrict lines (attached to the last site)
    df A                         at / restrict / class / transition lines
    morphism f S -> T            map / compare lines

plus the single-line statements ``alpha x : ...`` and ``chart x P : ...``.
``#`` starts a comment.  Vectors are written ``(1,0,-1)``; a lone vector
after ``gen`` or in a ``rel`` may also be given as bare integers.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

from ..errors import LogStructError, ParseError, ValidationError
from ..logsite import (
    DFStructure,
    FiniteSite,
    KatoStructure,
    LogMorphismData,
    MonoidSheaf,
    SiteMorphism,
    build_sheaf,
)
from ..monoids import AffineMonoid, MonoidHom, PresentedMonoid

_TUPLE = re.compile(r"\(([^()]*)\)")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.'-]*$")


def parse_vector(text: str, line: int) -> tuple:
    text = text.strip()
    if text.startswith("("):
        m = _TUPLE.fullmatch(text)
        if not m:
            raise ParseError(f"malformed vector {text!r}", line)
        text = m.group(1)
    parts = [p for p in re.split(r"[,\s]+", text) if p]
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ParseError(f"malformed vector {text!r}", line) from None


def parse_images(text: str, line: int) -> list:
    text = text.strip()
    out = []
    pos = 0
    for m in _TUPLE.finditer(text):
        if text[pos:m.start()].strip():
            raise ParseError(f"unexpected text {text[pos:m.start()].strip()!r}", line)
        out.append(parse_vector(m.group(0), line))
        pos = m.end()
    if text[pos:].strip():
        raise ParseError(f"unexpected text {text[pos:].strip()!r}", line)
    return out


def _name(tok: str, line: int) -> str:
    if not _NAME.match(tok):
        raise ParseError(f"bad name {tok!r}", line)
    return tok


# -- parsed specifications -----------------------------------------------------------


@dataclass
class SheafSpec:
    name: str
    line: int
    at: dict = field(default_factory=dict)  # element -> monoid name
    restrict: dict = field(default_factory=dict)  # (x, y) -> images
    classes: dict = field(default_factory=dict)  # (x, j) -> rep or None
    transitions: dict = field(default_factory=dict)  # (x, j, u, v, w) -> unit


@dataclass
class SiteSpec:
    name: str
    line: int
    objects: list = field(default_factory=list)
    relations: list = field(default_factory=list)  # (y, x): y < x
    covers: dict = field(default_factory=dict)
    sheaves: dict = field(default_factory=dict)
    alpha: dict = field(default_factory=dict)
    df: Optional[SheafSpec] = None
    charts: list = field(default_factory=list)  # (x, monoid name, images, line)


@dataclass
class MorphismSpec:
    name: str
    source: str
    target: str
    line: int
    mapping: dict = field(default_factory=dict)
    compare: dict = field(default_factory=dict)


@dataclass
class Document:
    monoids: dict = field(default_factory=dict)
    sites: dict = field(default_factory=dict)
    morphisms: list = field(default_factory=list)


# -- monoid blocks -------------------------------------------------------------------------


def _monoid_from_dict(obj: dict, line: int = 0):
    name = obj.get("name", "")
    kind = obj.get("kind", "affine")
    if kind == "affine":
        dim = int(obj["dim"])
        gens = [tuple(g) for g in obj.get("gen", [])]
        return _affine(name, dim, gens, line)
    if kind == "presented":
        r = int(obj["gens"])
        rels = [(tuple(u), tuple(v)) for u, v in obj.get("rel", [])]
        return _presented(name, r, rels, line)
    raise ParseError(f"unknown monoid kind {kind!r}", line)


def _affine(name, dim, gens, line):
    seen = set()
    for g in gens:
        if len(g) != dim:
            raise ParseError(f"generator {g} of {name} does not have dimension {dim}", line)
        if g in seen:
            raise ValidationError(f"duplicate generator {g} in monoid {name}")
        seen.add(g)
    return AffineMonoid(dim, tuple(gens), name=name)


def _presented(name, r, rels, line):
    for u, v in rels:
        if len(u) != r or len(v) != r or min(u + v, default=0) < 0:
            raise ParseError(f"relation {u} = {v} of {name} is not a pair of words in {r} generators", line)
    return PresentedMonoid(r, tuple(rels), name=name)


def parse_json(text: str) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    items = data.get("monoids", [data]) if isinstance(data, dict) else data
    doc = Document()
    for obj in items:
        m = _monoid_from_dict(obj)
        doc.monoids[m.name or f"m{len(doc.monoids)}"] = m
    return doc


# -- document parser ---------------------------------------------------------------------


def parse_document(text: str) -> Document:
    if text.lstrip().startswith(("{", "[")):
        return parse_json(text)
    doc = Document()
    block = None  # (kind, object)
    pending: Optional[dict] = None
    site: Optional[SiteSpec] = None

    def close():
        nonlocal pending
        if pending is not None:
            if pending["kind"] == "affine":
                m = _affine(pending["name"], pending["dim"], pending["gens"], pending["line"])
            else:
                m = _presented(pending["name"], pending["r"], pending["rels"], pending["line"])
            doc.monoids[pending["name"]] = m
            pending = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "monoid":
            close()
            toks = rest.split()
            if len(toks) != 3:
                raise ParseError("expected 'monoid <name> affine dim=<d>' or 'monoid <name> presented gens=<r>'", lineno)
            name = _name(toks[0], lineno)
            if name in doc.monoids:
                raise ValidationError(f"monoid {name} declared twice (line {lineno})")
            if toks[1] == "affine" and toks[2].startswith("dim="):
                pending = {"kind": "affine", "name": name, "dim": _int(toks[2][4:], lineno), "gens": [], "line": lineno}
            elif toks[1] == "presented" and toks[2].startswith("gens="):
                pending = {"kind": "presented", "name": name, "r": _int(toks[2][5:], lineno), "rels": [], "line": lineno}
            else:
                raise ParseError(f"unknown monoid header {rest!r}", lineno)
            block = ("monoid", None)
        elif head == "gen":
            if pending is None or pending["kind"] != "affine":
                raise ParseError("'gen' outside an affine monoid block", lineno)
            g = parse_vector(rest, lineno)
            if g in pending["gens"]:
                raise ValidationError(f"duplicate generator {g} in monoid {pending['name']} (line {lineno})")
            pending["gens"].append(g)
        elif head == "rel":
            if pending is None or pending["kind"] != "presented":
                raise ParseError("'rel' outside a presented monoid block", lineno)
            u, eq, v = rest.partition("=")
            if not eq:
                raise ParseError("expected 'rel <u> = <v>'", lineno)
            pending["rels"].append((parse_vector(u, lineno), parse_vector(v, lineno)))
        elif head == "site":
            close()
            name = _name(rest, lineno)
            if name in doc.sites:
                raise ValidationError(f"site {name} declared twice (line {lineno})")
            site = SiteSpec(name, lineno)
            doc.sites[name] = site
            block = ("site", site)
        elif head == "object":
            if block is None or block[0] != "site":
                raise ParseError("'object' outside a site block", lineno)
            toks = rest.replace("<", " < ").split()
            x = _name(toks[0], lineno)
            if x in site.objects:
                raise ValidationError(f"object {x} declared twice (line {lineno})")
            site.objects.append(x)
            if len(toks) > 1:
                if toks[1] != "<" or len(toks) < 3:
                    raise ParseError("expected 'object <x> [< <y> ...]'", lineno)
                for y in toks[2:]:
                    site.relations.append((x, _name(y, lineno)))
        elif head == "cover":
            if block is None or block[0] != "site":
                raise ParseError("'cover' outside a site block", lineno)
            x, eq, fam = rest.partition("=")
            fam = fam.strip()
            if not eq or not (fam.startswith("[") and fam.endswith("]")):
                raise ParseError("expected 'cover <x> = [<y1>, ...]'", lineno)
            members = [_name(t.strip(), lineno) for t in fam[1:-1].split(",") if t.strip()]
            site.covers.setdefault(_name(x.strip(), lineno), []).append(members)
        elif head in ("sheaf", "df"):
            close()
            if site is None:
                raise ParseError(f"'{head}' before any site", lineno)
            name = _name(rest, lineno)
            spec = SheafSpec(name, lineno)
            if head == "df":
                if site.df is not None:
                    raise ValidationError(f"site {site.name} has two df blocks (line {lineno})")
                site.df = spec
            else:
                if name in site.sheaves:
                    raise ValidationError(f"sheaf {name} declared twice on {site.name} (line {lineno})")
                site.sheaves[name] = spec
            block = (head, spec)
        elif head == "at":
            spec = _sheaf_block(block, "at", lineno)
            x, eq, m = rest.partition("=")
            if not eq:
                raise ParseError("expected 'at <x> = <monoid>'", lineno)
            spec.at[_name(x.strip(), lineno)] = (_name(m.strip(), lineno), lineno)
        elif head == "restrict":
            spec = _sheaf_block(block, "restrict", lineno)
            lhs, colon, imgs = rest.partition(":")
            x, arrow, y = lhs.partition("->")
            if not colon or not arrow:
                raise ParseError("expected 'restrict <x> -> <y> : <images>'", lineno)
            spec.restrict[(_name(x.strip(), lineno), _name(y.strip(), lineno))] = (parse_images(imgs, lineno), lineno)
        elif head == "class":
            if block is None or block[0] != "df":
                raise ParseError("'class' outside a df block", lineno)
            lhs, eq, rep = rest.partition("=")
            toks = lhs.split()
            if not eq or len(toks) != 2:
                raise ParseError("expected 'class <x> <generator> = <element>'", lineno)
            rep = rep.strip()
            value = None if rep == "glued" else parse_vector(rep, lineno)
            block[1].classes[(_name(toks[0], lineno), _int(toks[1], lineno))] = (value, lineno)
        elif head == "transition":
            if block is None or block[0] != "df":
                raise ParseError("'transition' outside a df block", lineno)
            lhs, eq, unit = rest.partition("=")
            toks = lhs.split()
            if not eq or len(toks) != 5:
                raise ParseError("expected 'transition <x> <generator> <u> <v> <w> = <unit>'", lineno)
            key = (toks[0], _int(toks[1], lineno), toks[2], toks[3], toks[4])
            block[1].transitions[key] = (parse_vector(unit, lineno), lineno)
        elif head == "alpha":
            if site is None:
                raise ParseError("'alpha' before any site", lineno)
            x, colon, imgs = rest.partition(":")
            if not colon:
                raise ParseError("expected 'alpha <x> : <images>'", lineno)
            site.alpha[_name(x.strip(), lineno)] = (parse_images(imgs, lineno), lineno)
        elif head == "chart":
            if site is None:
                raise ParseError("'chart' before any site", lineno)
            lhs, colon, imgs = rest.partition(":")
            toks = lhs.split()
            if not colon or len(toks) != 2:
                raise ParseError("expected 'chart <x> <monoid> : <images>'", lineno)
            site.charts.append((toks[0], toks[1], parse_images(imgs, lineno), lineno))
        elif head == "morphism":
            close()
            m = re.fullmatch(r"(\S+)\s+(\S+)\s*->\s*(\S+)", rest)
            if not m:
                raise ParseError("expected 'morphism <name> <source> -> <target>'", lineno)
            mor = MorphismSpec(m.group(1), m.group(2), m.group(3), lineno)
            doc.morphisms.append(mor)
            block = ("morphism", mor)
        elif head == "map":
            if block is None or block[0] != "morphism":
                raise ParseError("'map' outside a morphism block", lineno)
            s, arrow, t = rest.partition("->")
            if not arrow:
                raise ParseError("expected 'map <s> -> <t>'", lineno)
            block[1].mapping[s.strip()] = t.strip()
        elif head == "compare":
            if block is None or block[0] != "morphism":
                raise ParseError("'compare' outside a morphism block", lineno)
            s, colon, imgs = rest.partition(":")
            if not colon:
                raise ParseError("expected 'compare <s> : <images>'", lineno)
            block[1].compare[s.strip()] = (parse_images(imgs, lineno), lineno)
        else:
            raise ParseError(f"unknown statement {head!r}", lineno)
    close()
    return doc


def _int(tok: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", line) from None


def _sheaf_block(block, what, line) -> SheafSpec:
    if block is None or block[0] not in ("sheaf", "df"):
        raise ParseError(f"'{what}' outside a sheaf or df block", line)
    return block[1]


# -- building model objects --------------------------------------------------------------------


@dataclass
class Model:
    """Validated objects built from a document."""

    doc: Document
    sites: dict = field(default_factory=dict)
    sheaves: dict = field(default_factory=dict)  # (site, name) -> MonoidSheaf
    kato: dict = field(default_factory=dict)  # site -> KatoStructure
    df: dict = field(default_factory=dict)  # site -> DFStructure
    transitions: dict = field(default_factory=dict)  # site -> given transitions
    morphisms: list = field(default_factory=list)

    @property
    def monoids(self) -> dict:
        return self.doc.monoids

    def only(self, what: str, table: dict):
        if not table:
            raise ValidationError(f"input has no {what}")
        return next(iter(table.values()))


def _monoid(doc: Document, name: str, line: int):
    if name not in doc.monoids:
        raise ValidationError(f"unknown monoid {name} (line {line})")
    return doc.monoids[name]


def _hom(src, tgt, images, line) -> MonoidHom:
    try:
        h = MonoidHom(src, tgt, tuple(images))
    except (ValueError, LogStructError) as exc:
        raise ValidationError(f"{exc} (line {line})") from None
    return h


def build_site(spec: SiteSpec) -> FiniteSite:
    try:
        return FiniteSite.build(spec.name, spec.objects, spec.relations, spec.covers)
    except ValidationError as exc:
        raise ValidationError(f"{exc} (line {spec.line})") from None


def build_sheaf_spec(doc: Document, site: FiniteSite, spec: SheafSpec) -> MonoidSheaf:
    values = {x: _monoid(doc, m, ln) for x, (m, ln) in spec.at.items()}
    for x in values:
        if x not in site.elements:
            raise ValidationError(f"sheaf {spec.name} has a value at unknown element {x} (line {spec.at[x][1]})")
    given = {}
    for (x, y), (imgs, ln) in spec.restrict.items():
        if x not in values or y not in values:
            raise ValidationError(f"restriction {x} -> {y} of {spec.name} needs values at both ends (line {ln})")
        given[(x, y)] = _hom(values[x], values[y], imgs, ln)
    missing = [x for x in site.elements if x not in values]
    if not missing:
        return MonoidSheaf.build(site, values, given, spec.name)
    for x in missing:
        if not site.covered(x):
            raise ValidationError(f"sheaf {spec.name} has no value at {x} (line {spec.line})")

    def restrict_between(x, y):
        if (x, y) in given:
            return given[(x, y)]
        for z in site.interval(y, x):
            if not site.covered(z):
                return restrict_between(z, y).compose(restrict_between(x, z))
        raise ValidationError(f"sheaf {spec.name} has no restriction {x} -> {y} (line {spec.line})")

    return build_sheaf(site, values.__getitem__, restrict_between, spec.name)


def build_model(doc: Document, cocycles: bool = False) -> Model:
    model = Model(doc)
    for name, spec in doc.sites.items():
        site = build_site(spec)
        model.sites[name] = site
        for sname, sspec in spec.sheaves.items():
            model.sheaves[(name, sname)] = build_sheaf_spec(doc, site, sspec)
        o = model.sheaves.get((name, "O"))
        m = model.sheaves.get((name, "M"))
        if spec.alpha or m is not None:
            if o is None or m is None:
                raise ValidationError(f"site {name} has a log structure without both O and M sheaves (line {spec.line})")
            alpha = {}
            for x in site.elements:
                if x not in spec.alpha:
                    raise ValidationError(f"alpha is missing at {x} on site {name} (line {spec.line})")
                imgs, ln = spec.alpha[x]
                alpha[x] = _hom(m.at(x), o.at(x), imgs, ln)
            model.kato[name] = KatoStructure(o, m, alpha, name)
        if spec.df is not None:
            if o is None:
                raise ValidationError(f"df block on site {name} needs an O sheaf (line {spec.df.line})")
            a = build_sheaf_spec(doc, site, spec.df)
            classes = {}
            for x in site.elements:
                for j in range(a.at(x).ngens):
                    if (x, j) in spec.df.classes:
                        rep, ln = spec.df.classes[(x, j)]
                        if rep is None and not cocycles:
                            raise ValidationError(f"glued class at {x} needs --cocycles (line {ln})")
                        classes[(x, j)] = rep
                    elif site.covered(x) and cocycles:
                        classes[(x, j)] = None
                    else:
                        raise ValidationError(f"class of generator {j} at {x} is missing (line {spec.df.line})")
            if spec.df.transitions and not cocycles:
                ln = min(ln for _, ln in spec.df.transitions.values())
                raise ValidationError(f"transition lines need --cocycles (line {ln})")
            model.df[name] = DFStructure(o, a, classes, name)
            model.transitions[name] = {k: v for k, (v, _) in spec.df.transitions.items()}
    for mor in doc.morphisms:
        if mor.source not in model.sites or mor.target not in model.sites:
            raise ValidationError(f"morphism {mor.name} refers to an unknown site (line {mor.line})")
        src, tgt = model.sites[mor.source], model.sites[mor.target]
        try:
            fm = SiteMorphism(src, tgt, dict(mor.mapping))
        except ValidationError as exc:
            raise ValidationError(f"{exc} (line {mor.line})") from None
        o_s = model.sheaves.get((mor.source, "O"))
        o_t = model.sheaves.get((mor.target, "O"))
        if o_s is None or o_t is None:
            raise ValidationError(f"morphism {mor.name} needs O sheaves on both sites (line {mor.line})")
        comp = {}
        for s in src.elements:
            if s not in mor.compare:
                raise ValidationError(f"comparison missing at {s} (line {mor.line})")
            imgs, ln = mor.compare[s]
            comp[s] = _hom(o_t.at(fm(s)), o_s.at(s), imgs, ln)
        model.morphisms.append((mor, LogMorphismData(fm, o_s, comp, mor.name)))
    return model


# -- writer ----------------------------------------------------------------------------------


def _vec(v) -> str:
    return "(" + ",".join(str(int(c)) for c in v) + ")"


def _images(h: MonoidHom) -> str:
    return " ".join(_vec(v) for v in h.images)


def write_monoid(name: str, m) -> list[str]:
    if isinstance(m, AffineMonoid):
        lines = [f"monoid {name} affine dim={m.dim}"]
        lines += ["gen " + " ".join(str(c) for c in g) for g in m.gens]
    else:
        lines = [f"monoid {name} presented gens={m.ngens}"]
        lines += [f"rel {' '.join(map(str, u))} = {' '.join(map(str, v))}" for u, v in m.relations]
    return lines


def write_site(site: FiniteSite) -> list[str]:
    lines = [f"site {site.name}"]
    for x in site.elements:
        covers_x = [y for y in site.elements if x in site.below[y] and y != x]
        lines.append(f"object {x}" + (f" < {' '.join(covers_x)}" if covers_x else ""))
    for x in site.elements:
        for fam in site.covers.get(x, ()):
            lines.append(f"cover {x} = [{', '.join(fam)}]")
    return lines


def _write_values(f: MonoidSheaf, header: str, prefix: str) -> tuple[list[str], list[str]]:
    mons, body = [], [header]
    for x in f.site.elements:
        name = f"{prefix}_{x}"
        mons += write_monoid(name, f.at(x))
        body.append(f"at {x} = {name}")
    for x, y in f.site.pairs():
        body.append(f"restrict {x} -> {y} : {_images(f.res(x, y))}")
    return mons, body


def write_kato(k: KatoStructure) -> str:
    site = k.site
    mo, bo = _write_values(k.O, "sheaf O", "O")
    mm, bm = _write_values(k.M, "sheaf M", "M")
    alpha = [f"alpha {x} : {_images(k.alpha[x])}" for x in site.elements]
    return "\n".join(mo + mm + write_site(site) + bo + bm + alpha) + "\n"


def write_df(d: DFStructure) -> str:
    site = d.site
    mo, bo = _write_values(d.O, "sheaf O", "O")
    ma, ba = _write_values(d.A, "df A", "A")
    lines = []
    glued = False
    for x in site.elements:
        for j in range(d.A.at(x).ngens):
            rep = d.classes.get((x, j))
            glued = glued or rep is None
            lines.append(f"class {x} {j} = {'glued' if rep is None else _vec(rep)}")
    head = ["# read with --cocycles"] if glued else []
    return "\n".join(head + mo + ma + write_site(site) + bo + ba + lines) + "\n"
