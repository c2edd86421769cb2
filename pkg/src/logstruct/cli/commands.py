"""Command implementations: each takes parsed input and returns a Report."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..errors import LogStructError, Obstructed, Unsupported, ValidationError
from ..logsite import (
    check_df,
    check_log,
    check_sheaf,
    df_isomorphic,
    df_to_kato,
    is_quasi_integral,
    isomorphic,
    kato_to_df,
    lift_chart,
    lift_projects,
    pullback,
    upgrade_chart,
    verify_chart,
    verify_strict,
)
from ..logsite.df import check_transitions
from ..monoids import (
    AffineMonoid,
    MonoidHom,
    PresentedMonoid,
    gp,
    hilbert_basis,
    is_saturated,
    kummer,
    predicates,
    present,
    saturate,
    sharpen,
    sharpen_presented,
    to_affine,
    tristate,
    units,
)
from ..rootstack import chart_stack, export_toric, fiber_rank, local_root_stack, tower
from .formats import Model, write_df, write_kato, write_monoid


@dataclass
class Options:
    n: Optional[int] = None
    N: Optional[int] = None
    bound: int = 32
    cocycles: bool = False
    reference: Optional[Model] = None


@dataclass
class Report:
    command: str
    status: str = "ok"  # ok | violation | undecided | error
    payload: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)
    document: Optional[str] = None

    def worst(self, status: str) -> None:
        order = ["ok", "undecided", "violation", "error"]
        if order.index(status) > order.index(self.status):
            self.status = status

    def as_dict(self) -> dict:
        out = {"command": self.command, "status": self.status, "payload": self.payload, "diagnostics": self.diagnostics}
        if self.document is not None:
            out["document"] = self.document
        return out


# -- rendering helpers ----------------------------------------------------------------------


def vec(v) -> list:
    return [int(c) for c in v]


def monoid_data(m) -> dict:
    if isinstance(m, AffineMonoid):
        return {"kind": "affine", "dim": m.dim, "gens": [vec(g) for g in m.gens]}
    return {"kind": "presented", "gens": m.ngens, "relations": [[vec(u), vec(v)] for u, v in m.relations]}


def group_data(g) -> dict:
    return {"rank": g.rank, "torsion": list(g.torsion), "text": str(g)}


def hom_images(h: MonoidHom) -> list:
    return [vec(v) for v in h.images]


def _affine_or_none(m):
    if isinstance(m, AffineMonoid):
        return m
    try:
        return to_affine(m)[0]
    except LogStructError:
        return None


def _need_affine(m, what: str) -> AffineMonoid:
    a = _affine_or_none(m)
    if a is None:
        raise Unsupported(f"{what} needs a monoid realisable as an affine monoid")
    return a


def _with_bound(m, bound: int):
    return m.with_bound(bound) if isinstance(m, PresentedMonoid) else m


def _monoids(model: Model, bound: int) -> list:
    if not model.monoids:
        raise ValidationError("input has no monoid")
    return [(name, _with_bound(m, bound)) for name, m in model.monoids.items()]


# -- monoid commands ------------------------------------------------------------------------


def monoid_check(model: Model, opts: Options, rep: Report) -> None:
    for name, m in _monoids(model, opts.bound):
        pr = predicates(m)
        entry = {"monoid": monoid_data(m)}
        entry.update({k: tristate(v) for k, v in pr.as_dict().items()})
        if any(v is None for v in pr.as_dict().values()):
            rep.worst("undecided")
            rep.diagnostics.append(f"{name}: some predicates are undecided within bound {opts.bound}")
        a = _affine_or_none(m)
        if a is not None and not pr.saturated:
            entry["saturation"] = [vec(g) for g in saturate(a).gens]
        rep.payload[name] = entry


def monoid_gp(model: Model, opts: Options, rep: Report) -> None:
    for name, m in _monoids(model, opts.bound):
        g = gp(m)
        rep.payload[name] = {"group": group_data(g.group), "images": [vec(v) for v in g.images]}


def monoid_units(model: Model, opts: Options, rep: Report) -> None:
    for name, m in _monoids(model, opts.bound):
        if isinstance(m, AffineMonoid):
            rep.payload[name] = {"unit_lattice_basis": [vec(u) for u in units(m)], "sharp": tristate(not units(m))}
        else:
            ug = m.unit_group
            rep.payload[name] = {
                "unit_generators": list(m.unit_generators),
                "unit_group": group_data(ug),
                "sharp": tristate(not m.unit_generators),
            }


def monoid_sharpen(model: Model, opts: Options, rep: Report) -> None:
    lines = []
    for name, m in _monoids(model, opts.bound):
        s, q = sharpen(m) if isinstance(m, AffineMonoid) else sharpen_presented(m)
        rep.payload[name] = {"sharp": monoid_data(s), "quotient_images": hom_images(q)}
        lines += write_monoid(f"{name}_sharp", s)
    rep.document = "\n".join(lines) + "\n"


def monoid_saturate(model: Model, opts: Options, rep: Report) -> None:
    lines = []
    for name, m in _monoids(model, opts.bound):
        a = _need_affine(m, "saturation")
        s = saturate(a)
        rep.payload[name] = {"saturation": monoid_data(s), "was_saturated": tristate(is_saturated(a))}
        lines += write_monoid(f"{name}_sat", s)
    rep.document = "\n".join(lines) + "\n"


def monoid_hilbert(model: Model, opts: Options, rep: Report) -> None:
    for name, m in _monoids(model, opts.bound):
        a = _need_affine(m, "a Hilbert basis")
        rep.payload[name] = {"hilbert_basis": [vec(v) for v in hilbert_basis(a.gens, a.dim)]}


def monoid_present(model: Model, opts: Options, rep: Report) -> None:
    lines = []
    for name, m in _monoids(model, opts.bound):
        q = present(m, bound=opts.bound) if isinstance(m, AffineMonoid) else m
        rep.payload[name] = {"generators": q.ngens, "relations": [[vec(u), vec(v)] for u, v in q.relations]}
        lines += write_monoid(f"{name}_pres", q)
    rep.document = "\n".join(lines) + "\n"


def monoid_cn(model: Model, opts: Options, rep: Report) -> None:
    n = _require(opts.n, "-n")
    for name, m in _monoids(model, opts.bound):
        k = kummer(_need_affine(m, "C_n"), n)
        rep.payload[name] = {"n": n, "group": group_data(k.group), "generator_degrees": [vec(d) for d in k.generator_degrees()]}


def _require(value, flag):
    if value is None:
        raise ValidationError(f"this command needs {flag}")
    if value < 1:
        raise ValidationError(f"{flag} must be positive")
    return value


# -- log commands ----------------------------------------------------------------------------


def _violations(r) -> list:
    return [f"{v.element}: {v.message}" for v in r.violations]


def log_check(model: Model, opts: Options, rep: Report) -> None:
    if not model.sites:
        raise ValidationError("input has no site")
    for name, site in model.sites.items():
        entry = {"elements": list(site.elements)}
        for (sname, fname), f in sorted(model.sheaves.items()):
            if sname != name:
                continue
            r = check_sheaf(f)
            entry[f"sheaf_{fname}"] = r.status
            rep.worst(r.status)
            rep.diagnostics += [f"{name}/{fname}: {m}" for m in _violations(r)]
        if name in model.kato:
            r = check_log(model.kato[name])
            entry["kato"] = r.status
            entry["quasi_integral"] = tristate(is_quasi_integral(model.kato[name]))
            rep.worst(r.status)
            rep.diagnostics += [f"{name}/kato: {m}" for m in _violations(r)]
        if name in model.df:
            d = model.df[name]
            r = check_df(d)
            entry["df"] = r.status
            rep.worst(r.status)
            rep.diagnostics += [f"{name}/df: {m}" for m in _violations(r)]
            if opts.cocycles:
                tv = check_transitions(d, model.transitions.get(name, {}))
                entry["transitions"] = "ok" if not tv else "violation"
                if tv:
                    rep.worst("violation")
                    rep.diagnostics += [f"{name}/transitions: {v.element}: {v.message}" for v in tv]
        rep.payload[name] = entry


def _df_payload(d) -> dict:
    site = d.site
    return {
        "A": {x: monoid_data(d.A.at(x)) for x in site.elements},
        "classes": {f"{x} {j}": (None if d.classes[(x, j)] is None else vec(d.classes[(x, j)])) for x in site.elements for j in range(d.A.at(x).ngens)},
    }


def _kato_payload(k) -> dict:
    site = k.site
    return {
        "M": {x: monoid_data(k.M.at(x)) for x in site.elements},
        "alpha": {x: hom_images(k.alpha[x]) for x in site.elements},
    }


def _iso_entry(res, rep: Report, key: str, where: str) -> str:
    val = tristate(res.found)
    if res.found is not True:
        rep.worst("violation" if res.found is False else "undecided")
        rep.diagnostics.append(f"{where}: {key} failed at {res.witness}: {res.reason}")
    return val


def log_kato2df(model: Model, opts: Options, rep: Report) -> None:
    name, k = _first(model.kato, "Kato log structure")
    d = kato_to_df(k)
    entry = _df_payload(d)
    entry["roundtrip_isomorphic"] = _iso_entry(isomorphic(df_to_kato(d), k), rep, "round trip", name)
    if opts.reference is not None:
        _, ref = _first(opts.reference.df, "reference DF structure")
        entry["isomorphic_to_reference"] = _iso_entry(df_isomorphic(d, ref), rep, "reference comparison", name)
    rep.payload[name] = entry
    rep.document = write_df(d)


def log_df2kato(model: Model, opts: Options, rep: Report) -> None:
    name, d = _first(model.df, "DF structure")
    k = df_to_kato(d)
    entry = _kato_payload(k)
    entry["roundtrip_isomorphic"] = _iso_entry(df_isomorphic(kato_to_df(k), d), rep, "round trip", name)
    if opts.reference is not None:
        _, ref = _first(opts.reference.kato, "reference Kato structure")
        entry["isomorphic_to_reference"] = _iso_entry(isomorphic(k, ref), rep, "reference comparison", name)
    rep.payload[name] = entry
    rep.document = write_kato(k)


def _first(table: dict, what: str):
    if not table:
        raise ValidationError(f"input has no {what}")
    return next(iter(table.items()))


def _morphism(model: Model):
    if not model.morphisms:
        raise ValidationError("input has no morphism")
    return model.morphisms[0]


def log_pullback(model: Model, opts: Options, rep: Report) -> None:
    spec, f = _morphism(model)
    if spec.target not in model.kato:
        raise ValidationError(f"target site {spec.target} has no Kato log structure")
    pb = pullback(f, model.kato[spec.target])
    r = check_log(pb)
    entry = _kato_payload(pb)
    entry["log_check"] = r.status
    rep.worst(r.status)
    rep.payload[spec.name] = entry
    rep.document = write_kato(pb)


def log_strict(model: Model, opts: Options, rep: Report) -> None:
    spec, f = _morphism(model)
    for s in (spec.source, spec.target):
        if s not in model.kato:
            raise ValidationError(f"site {s} has no Kato log structure")
    res = verify_strict(f, model.kato[spec.source], model.kato[spec.target])
    rep.payload[spec.name] = {"strict": tristate(res.strict), "witness": res.witness}
    if not res.strict:
        rep.worst("violation")
        rep.diagnostics.append(f"{spec.name}: not strict at {res.witness}")


def _charts(model: Model):
    """``(site name, DF structure, chart entries)`` for every site with charts."""
    out = []
    for name, spec in model.doc.sites.items():
        if not spec.charts:
            continue
        if name in model.df:
            d = model.df[name]
        elif name in model.kato:
            d = kato_to_df(model.kato[name])
        else:
            raise ValidationError(f"charts on site {name} need a DF or Kato structure")
        entries = []
        for x, mname, imgs, ln in spec.charts:
            if x not in d.site.elements:
                raise ValidationError(f"chart at unknown element {x} (line {ln})")
            if mname not in model.monoids:
                raise ValidationError(f"unknown monoid {mname} (line {ln})")
            p = model.monoids[mname]
            try:
                h = MonoidHom(p, d.A.at(x), tuple(imgs))
            except (ValueError, LogStructError) as exc:
                raise ValidationError(f"{exc} (line {ln})") from None
            entries.append((f"{x} {mname}", x, p, h))
        out.append((name, d, entries))
    if not out:
        raise ValidationError("input has no chart")
    return out


def log_chart_verify(model: Model, opts: Options, rep: Report) -> None:
    for name, d, entries in _charts(model):
        site_entry = {}
        for key, x, p, h in entries:
            res = verify_chart(d.A, x, p, h)
            site_entry[key] = {"is_chart": tristate(res.is_chart), "checked": list(res.checked)}
            if not res.is_chart:
                site_entry[key].update(witness=res.witness, reason=res.reason)
                rep.worst("violation")
                rep.diagnostics.append(f"{name}/{key}: not a chart at {res.witness}: {res.reason}")
        rep.payload[name] = site_entry


def log_chart_upgrade(model: Model, opts: Options, rep: Report) -> None:
    for name, d, entries in _charts(model):
        site_entry = {}
        for key, x, p, h in entries:
            first = verify_chart(d.A, x, p, h)
            if not first:
                site_entry[key] = {"is_chart": "false", "reason": first.reason}
                rep.worst("violation")
                rep.diagnostics.append(f"{name}/{key}: input is not a chart: {first.reason}")
                continue
            up = upgrade_chart(d.A, x, p, h)
            site_entry[key] = {
                "upgraded": monoid_data(up.monoid),
                "reverified": tristate(up.result.is_chart),
                "predicates_preserved": tristate(up.preserved),
                "predicates": {k: tristate(v) for k, v in up.upgraded_predicates.items()},
            }
            if not (up.result.is_chart and up.preserved):
                rep.worst("violation")
        rep.payload[name] = site_entry


def log_lift_chart(model: Model, opts: Options, rep: Report) -> None:
    for name, d, entries in _charts(model):
        site_entry = {}
        for key, x, p, h in entries:
            first = verify_chart(d.A, x, p, h)
            if not first:
                site_entry[key] = {"is_chart": "false", "reason": first.reason}
                rep.worst("violation")
                rep.diagnostics.append(f"{name}/{key}: input is not a chart: {first.reason}")
                continue
            try:
                kc = lift_chart(d, x, p, h)
            except Obstructed as exc:
                site_entry[key] = {"obstructed": str(exc)}
                rep.worst("violation")
                rep.diagnostics.append(f"{name}/{key}: {exc}")
                continue
            ok = lift_projects(d, x, h, kc)
            site_entry[key] = {
                "cover": list(kc.cover),
                "lifts": {u: hom_images(kc.lifts[u]) for u in kc.cover},
                "projects_to_chart": tristate(ok),
            }
            if not ok:
                rep.worst("violation")
        rep.payload[name] = site_entry


# -- root commands ---------------------------------------------------------------------------


def _presentation_payload(g) -> dict:
    return g.summary()


def root_chart_stack(model: Model, opts: Options, rep: Report) -> None:
    for name, m in _monoids(model, opts.bound):
        rep.payload[name] = _presentation_payload(chart_stack(m))


def root_local(model: Model, opts: Options, rep: Report) -> None:
    n = _require(opts.n, "-n")
    for name, m in _monoids(model, opts.bound):
        g = local_root_stack(m, n)
        entry = _presentation_payload(g)
        entry["invariant_part"] = [vec(v) for v in g.degree_zero_part()]
        rep.payload[name] = entry


def root_tower(model: Model, opts: Options, rep: Report) -> None:
    N = _require(opts.N, "-N")
    for name, m in _monoids(model, opts.bound):
        t = tower(m, N)
        fails = t.failures()
        rep.payload[name] = {
            "N": N,
            "levels": {str(n): {"group": group_data(t.levels[n].group), "degrees": [vec(d) for d in t.levels[n].degrees()]} for n in t.divisors()},
            "transitions": [
                {"from": mm, "to": n, "group_matrix": t.transitions[(n, mm)].group.matrix.tolist()}
                for (n, mm) in sorted(t.transitions)
            ],
            "compositions_checked": t.composition_count(),
            "verified": tristate(not fails),
        }
        if fails:
            rep.worst("violation")
            rep.diagnostics += [f"{name}: {f}" for f in fails]


def root_fiber_rank(model: Model, opts: Options, rep: Report) -> None:
    structures = dict(model.kato)
    for name, d in model.df.items():
        structures.setdefault(name, df_to_kato(d))
    if not structures:
        raise ValidationError("input has no log structure")
    for name, k in structures.items():
        rep.payload[name] = {x: fiber_rank(k, x) for x in k.site.elements}


def root_export_toric(model: Model, opts: Options, rep: Report) -> None:
    texts = []
    for name, m in _monoids(model, opts.bound):
        g = local_root_stack(m, opts.n) if opts.n is not None else chart_stack(m)
        ex = export_toric(g, bound=opts.bound)
        rep.payload[name] = {"export": ex.render().splitlines(), "homogeneous": tristate(ex.homogeneous())}
        texts.append(ex.render())
    rep.document = "".join(texts)


COMMANDS = {
    "monoid": {
        "check": monoid_check,
        "gp": monoid_gp,
        "units": monoid_units,
        "sharpen": monoid_sharpen,
        "saturate": monoid_saturate,
        "hilbert": monoid_hilbert,
        "present": monoid_present,
        "cn": monoid_cn,
    },
    "log": {
        "check": log_check,
        "kato2df": log_kato2df,
        "df2kato": log_df2kato,
        "pullback": log_pullback,
        "chart-verify": log_chart_verify,
        "chart-upgrade": log_chart_upgrade,
        "lift-chart": log_lift_chart,
        "strict": log_strict,
    },
    "root": {
        "chart-stack": root_chart_stack,
        "local": root_local,
        "tower": root_tower,
        "fiber-rank": root_fiber_rank,
        "export-toric": root_export_toric,
    },
}
