"""Scenario files, the batch runner, and reports.

A scenario is a JSON document whose numeric leaves are rational strings and
whose polynomial leaves are strings in u and v.  ``parse_scenario`` validates
everything up front so that ``run`` only ever sees consistent data.
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from typing import Any, Iterable, Mapping, Sequence

from .errors import DeltaKitError, InvalidScenario, InvariantViolation, NotNefInput, NotPseudoeffective
from .exact import Poly, format_rational, parse_rational
from .invariants import (
    Check,
    Chamber1D,
    DeltaLevel,
    PointSpec,
    Refinement,
    StripSweep,
    ThreefoldModel,
    argmin_level,
    base_term,
    cross_checks,
    delta_chain,
    f_point,
    s_curve,
    s_divisor,
    s_point,
    surface_sweeps,
    vol_family,
)
from .lattice import CurveLattice
from .okounkov import refinement_barycenter, slice_barycenter
from .sweep import cell_pc

__all__ = [
    "Scenario",
    "Report",
    "parse_scenario",
    "load_scenario",
    "serialize_scenario",
    "bundled",
    "bundled_path",
    "run",
    "scale_scenario",
    "oracle_samples",
    "TASK_KINDS",
]

TASK_KINDS = ("s_divisor", "s_curve", "base", "f_point", "s_point", "delta")


@dataclass(frozen=True)
class Scenario:
    name: str
    title: str = ""
    diagnostic: bool = False
    notes: tuple[str, ...] = ()
    model: ThreefoldModel | None = None
    divisor: str = "Y"
    A: Fraction | None = None
    chambers: tuple[Chamber1D, ...] = ()
    lattice: CurveLattice | None = None
    refinements: tuple[Refinement, ...] = ()
    tasks: tuple[str, ...] = ()
    expected: Mapping[str, Fraction] = field(default_factory=dict)
    reported: Mapping[str, Fraction] = field(default_factory=dict)
    anchors: Mapping[str, str] = field(default_factory=dict)

    def task_keys(self) -> list[str]:
        keys = ["s_divisor"]
        for r in self.refinements:
            keys += [f"s_curve:{r.curve}", f"base:{r.curve}"]
            for p in r.points:
                keys += [f"f_point:{r.curve}/{p.name}", f"s_point:{r.curve}/{p.name}"]
        keys.append("delta")
        return keys


# ---------------------------------------------------------------------------
# parsing

class _Ctx:
    """Field path tracker for error messages."""

    def __init__(self, path: str = "$"):
        self.path = path

    def at(self, key) -> "_Ctx":
        return _Ctx(f"{self.path}[{key}]" if isinstance(key, int) else f"{self.path}.{key}")

    def fail(self, msg: str):
        raise InvalidScenario(f"{self.path}: {msg}")

    def rational(self, x) -> Fraction:
        if isinstance(x, bool) or not isinstance(x, (str, int)):
            self.fail(f"expected a rational string, got {x!r}")
        try:
            return parse_rational(str(x))
        except InvalidScenario as exc:
            self.fail(str(exc))

    def poly(self, x) -> Poly:
        if isinstance(x, bool) or not isinstance(x, (str, int)):
            self.fail(f"expected a polynomial string, got {x!r}")
        try:
            return Poly.parse(str(x))
        except InvalidScenario as exc:
            self.fail(str(exc))

    def obj(self, x, *keys) -> dict:
        if not isinstance(x, dict):
            self.fail("expected an object")
        for k in keys:
            if k not in x:
                self.fail(f"missing field {k!r}")
        return x

    def seq(self, x) -> list:
        if not isinstance(x, list):
            self.fail("expected a list")
        return x


def _lattice(ctx: _Ctx, data) -> CurveLattice:
    data = ctx.obj(data, "curves", "gram")
    curves = []
    for i, c in enumerate(ctx.at("curves").seq(data["curves"])):
        cc = ctx.at("curves").at(i)
        c = cc.obj(c, "name")
        curves.append((str(c["name"]), bool(c.get("active", True))))
    rows = ctx.at("gram").seq(data["gram"])
    gram = []
    for i, row in enumerate(rows):
        rc = ctx.at("gram").at(i)
        gram.append([rc.at(j).rational(x) for j, x in enumerate(rc.seq(row))])
    n = len(curves)
    if len(gram) != n or any(len(r) != n for r in gram):
        ctx.at("gram").fail(f"expected a {n}x{n} matrix")
    for i in range(n):
        for j in range(i):
            if gram[i][j] != gram[j][i]:
                ctx.at("gram").fail(f"not symmetric at ({i}, {j})")
    try:
        return CurveLattice(curves, gram)
    except InvalidScenario as exc:
        ctx.fail(str(exc))


def _name_map(ctx: _Ctx, data, names: Iterable[str], conv) -> dict:
    names = set(names)
    out = {}
    for k, x in ctx.obj(data or {}).items():
        if k not in names:
            ctx.at(k).fail("unknown curve")
        out[k] = conv(ctx.at(k), x)
    return out


def parse_scenario(text: str | bytes | Mapping) -> Scenario:
    if isinstance(text, Mapping):
        data = text
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidScenario(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    ctx = _Ctx()
    data = ctx.obj(data, "name", "chambers")

    model = None
    A_Y = None
    divisor = "Y"
    if data.get("threefold") is not None:
        tc = ctx.at("threefold")
        t = tc.obj(data["threefold"], "basis", "trilinear")
        tri = tc.obj(t["trilinear"])
        try:
            model = ThreefoldModel([str(b) for b in tc.seq(t["basis"])], {k: tc.at("trilinear").at(k).rational(v) for k, v in tri.items()})
        except InvalidScenario as exc:
            tc.fail(str(exc))

    if data.get("divisor") is not None:
        dc = ctx.at("divisor")
        dv = dc.obj(data["divisor"], "name")
        divisor = str(dv["name"])
        if "A" in dv:
            A_Y = dc.at("A").rational(dv["A"])
            if A_Y <= 0:
                dc.at("A").fail("must be positive")

    lat = _lattice(ctx.at("surface"), data["surface"]) if data.get("surface") is not None else None
    curve_names = lat.names if lat is not None else ()

    chambers = []
    for i, ch in enumerate(ctx.at("chambers").seq(data["chambers"])):
        cc = ctx.at("chambers").at(i)
        ch = cc.obj(ch, "range")
        rng = cc.at("range").seq(ch["range"])
        if len(rng) != 2:
            cc.at("range").fail("expected [a, b]")
        a, b = (cc.at("range").at(k).rational(x) for k, x in enumerate(rng))
        p3 = vol = None
        if "class" in ch:
            if model is None:
                cc.fail("class given without a threefold model")
            cls = cc.at("class").seq(ch["class"])
            if len(cls) != len(model.basis):
                cc.at("class").fail(f"expected {len(model.basis)} coefficients")
            p3 = tuple(cc.at("class").at(k).poly(x) for k, x in enumerate(cls))
        if "vol" in ch:
            vol = cc.at("vol").poly(ch["vol"])
        Q = None
        N = {}
        if "Q" in ch:
            if lat is None:
                cc.fail("restriction given without a surface")
            qmap = _name_map(cc.at("Q"), ch["Q"], curve_names, lambda c, x: c.poly(x))
            Q = tuple(qmap.get(n, Poly()) for n in lat.names)
            N = _name_map(cc.at("N"), ch.get("N"), curve_names, lambda c, x: c.poly(x))
        try:
            chambers.append(Chamber1D((a, b), p3, vol, Q, N))
        except InvalidScenario as exc:
            cc.fail(str(exc))
    for i in range(1, len(chambers)):
        if chambers[i].range[0] != chambers[i - 1].range[1]:
            ctx.at("chambers").at(i).fail("ranges must abut the previous chamber (no gaps or overlaps)")

    refinements = []
    for i, r in enumerate(ctx.at("refinements").seq(data.get("refinements", []))):
        rc = ctx.at("refinements").at(i)
        r = rc.obj(r, "curve", "A")
        if lat is None:
            rc.fail("refinement given without a surface")
        C = str(r["curve"])
        if C not in curve_names:
            rc.at("curve").fail(f"unknown curve {C!r}")
        A = rc.at("A").rational(r["A"])
        if A <= 0:
            rc.at("A").fail("must be positive")
        sigma = _name_map(rc.at("sigma"), r.get("sigma"), curve_names, lambda c, x: c.rational(x))
        points = []
        seen = set()
        for j, p in enumerate(rc.at("points").seq(r.get("points", []))):
            pc = rc.at("points").at(j)
            p = pc.obj(p, "name")
            if p["name"] in seen:
                pc.fail(f"duplicate point name {p['name']!r}")
            seen.add(p["name"])
            mults = _name_map(pc.at("mults"), p.get("mults"), curve_names, lambda c, x: c.rational(x))
            if C in mults:
                pc.at("mults").fail("multiplicity against the refinement curve itself")
            if any(m < 0 for m in mults.values()):
                pc.at("mults").fail("multiplicities must be nonnegative")
            pa = pc.at("A").rational(p.get("A", "1"))
            if pa <= 0:
                pc.at("A").fail("must be positive")
            off = pc.at("offset").poly(p.get("offset", "0"))
            points.append(PointSpec(str(p["name"]), mults, pa, off))
        refinements.append(Refinement(C, A, sigma, tuple(points)))
        if any(not ch.has_restriction for ch in chambers):
            rc.fail("every chamber needs restriction data (Q, N) for a refinement")

    sc = Scenario(
        name=str(data["name"]),
        title=str(data.get("title", "")),
        diagnostic=bool(data.get("diagnostic", False)),
        notes=tuple(str(x) for x in data.get("notes", [])),
        model=model,
        divisor=divisor,
        A=A_Y,
        chambers=tuple(chambers),
        lattice=lat,
        refinements=tuple(refinements),
        tasks=tuple(str(t) for t in ctx.at("tasks").seq(data.get("tasks", []))),
        expected={k: ctx.at("expected").at(k).rational(v) for k, v in ctx.obj(data.get("expected", {})).items()},
        reported={k: ctx.at("reported").at(k).rational(v) for k, v in ctx.obj(data.get("reported", {})).items()},
        anchors={str(k): str(v) for k, v in ctx.obj(data.get("anchors", {})).items()},
    )
    known = set(sc.task_keys())
    for section in ("expected", "reported"):
        for k in getattr(sc, section):
            if k not in known:
                ctx.at(section).at(k).fail("unknown task key")
    if sc.chambers:
        try:
            vol_family(model, sc.chambers)
        except DeltaKitError as exc:
            ctx.at("chambers").fail(str(exc))
    return sc


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def bundled_path(name: str):
    return resources.files("deltakit") / "data" / f"{name}.json"


def bundled(name: str | None = None):
    """The bundled corpus: one scenario by name, or the list of names."""
    if name is None:
        return sorted(
            p.name[:-5] for p in (resources.files("deltakit") / "data").iterdir() if p.name.endswith(".json")
        )
    return parse_scenario(bundled_path(name).read_text(encoding="utf-8"))


def _fr(x) -> str:
    return format_rational(x)


def scenario_to_json(sc: Scenario) -> dict:
    out: dict[str, Any] = {"name": sc.name}
    if sc.title:
        out["title"] = sc.title
    if sc.diagnostic:
        out["diagnostic"] = True
    if sc.notes:
        out["notes"] = list(sc.notes)
    if sc.model is not None:
        out["threefold"] = sc.model.to_json()
    if sc.A is not None or sc.divisor != "Y":
        out["divisor"] = {"name": sc.divisor}
        if sc.A is not None:
            out["divisor"]["A"] = _fr(sc.A)
    if sc.lattice is not None:
        out["surface"] = sc.lattice.to_json()
    chambers = []
    for ch in sc.chambers:
        c: dict[str, Any] = {"range": [_fr(ch.range[0]), _fr(ch.range[1])]}
        if ch.p3_class is not None:
            c["class"] = [str(p) for p in ch.p3_class]
        if ch.vol_poly is not None:
            c["vol"] = str(ch.vol_poly)
        if ch.Q is not None:
            c["Q"] = {n: str(p) for n, p in zip(sc.lattice.names, ch.Q) if not p.is_zero()}
            c["N"] = {n: str(p) for n, p in ch.N.items()}
        chambers.append(c)
    out["chambers"] = chambers
    if sc.refinements:
        out["refinements"] = [
            {
                "curve": r.curve,
                "A": _fr(r.A),
                "sigma": {k: _fr(v) for k, v in r.sigma.items()},
                "points": [
                    {
                        "name": p.name,
                        "mults": {k: _fr(v) for k, v in p.mults.items()},
                        "A": _fr(p.A),
                        "offset": str(p.offset),
                    }
                    for p in r.points
                ],
            }
            for r in sc.refinements
        ]
    if sc.tasks:
        out["tasks"] = list(sc.tasks)
    for section in ("expected", "reported"):
        vals = getattr(sc, section)
        if vals:
            out[section] = {k: _fr(v) for k, v in vals.items()}
    if sc.anchors:
        out["anchors"] = dict(sc.anchors)
    return out


def serialize_scenario(sc: Scenario) -> str:
    return json.dumps(scenario_to_json(sc), indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# scaling

def scale_scenario(sc: Scenario, k) -> Scenario:
    """The same scenario for the polarization kL.  Every S, F, tau and t scales by k."""
    k = Fraction(k)
    u, v = Poly.u(), Poly.v()

    def lin(p: Poly) -> Poly:
        return p.subs(u=u / k) * k

    chambers = []
    for ch in sc.chambers:
        chambers.append(
            Chamber1D(
                (ch.range[0] * k, ch.range[1] * k),
                None if ch.p3_class is None else tuple(lin(p) for p in ch.p3_class),
                None if ch.vol_poly is None else ch.vol_poly.subs(u=u / k) * k**3,
                None if ch.Q is None else tuple(lin(p) for p in ch.Q),
                {n: lin(p) for n, p in ch.N.items()},
            )
        )
    refinements = tuple(
        replace(
            r,
            points=tuple(replace(p, offset=p.offset.subs(u=u / k, v=v / k) * k) for p in r.points),
        )
        for r in sc.refinements
    )
    return replace(
        sc,
        name=f"{sc.name}x{format_rational(k)}",
        chambers=tuple(chambers),
        refinements=refinements,
        expected={},
        reported={},
    )


# ---------------------------------------------------------------------------
# oracle sampling

def _rand_between(rng: random.Random, a: Fraction, b: Fraction) -> Fraction:
    q = rng.randint(7, 997)
    return a + (b - a) * Fraction(rng.randint(1, q - 1), q)


def oracle_samples(lat: CurveLattice, strip: StripSweep, n: int = 1000, seed: int = 0, exhaustive: bool = True) -> list[str]:
    """Compare cell formulas with pointwise decompositions at n random interior points.

    Points are redrawn until n of them lie strictly inside the region.
    Returns a list of discrepancy descriptions (empty when everything agrees).
    """
    rng = random.Random(seed)
    res = strip.result
    a, b = res.interval
    c = lat.index(res.curve)
    bad: list[str] = []
    if not res.cells:
        return bad
    drawn = tries = 0
    while drawn < n:
        tries += 1
        if tries > 50 * n:
            bad.append(f"only {drawn} of {n} samples landed inside the region")
            break
        u = _rand_between(rng, a, b)
        t = res.t(u)
        if t <= 0:
            continue
        drawn += 1
        vv = _rand_between(rng, Fraction(0), t)
        cells = res.locate(u, vv)
        if len(cells) != 1:
            near = [cl for cl in res.cells if cl.contains(u, vv, strict=False)]
            if not near:
                bad.append(f"({u}, {vv}) is in no cell")
                continue
            cells = near
        X = lat.divisor([p(u=u) - (vv if i == c else 0) for i, p in enumerate(strip.Q)])
        try:
            z = lat.zariski_decompose(X)
        except DeltaKitError as exc:
            bad.append(f"({u}, {vv}): pointwise decomposition failed: {exc}")
            continue
        for cell in cells:
            n_vec = tuple(cell.n_at(name)(u, vv) for name in lat.names)
            if n_vec != z.N.coeffs:
                bad.append(f"({u}, {vv}): cell N {n_vec} != pointwise {z.N.coeffs}")
        if exhaustive:
            try:
                zo = lat.zariski_oracle(X)
            except DeltaKitError as exc:
                bad.append(f"({u}, {vv}): exhaustive oracle failed: {exc}")
                continue
            if zo.N != z.N:
                bad.append(f"({u}, {vv}): exhaustive N {zo.N.coeffs} != iterative {z.N.coeffs}")
    return bad


# ---------------------------------------------------------------------------
# reports

@dataclass
class Report:
    scenario: str
    diagnostic: bool = False
    results: dict[str, Fraction] = field(default_factory=dict)
    levels: list[DeltaLevel] = field(default_factory=list)
    argmin: str | None = None
    tables: dict[str, list[dict]] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    diffs: list[tuple[str, Fraction, Fraction | None]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    errors: dict[str, str] = field(default_factory=dict)
    error_kinds: dict[str, str] = field(default_factory=dict)
    anchors: dict[str, str] = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def failed_checks(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def exit_code(self, check: bool = False) -> int:
        kinds = set(self.error_kinds.values())
        if kinds & {"InvalidScenario", "NotNefInput", "NotPseudoeffective", "DegenerateFamily", "DiscontinuousVolume"}:
            return 3
        if kinds or (check and self.failed_checks):
            return 4
        if check and self.diffs:
            return 2
        return 0

    def to_json(self, timing: bool = False) -> dict:
        out: dict[str, Any] = {
            "scenario": self.scenario,
            "diagnostic": self.diagnostic,
            "results": {k: _fr(v) for k, v in self.results.items()},
            "levels": [{"label": l.label, "A": _fr(l.A), "S": _fr(l.s_value), "A/S": _fr(l.ratio)} for l in self.levels],
            "argmin": self.argmin,
            "tables": self.tables,
            "checks": [
                {"name": c.name, "passed": c.passed, "lhs": c.lhs, "rhs": c.rhs, "detail": c.detail}
                for c in self.checks
            ],
            "diffs": [
                {"task": k, "expected": _fr(e), "computed": None if g is None else _fr(g)} for k, e, g in self.diffs
            ],
            "notes": self.notes,
            "errors": self.errors,
        }
        if self.anchors:
            out["anchors"] = self.anchors
        if timing:
            out["elapsed_seconds"] = round(self.elapsed, 3)
        return out

    def to_markdown(self) -> str:
        lines = [f"# {self.scenario}" + (" (diagnostic)" if self.diagnostic else ""), ""]
        if self.results:
            lines += ["| task | value |", "|---|---|"]
            for k, v in self.results.items():
                label = f"{k} ({self.anchors[k]})" if k in self.anchors else k
                lines.append(f"| {_md(label)} | {_fr(v)} |")
            lines.append("")
        if self.levels:
            lines += ["## delta chain", ""]
            for l in self.levels:
                mark = " <- min" if l.label == self.argmin else ""
                lines.append(f"- {l.label}: A = {_fr(l.A)}, S = {_fr(l.s_value)}, A/S = {_fr(l.ratio)}{mark}")
            lines.append("")
        for curve, rows in self.tables.items():
            lines += [f"## chambers for {curve}", ""]
            lines += ["| u | v | support | N | P^2 | P.C |", "|---|---|---|---|---|---|"]
            for r in rows:
                n = ", ".join(f"{k}: {x}" for k, x in r["N"].items()) or "0"
                lines.append(
                    f"| [{r['u'][0]}, {r['u'][1]}] | [{r['v'][0]}, {r['v'][1]}] | "
                    f"{{{_md(', '.join(r['support']))}}} | {_md(n)} | {r['P2']} | {r['PC']} |"
                )
            lines.append("")
        if self.checks:
            lines += ["## checks", ""]
            for c in self.checks:
                extra = f" ({c.lhs} vs {c.rhs})" if c.lhs or c.rhs else ""
                lines.append(f"- [{'pass' if c.passed else 'FAIL'}] {c.name}{extra}")
            lines.append("")
        for k, e, g in self.diffs:
            lines.append(f"- MISMATCH {k}: expected {_fr(e)}, computed {'-' if g is None else _fr(g)}")
        for n in self.notes:
            lines.append(f"- note: {n}")
        for k, e in self.errors.items():
            lines.append(f"- ERROR {k}: {e}")
        return "\n".join(lines).rstrip() + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scenario", "curve", "u_lo", "u_hi", "v_lo", "v_hi", "support", "N", "P2", "PC"])
        for curve, rows in self.tables.items():
            for r in rows:
                w.writerow(
                    [
                        self.scenario,
                        curve,
                        r["u"][0],
                        r["u"][1],
                        r["v"][0],
                        r["v"][1],
                        " ".join(r["support"]),
                        "; ".join(f"{k}={x}" for k, x in r["N"].items()),
                        r["P2"],
                        r["PC"],
                    ]
                )
        return buf.getvalue()


# ---------------------------------------------------------------------------
# runner

def _md(text: str) -> str:
    return text.replace("|", "\\|")


def _wanted(key: str, tasks: Sequence[str] | None) -> bool:
    if not tasks:
        return True
    kind = key.split(":", 1)[0]
    for t in tasks:
        t = "delta" if t == "delta_chain" else t
        if t == key or t == kind or key.startswith(t + "/"):
            return True
    return False


def _record_error(report: Report, key: str, exc: Exception):
    report.errors[key] = str(exc)
    report.error_kinds[key] = type(exc).__name__


def run(
    sc: Scenario,
    tasks: Sequence[str] | None = None,
    *,
    check: bool = False,
    oracle: bool = False,
    samples: int = 1000,
    seed: int = 0,
) -> Report:
    t0 = time.perf_counter()
    tasks = list(tasks) if tasks else list(sc.tasks)
    report = Report(sc.name, sc.diagnostic, anchors=dict(sc.anchors))
    lat = sc.lattice
    delta_only = bool(tasks) and all(_wanted("delta", [t]) for t in tasks)
    want = lambda key: delta_only or _wanted(key, tasks)

    vol = None
    try:
        vol = vol_family(sc.model, sc.chambers)
    except DeltaKitError as exc:
        _record_error(report, "vol", exc)
    s_x = None
    if vol is not None and want("s_divisor"):
        s_x = s_divisor(vol)
        report.results["s_divisor"] = s_x
        if sc.A is not None:
            report.levels.append(DeltaLevel(sc.divisor, sc.A, s_x))

    first_checks = True
    for ref in sc.refinements:
        C = ref.curve
        keys = [f"s_curve:{C}", f"base:{C}"] + [
            f"{kind}:{C}/{p.name}" for p in ref.points for kind in ("f_point", "s_point")
        ]
        if not any(want(k) for k in keys) and not (check or oracle):
            continue
        try:
            strips = surface_sweeps(lat, sc.chambers, C)
        except Exception as exc:
            _record_error(report, f"sweep:{C}", exc)
            continue
        report.tables[C] = [row for s in strips for row in s.result.table()]
        try:
            s_c = s_curve(lat, strips, vol)
            base = base_term(lat, strips, vol)
            if want(f"s_curve:{C}"):
                report.results[f"s_curve:{C}"] = s_c
                report.levels.append(DeltaLevel(C, ref.A, s_c))
            if want(f"base:{C}"):
                report.results[f"base:{C}"] = base
            point_vals = []
            for p in ref.points:
                f = f_point(lat, strips, p, ref.sigma, vol)
                sw = base + f
                point_vals.append((p, sw))
                if want(f"f_point:{C}/{p.name}"):
                    report.results[f"f_point:{C}/{p.name}"] = f
                if want(f"s_point:{C}/{p.name}"):
                    report.results[f"s_point:{C}/{p.name}"] = sw
                    report.levels.append(DeltaLevel(f"{C}/{p.name}", p.A, sw))
        except Exception as exc:
            _record_error(report, f"functionals:{C}", exc)
            continue
        if check:
            try:
                cs = cross_checks(
                    lat,
                    vol,
                    strips,
                    s_x=s_x if first_checks else None,
                    s_c=s_c,
                    points=point_vals,
                    sigma=ref.sigma,
                )
                report.checks += [replace(c, name=f"{C}: {c.name}") for c in cs]
                bar = refinement_barycenter(lat, strips, vol)
                report.checks.append(
                    Check(f"{C}: barycenter along {C} equals S(V;{C})", bar == s_c, _fr(bar), _fr(s_c))
                )
                if first_checks:
                    sb = slice_barycenter(lat, sc.chambers)
                    sx = s_divisor(vol)
                    report.checks.append(Check("slice barycenter equals S_X", sb == sx, _fr(sb), _fr(sx)))
                first_checks = False
            except Exception as exc:
                _record_error(report, f"checks:{C}", exc)
        if oracle:
            for i, s in enumerate(strips):
                try:
                    bad = oracle_samples(lat, s, samples, seed + i)
                except Exception as exc:
                    _record_error(report, f"oracle:{C}", exc)
                    continue
                report.checks.append(
                    Check(
                        f"{C}: oracle on [{_fr(s.chamber.range[0])}, {_fr(s.chamber.range[1])}]",
                        not bad,
                        detail="; ".join(bad[:3]),
                    )
                )

    if check and not sc.refinements and vol is not None:
        report.checks += cross_checks(None, vol, (), s_x=s_x)

    if report.levels and want("delta"):
        report.results["delta"] = delta_chain(report.levels)
        report.argmin = report.levels[argmin_level(report.levels)].label

    filtered = bool(tasks) and not delta_only
    for k, e in sc.expected.items():
        got = report.results.get(k)
        if filtered and (got is None or k == "delta"):
            continue
        if got != e:
            report.diffs.append((k, e, got))
    for k, e in sc.reported.items():
        got = report.results.get(k)
        if got is not None and got != e:
            report.notes.append(f"{k}: reported value {_fr(e)}, computed {_fr(got)}")
    report.elapsed = time.perf_counter() - t0
    return report
