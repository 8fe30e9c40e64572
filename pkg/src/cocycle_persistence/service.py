"""Request handlers and the FastAPI application wrapping them.

Each endpoint takes an input document plus query parameters, runs one
pipeline, and returns an output document.  The CLI calls the same handlers
in process, so service and command line cannot drift apart.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import oracle
from .cells import band_cell_complex, filtered_complex_view, level_cell_complex, prefix_view, sublevel_subcomplex_filtration
from .cochains import check_almost_integral, check_generic, validate_cocycle, vertex_angles
from .documents import (
    BarRecord,
    CompiledInput,
    Diagnostics,
    InputDocument,
    OutputDocument,
    TableRecord,
    compile_document,
    fraction_str,
    parse_fraction,
)
from .errors import OracleMismatch, SchemaError, TopologyError
from .persistence import (
    INF,
    CirclePersistenceResult,
    LevelPersistence,
    StandardPersistence,
    circle_level_persistence,
    cocycle_persistence,
    level_persistence,
    standard_persistence,
)


def _idx(value) -> object:
    return "inf" if value is INF else int(value)


def _nonzero(d: dict) -> list:
    return [(key, n) for key, n in sorted(d.items(), key=lambda kv: str(kv[0])) if n]


def _diagnose(ci: CompiledInput) -> Diagnostics:
    diag = Diagnostics()
    if ci.cocycle is not None:
        report = validate_cocycle(ci.cocycle, ci.complex)
        diag.cocycle_ok = report.ok
        diag.cocycle_violations = [
            [ci.names[x], ci.names[y], ci.names[z]] for x, y, z in report.violations
        ]
        ok, witness = check_generic(ci.cocycle, ci.complex)
        diag.generic = ok
        if witness is not None:
            diag.generic_witness = [ci.names[v] for v in witness]
        if ci.alpha is not None:
            diag.almost_integral = check_almost_integral(ci.cocycle, ci.complex, ci.alpha)
            half = ci.alpha / 2
            diag.span_ok = all(
                abs(ci.cocycle.value(x, y)) < half for x, y in ci.complex.edges()
            )
    elif ci.cochain0 is not None:
        diag.generic = ci.cochain0.is_injective()
        if not diag.generic:
            diag.notes.append("vertex values are not pairwise distinct")
    return diag


def run_validate(doc: InputDocument) -> OutputDocument:
    ci = compile_document(doc)
    diag = _diagnose(ci)
    failed = (
        diag.cocycle_ok is False
        or diag.generic is False
        or diag.almost_integral is False
        or diag.span_ok is False
    )
    return OutputDocument(
        command="validate",
        status="invalid" if failed else "ok",
        parameters={"vertices": str(ci.complex.vertex_count), "simplices": str(len(ci.complex.simplices))},
        diagnostics=diag,
    )


def _sublevel_tables(sp: StandardPersistence) -> tuple[list[TableRecord], list[BarRecord]]:
    tables: list[TableRecord] = []
    bars: list[BarRecord] = []
    for (r, i, j), n in _nonzero(sp.mu):
        tables.append(TableRecord(kind="mu", r=r, indices=[int(i), _idx(j)], value=n))
        birth = fraction_str(sp.critical_values[i])
        death = "inf" if j is INF else fraction_str(sp.critical_values[int(j)])
        for _ in range(n):
            bars.append(BarRecord(r=r, birth_value=birth, death_value=death, direction="up"))
    for (r, i, j), n in _nonzero(sp.beta):
        tables.append(TableRecord(kind="beta", r=r, indices=[i, j], value=n))
    for (r, i), n in _nonzero(sp.kappa):
        tables.append(TableRecord(kind="kappa", r=r, indices=[i], value=n))
    for (r, i, j), n in _nonzero(sp.kappa_pairs):
        tables.append(TableRecord(kind="kappa", r=r, indices=[i, j], value=n))
    return tables, bars


def _check_sublevel(ci: CompiledInput, sp: StandardPersistence) -> None:
    stages = sublevel_subcomplex_filtration(ci.complex, ci.cochain0)
    view = filtered_complex_view(ci.complex, stages)
    degrees = range(ci.complex.dimension + 1)
    for r in degrees:
        if sp.betti.get(r, 0) != oracle.homology_rank(view, r):
            raise OracleMismatch(f"betti mismatch in degree {r}")
    ordered_stages = view.stage_indices()
    k = sp.n_stages
    for i in range(k):
        small = prefix_view(view, sum(1 for s in ordered_stages if s <= i))
        for j in range(i, k):
            big = prefix_view(view, sum(1 for s in ordered_stages if s <= j))
            for r in degrees:
                want = oracle.persistent_betti_bruteforce(small, big, r)
                if sp.beta.get((r, i, j), 0) != want:
                    raise OracleMismatch(f"beta({r},{i},{j}) mismatch")


def run_sublevel(doc: InputDocument, check: bool = False) -> OutputDocument:
    ci = compile_document(doc)
    if ci.cochain0 is None:
        raise SchemaError("sublevel needs a cochain0")
    sp = standard_persistence(ci.complex, ci.cochain0)
    tables, bars = _sublevel_tables(sp)
    for r, n in sorted(sp.betti.items()):
        tables.append(TableRecord(kind="beta", r=r, indices=["total"], value=n))
    if check:
        _check_sublevel(ci, sp)
    return OutputDocument(
        command="sublevel",
        status="ok",
        parameters={"stages": str(sp.n_stages)},
        grid=[fraction_str(v) for v in sp.critical_values],
        tables=tables,
        bars=bars,
        diagnostics=Diagnostics(generic=True, oracle_checked=check),
    )


def _row_tables(lp: LevelPersistence, i: int, with_grid_index: bool) -> tuple[list[TableRecord], list[BarRecord]]:
    grid = lp.grid
    row = lp.rows[i]
    prefix: list = [i] if with_grid_index else []
    t = grid.s(i)
    tables: list[TableRecord] = []
    bars: list[BarRecord] = []

    def tau_up(k: int) -> Fraction:
        return grid.s(i + k) - t

    def tau_down(j: int) -> Fraction:
        return t - grid.s(i - j)

    for r, n in _nonzero(row.l):
        tables.append(TableRecord(kind="l", r=r, indices=prefix, value=n))
    for (r, k), n in _nonzero(row.nu_up):
        tables.append(TableRecord(kind="nu+", r=r, indices=prefix + [k], value=n, tau=[fraction_str(tau_up(k))]))
        for _ in range(n):
            bars.append(BarRecord(r=r, birth_value=fraction_str(t), death_value=fraction_str(t + tau_up(k)), direction="up"))
    for r, n in _nonzero(row.nu_up_inf):
        tables.append(TableRecord(kind="nu+", r=r, indices=prefix + ["inf"], value=n))
        for _ in range(n):
            bars.append(BarRecord(r=r, birth_value=fraction_str(t), death_value="inf", direction="up"))
    for (r, j), n in _nonzero(row.nu_down):
        tables.append(TableRecord(kind="nu-", r=r, indices=prefix + [j], value=n, tau=[fraction_str(tau_down(j))]))
        for _ in range(n):
            bars.append(BarRecord(r=r, birth_value=fraction_str(t), death_value=fraction_str(t - tau_down(j)), direction="down"))
    for r, n in _nonzero(row.nu_down_inf):
        tables.append(TableRecord(kind="nu-", r=r, indices=prefix + ["inf"], value=n))
        for _ in range(n):
            bars.append(BarRecord(r=r, birth_value=fraction_str(t), death_value="inf", direction="down"))
    max_up = grid.size - i
    max_down = i - 1
    for r in row.degrees():
        for j in range(1, max_up + 1):
            n = row.l_plus(r, j)
            if n:
                tables.append(TableRecord(kind="l+", r=r, indices=prefix + [j], value=n, tau=[fraction_str(tau_up(j))]))
        for j in range(1, max_down + 1):
            n = row.l_minus(r, j)
            if n:
                tables.append(TableRecord(kind="l-", r=r, indices=prefix + [j], value=n, tau=[fraction_str(tau_down(j))]))
    for (r, j, k), n in _nonzero(row.omega):
        tables.append(
            TableRecord(
                kind="omega", r=r, indices=prefix + [j, k], value=n,
                tau=[fraction_str(tau_down(j)), fraction_str(tau_up(k))],
            )
        )
        for _ in range(n):
            bars.append(
                BarRecord(r=r, birth_value=fraction_str(t - tau_down(j)), death_value=fraction_str(t + tau_up(k)), direction="pair")
            )
        for jj in range(j, max_down + 1):
            for kk in range(k, max_up + 1):
                e = row.e(r, jj, kk)
                if e:
                    tables.append(
                        TableRecord(kind="e", r=r, indices=prefix + [jj, kk], value=e,
                                    tau=[fraction_str(tau_down(jj)), fraction_str(tau_up(kk))])
                    )
    # deduplicate the e records produced from overlapping omega corners
    seen = {}
    deduped = []
    for rec in tables:
        key = (rec.kind, rec.r, tuple(rec.indices))
        if key in seen:
            continue
        seen[key] = rec
        deduped.append(rec)
    return deduped, bars


def _check_level_row(ci_complex, values, lp: LevelPersistence, i: int) -> None:
    grid = lp.grid
    row = lp.rows[i]
    t = grid.s(i)
    level = level_cell_complex(ci_complex, values, t)
    for r in range(max(row.degrees(), default=0) + 2):
        if row.l.get(r, 0) != oracle.homology_rank(level, r):
            raise OracleMismatch(f"l_{r}({i}) disagrees with elimination")
    n_level = len(level.cells)
    degrees = sorted(set(row.degrees()) | {0})

    def up_band(k: int):
        band = band_cell_complex(ci_complex, values, t, grid.s(i + k))
        return band, list(range(n_level))

    def down_band(j: int):
        low = grid.s(i - j)
        band = band_cell_complex(ci_complex, values, low, t)
        offset = len(level_cell_complex(ci_complex, values, low).cells)
        return band, [offset + p for p in range(n_level)]

    max_up = max([k for (_, k) in row.nu_up] + [0])
    max_down = max([j for (_, j) in row.nu_down] + [0])
    for r in degrees:
        if max_up:
            band, embed = up_band(max_up)
            if row.l_plus(r, max_up) != oracle.inclusion_kernel_dim(level, band, r, embed):
                raise OracleMismatch(f"l+_{r}({i};{max_up}) disagrees with elimination")
        if max_down:
            band, embed = down_band(max_down)
            if row.l_minus(r, max_down) != oracle.inclusion_kernel_dim(level, band, r, embed):
                raise OracleMismatch(f"l-_{r}({i};{max_down}) disagrees with elimination")
    for (r, j, k), n in row.omega.items():
        bdown, edown = down_band(j)
        bup, eup = up_band(k)
        want = oracle.simultaneous_kernel_dim(level, bdown, bup, r, edown, eup)
        if row.e(r, j, k) != want:
            raise OracleMismatch(f"e_{r}({i};{j},{k}) disagrees with elimination")


def run_level(doc: InputDocument, at: Optional[str] = None, check: bool = False) -> OutputDocument:
    ci = compile_document(doc)
    if ci.cochain0 is None:
        raise SchemaError("level needs a cochain0")
    pin = parse_fraction(at) if at is not None else None
    lp = level_persistence(ci.complex, ci.cochain0, at=pin)
    tables: list[TableRecord] = []
    bars: list[BarRecord] = []
    for i in sorted(lp.rows):
        t, b = _row_tables(lp, i, with_grid_index=True)
        tables.extend(t)
        bars.extend(b)
    if check:
        for i in sorted(lp.rows):
            _check_level_row(ci.complex, ci.cochain0, lp, i)
    params = {"rows": str(len(lp.rows))}
    if at is not None:
        params["at"] = fraction_str(parse_fraction(at))
    return OutputDocument(
        command="level",
        status="ok",
        parameters=params,
        grid=[fraction_str(v) for v in lp.grid.values],
        tables=tables,
        bars=bars,
        diagnostics=Diagnostics(generic=True, oracle_checked=check),
    )


def _circle_tables(res: CirclePersistenceResult) -> tuple[list[TableRecord], list[BarRecord]]:
    lp = res.levels
    i = res.grid_index
    row = lp.rows[i]
    theta = res.theta
    tables: list[TableRecord] = []
    bars: list[BarRecord] = []
    for r, n in _nonzero(row.l):
        tables.append(TableRecord(kind="l", r=r, indices=[], value=n))
    for (r, k), n in _nonzero(row.nu_up):
        tables.append(TableRecord(kind="nu+", r=r, indices=[k], value=n, tau=[fraction_str(res.tau_up(k))]))
        for _ in range(n):
            bars.append(BarRecord(r=r, birth_value=fraction_str(theta), death_value=fraction_str(theta + res.tau_up(k)), direction="up"))
    for r, n in _nonzero(row.nu_up_inf):
        tables.append(TableRecord(kind="nu+", r=r, indices=["inf"], value=n))
        for _ in range(n):
            bars.append(BarRecord(r=r, birth_value=fraction_str(theta), death_value="inf", direction="up"))
    for (r, j), n in _nonzero(row.nu_down):
        tables.append(TableRecord(kind="nu-", r=r, indices=[j], value=n, tau=[fraction_str(res.tau_down(j))]))
        for _ in range(n):
            bars.append(BarRecord(r=r, birth_value=fraction_str(theta), death_value=fraction_str(theta - res.tau_down(j)), direction="down"))
    for r, n in _nonzero(row.nu_down_inf):
        tables.append(TableRecord(kind="nu-", r=r, indices=["inf"], value=n))
        for _ in range(n):
            bars.append(BarRecord(r=r, birth_value=fraction_str(theta), death_value="inf", direction="down"))
    for r in row.degrees():
        for k in sorted({kk for (rr, kk) in row.nu_up if rr == r}):
            tables.append(TableRecord(kind="l+", r=r, indices=[k], value=row.l_plus(r, k), tau=[fraction_str(res.tau_up(k))]))
        for j in sorted({jj for (rr, jj) in row.nu_down if rr == r}):
            tables.append(TableRecord(kind="l-", r=r, indices=[j], value=row.l_minus(r, j), tau=[fraction_str(res.tau_down(j))]))
    for (r, j, k), n in _nonzero(row.omega):
        tables.append(TableRecord(kind="omega", r=r, indices=[j, k], value=n,
                                  tau=[fraction_str(res.tau_down(j)), fraction_str(res.tau_up(k))]))
        tables.append(TableRecord(kind="e", r=r, indices=[j, k], value=row.e(r, j, k),
                                  tau=[fraction_str(res.tau_down(j)), fraction_str(res.tau_up(k))]))
        for _ in range(n):
            bars.append(BarRecord(r=r, birth_value=fraction_str(theta - res.tau_down(j)), death_value=fraction_str(theta + res.tau_up(k)), direction="pair"))
    for r, n in _nonzero(row.omega_immortal):
        tables.append(TableRecord(kind="omega", r=r, indices=["inf", "inf"], value=n))
        for _ in range(n):
            bars.append(BarRecord(r=r, birth_value="inf", death_value="inf", direction="pair"))
    for (r, j), n in _nonzero(row.omega_down_only):
        tables.append(TableRecord(kind="omega", r=r, indices=[j, "inf"], value=n, tau=[fraction_str(res.tau_down(j))]))
    for (r, k), n in _nonzero(row.omega_up_only):
        tables.append(TableRecord(kind="omega", r=r, indices=["inf", k], value=n, tau=[fraction_str(res.tau_up(k))]))
    return tables, bars


def _check_circle(res: CirclePersistenceResult) -> None:
    _check_level_row(res.unrolled.complex, res.unrolled.values, res.levels, res.grid_index)


def _circle_output(command: str, ci: CompiledInput, res: CirclePersistenceResult, check: bool, extra: dict) -> OutputDocument:
    tables, bars = _circle_tables(res)
    diag = _diagnose(ci)
    diag.oracle_checked = check
    params = {
        "theta": fraction_str(res.theta),
        "alpha": fraction_str(res.alpha),
        "budget": str(res.budget),
        "windows": str(res.unrolled.n_windows),
    }
    params.update(extra)
    return OutputDocument(
        command=command,
        status="ok",
        parameters=params,
        tables=tables,
        bars=bars,
        diagnostics=diag,
    )


def run_circle(
    doc: InputDocument,
    theta: str,
    check: bool = False,
    max_copies: Optional[int] = None,
) -> OutputDocument:
    ci = compile_document(doc)
    th = parse_fraction(theta)
    if ci.angles is not None:
        res = circle_level_persistence(ci.complex, ci.angles, th, budget=max_copies)
    elif ci.cocycle is not None and ci.alpha is not None:
        res = cocycle_persistence(ci.complex, ci.almost_integral(), th, base=ci.base, budget=max_copies)
    else:
        raise SchemaError("circle needs angles, or a cocycle with alpha")
    if check:
        _check_circle(res)
    return _circle_output("circle", ci, res, check, {})


def run_cocycle(
    doc: InputDocument,
    theta: str,
    base: Optional[str] = None,
    check: bool = False,
    max_copies: Optional[int] = None,
) -> OutputDocument:
    ci = compile_document(doc)
    th = parse_fraction(theta)
    if ci.cocycle is None or ci.alpha is None:
        raise SchemaError("cocycle needs a cocycle and alpha")
    base_id = ci.vertex_id(base) if base is not None else ci.base
    res = cocycle_persistence(ci.complex, ci.almost_integral(), th, base=base_id, budget=max_copies)
    if check:
        _check_circle(res)
    angles = vertex_angles(ci.almost_integral(), ci.complex, base_id)
    extra = {"base": ci.names[base_id], "angles": ",".join(fraction_str(a) for a in angles.angles)}
    return _circle_output("cocycle", ci, res, check, extra)


class AnalyzeRequest(BaseModel):
    document: InputDocument
    theta: Optional[str] = None
    at: Optional[str] = None
    base: Optional[str] = None
    check: bool = False
    max_copies: Optional[int] = None


app = FastAPI(
    title="cocycle-persistence",
    description="Level persistence for vertex maps, circle-valued maps, and almost integral cocycles on finite simplicial complexes.",
)


def _wrap(fn):
    try:
        return fn()
    except OracleMismatch as exc:
        return JSONResponse(status_code=409, content={"error": {"code": exc.code, "message": str(exc)}})
    except TopologyError as exc:
        return JSONResponse(status_code=400, content={"error": {"code": exc.code, "message": str(exc)}})


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/validate", response_model=OutputDocument)
def validate_endpoint(req: AnalyzeRequest):
    return _wrap(lambda: run_validate(req.document))


@app.post("/sublevel", response_model=OutputDocument)
def sublevel_endpoint(req: AnalyzeRequest):
    return _wrap(lambda: run_sublevel(req.document, check=req.check))


@app.post("/level", response_model=OutputDocument)
def level_endpoint(req: AnalyzeRequest):
    return _wrap(lambda: run_level(req.document, at=req.at, check=req.check))


@app.post("/circle", response_model=OutputDocument)
def circle_endpoint(req: AnalyzeRequest):
    if req.theta is None:
        return JSONResponse(status_code=400, content={"error": {"code": "SchemaError", "message": "theta required"}})
    return _wrap(lambda: run_circle(req.document, req.theta, check=req.check, max_copies=req.max_copies))


@app.post("/cocycle", response_model=OutputDocument)
def cocycle_endpoint(req: AnalyzeRequest):
    if req.theta is None:
        return JSONResponse(status_code=400, content={"error": {"code": "SchemaError", "message": "theta required"}})
    return _wrap(lambda: run_cocycle(req.document, req.theta, base=req.base, check=req.check, max_copies=req.max_copies))
