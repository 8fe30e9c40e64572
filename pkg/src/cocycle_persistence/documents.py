"""Input and output documents: pydantic models, exact-rational parsing, JSON.

Rationals travel as "p/q" strings end to end; no floating point touches the
I/O path.  Output serialization is canonical (sorted records, fixed JSON
formatting) so identical inputs produce byte-identical outputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict

from .cochains import AlmostIntegralCocycle, CircleMap, Cochain0, Cochain1
from .complexes import SimplicialComplex, build_complex
from .errors import ParseError, SchemaError


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational: {text!r}") from exc


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class InputDocument(BaseModel):
    """A complex with optional vertex map, cocycle, angles, period, and base."""

    model_config = ConfigDict(extra="forbid")

    vertices: list[str]
    simplices: list[list[str]]
    cochain0: Optional[dict[str, str]] = None
    cocycle: Optional[dict[str, str]] = None
    alpha: Optional[str] = None
    angles: Optional[dict[str, str]] = None
    base: Optional[str] = None


@dataclass
class CompiledInput:
    """An input document resolved against the library types."""

    doc: InputDocument
    names: tuple[str, ...]
    complex: SimplicialComplex
    cochain0: Optional[Cochain0]
    cocycle: Optional[Cochain1]
    alpha: Optional[Fraction]
    angles: Optional[CircleMap]
    base: int

    def vertex_id(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise SchemaError(f"unknown vertex {name!r}") from None

    def almost_integral(self) -> AlmostIntegralCocycle:
        if self.cocycle is None or self.alpha is None:
            raise SchemaError("command needs a cocycle and alpha")
        return AlmostIntegralCocycle(self.cocycle, self.alpha)


def compile_document(doc: InputDocument) -> CompiledInput:
    names = tuple(doc.vertices)
    if len(set(names)) != len(names):
        raise SchemaError("vertex names are not unique")
    ids = {name: v for v, name in enumerate(names)}

    def resolve(name: str, where: str) -> int:
        if name not in ids:
            raise SchemaError(f"unknown vertex {name!r} in {where}")
        return ids[name]

    simplices = []
    for raw in doc.simplices:
        if not raw:
            raise SchemaError("empty simplex")
        simplices.append(tuple(resolve(n, f"simplex {raw}") for n in raw))
    sc = build_complex(len(names), simplices)

    cochain0 = None
    if doc.cochain0 is not None:
        values = {}
        for name, text in doc.cochain0.items():
            values[resolve(name, "cochain0")] = parse_fraction(text)
        cochain0 = Cochain0.from_mapping(values, sc.vertex_count)

    alpha = None
    if doc.alpha is not None:
        alpha = parse_fraction(doc.alpha)
        if alpha <= 0:
            raise SchemaError("alpha must be positive")

    cocycle = None
    if doc.cocycle is not None:
        edge_values = {}
        edges = {e for e in sc.edges()}
        for key, text in doc.cocycle.items():
            parts = [p.strip() for p in key.split(",")]
            if len(parts) != 2:
                raise SchemaError(f"edge key {key!r} is not 'x,y'")
            x, y = (resolve(p, f"edge {key!r}") for p in parts)
            if x == y or (min(x, y), max(x, y)) not in edges:
                raise SchemaError(f"edge {key!r} is not an edge of the complex")
            canon = (min(x, y), max(x, y))
            val = parse_fraction(text) if x < y else -parse_fraction(text)
            if canon in edge_values and edge_values[canon] != val:
                raise SchemaError(f"edge {key!r} given twice with different values")
            edge_values[canon] = val
        cocycle = Cochain1.from_mapping(edge_values)

    angles = None
    if doc.angles is not None:
        if alpha is None:
            raise SchemaError("angles need alpha")
        vals = {}
        for name, text in doc.angles.items():
            vals[resolve(name, "angles")] = parse_fraction(text) % alpha
        missing = set(range(sc.vertex_count)) - set(vals)
        if missing:
            raise SchemaError(f"angles missing for vertex {names[min(missing)]!r}")
        angles = CircleMap(tuple(vals[v] for v in range(sc.vertex_count)), alpha)

    base = 0
    if doc.base is not None:
        base = resolve(doc.base, "base")

    return CompiledInput(doc, names, sc, cochain0, cocycle, alpha, angles, base)


def load_document(path: Union[str, Path]) -> InputDocument:
    try:
        payload = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    try:
        return InputDocument.model_validate(payload)
    except Exception as exc:
        raise SchemaError(str(exc)) from exc


class TableRecord(BaseModel):
    kind: str
    r: int
    indices: list[Union[int, str]]
    value: int
    tau: Optional[list[str]] = None  # rational offsets matching the step indices


class BarRecord(BaseModel):
    r: int
    birth_value: str
    death_value: str  # a rational or "inf"
    direction: str  # "up" | "down" | "pair"


class Diagnostics(BaseModel):
    generic: Optional[bool] = None
    generic_witness: Optional[list[str]] = None
    cocycle_ok: Optional[bool] = None
    cocycle_violations: list[list[str]] = []
    almost_integral: Optional[bool] = None
    span_ok: Optional[bool] = None
    oracle_checked: bool = False
    notes: list[str] = []


class OutputDocument(BaseModel):
    command: str
    status: str  # "ok" | "invalid"
    parameters: dict[str, str]
    grid: list[str] = []
    tables: list[TableRecord] = []
    bars: list[BarRecord] = []
    diagnostics: Diagnostics = Diagnostics()


def _record_sort_key(rec: TableRecord):
    return (rec.kind, rec.r, [str(i) for i in rec.indices], rec.value)


def _bar_sort_key(bar: BarRecord):
    return (bar.direction, bar.r, bar.birth_value, bar.death_value)


def render_output(out: OutputDocument) -> str:
    out = out.model_copy(deep=True)
    out.tables = sorted(out.tables, key=_record_sort_key)
    out.bars = sorted(out.bars, key=_bar_sort_key)
    return json.dumps(out.model_dump(), indent=2, sort_keys=True) + "\n"
