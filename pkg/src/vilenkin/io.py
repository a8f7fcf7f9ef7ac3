"""File formats: experiment specs, sparse spectra, sample tables, plans, reports.

Big integers are always written as decimal strings.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np

from .construction import (
    ConstructionResult,
    CoverSchedule,
    DivergenceReport,
    ExponentPlan,
    NullSetSpec,
    PointRule,
)
from .core import RadixSequence
from .spectral import SampledFunction, SparseSpectrum

REPORT_COLUMNS = ["stage", "point", "n_lo", "n_hi", "abs_I", "abs_II", "abs_III", "bound_II", "bound_III", "gap"]
SPEC_FIELDS = {"radix", "points", "stages", "p"}


class SpecError(ValueError):
    """Malformed experiment spec or input file."""


@dataclass(frozen=True)
class ExperimentSpec:
    radix: RadixSequence
    points: tuple[PointRule, ...]
    stages: int
    p: float = 1.0

    def null_set(self) -> NullSetSpec:
        return NullSetSpec(self.radix, self.points, self.stages)

    def to_json(self) -> dict:
        return {
            "radix": self.radix.to_json(),
            "points": [p.to_json() for p in self.points],
            "stages": self.stages,
            "p": self.p,
        }


def parse_spec(obj: Mapping) -> ExperimentSpec:
    if not isinstance(obj, Mapping):
        raise SpecError("experiment spec must be a JSON object")
    unknown = set(obj) - SPEC_FIELDS
    if unknown:
        raise SpecError(f"unknown spec fields: {sorted(unknown)}")
    missing = {"radix", "points", "stages"} - set(obj)
    if missing:
        raise SpecError(f"missing spec fields: {sorted(missing)}")
    try:
        radix = RadixSequence.from_json(obj["radix"])
        points = tuple(PointRule.from_json(p) for p in obj["points"])
        stages = obj["stages"]
        if not isinstance(stages, int) or isinstance(stages, bool):
            raise SpecError("stages must be an integer")
        p = float(obj.get("p", 1.0))
        if p < 1:
            raise SpecError("p must be >= 1")
        spec = ExperimentSpec(radix, points, stages, p)
        spec.null_set()  # validates digits, distinctness and J
    except SpecError:
        raise
    except (TypeError, KeyError, ValueError) as exc:
        raise SpecError(str(exc)) from exc
    return spec


def load_spec(path: str | Path) -> ExperimentSpec:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read spec {path}: {exc}") from exc
    return parse_spec(obj)


def spectrum_to_json(spectrum: SparseSpectrum) -> list[dict]:
    return [{"index": str(k.value), "re": a.real, "im": a.imag} for k, a in spectrum.items()]


def spectrum_from_json(obj: Sequence[Mapping], radix: RadixSequence) -> SparseSpectrum:
    try:
        return SparseSpectrum(radix, ((int(e["index"]), complex(e["re"], e["im"])) for e in obj))
    except (TypeError, KeyError, ValueError) as exc:
        raise SpecError(f"malformed spectrum: {exc}") from exc


def write_samples_csv(f: SampledFunction, out: TextIO) -> None:
    write_complex_csv(f.values, out, "cell_index")


def write_complex_csv(values: Iterable[complex], out: TextIO, key: str = "index") -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow([key, "re", "im"])
    for t, v in enumerate(values):
        v = complex(v)
        w.writerow([t, repr(v.real), repr(v.imag)])


def read_samples_csv(src: TextIO, radix: RadixSequence) -> SampledFunction:
    """Parse ``cell_index,re,im`` rows; cells must be exactly 0..M_N-1."""
    reader = csv.reader(src)
    try:
        header = next(reader)
    except StopIteration:
        raise SpecError("empty samples CSV") from None
    if [h.strip() for h in header] != ["cell_index", "re", "im"]:
        raise SpecError(f"expected header cell_index,re,im, got {header}")
    rows = {}
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        try:
            t, re, im = int(row[0]), float(row[1]), float(row[2])
        except (ValueError, IndexError) as exc:
            raise SpecError(f"line {line}: {exc}") from exc
        if t in rows:
            raise SpecError(f"line {line}: duplicate cell {t}")
        rows[t] = complex(re, im)
    if sorted(rows) != list(range(len(rows))):
        raise SpecError("cell indices must be exactly 0..n-1")
    try:
        level = radix.level_of(len(rows))
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    return SampledFunction(radix, level, np.array([rows[t] for t in range(len(rows))]))


def write_report_csv(reports: Sequence[DivergenceReport], out: TextIO) -> None:
    w = csv.DictWriter(out, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.row())


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def write_artifacts(result: ConstructionResult, out_dir: str | Path) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "plan": out_dir / "plan.json",
        "spectrum": out_dir / "spectrum.json",
        "report": out_dir / "report.csv",
    }
    paths["plan"].write_text(dumps(result.plan_json()))
    paths["spectrum"].write_text(dumps(spectrum_to_json(result.spectrum)))
    buf = io.StringIO()
    write_report_csv(result.reports, buf)
    paths["report"].write_text(buf.getvalue())
    return paths


def read_plan(obj: Mapping, radix: RadixSequence) -> tuple[CoverSchedule, ExponentPlan]:
    try:
        if RadixSequence.from_json(obj["radix"]) != radix:
            raise SpecError("plan radix does not match the experiment radix")
        cover = CoverSchedule.from_json(obj, radix)
        plan = ExponentPlan(radix, tuple(int(a) for a in obj["alphas"]), tuple(int(b) for b in obj["betas"]))
    except SpecError:
        raise
    except (TypeError, KeyError, ValueError) as exc:
        raise SpecError(f"malformed plan: {exc}") from exc
    return cover, plan
