"""A two-parameter family of subset distributions on three elements.

The family weights the empty set 4, each singleton b, each pair c, and the
full set 0, then normalizes:

    g(x, y, z) = (4 + b(x + y + z) + c(xy + xz + yz)) / (4 + 3b + 3c).

Exact analysis of the lattice condition on this family reduces to a single
inequality, b^2 >= 4c: singleton-singleton pairs are the only incomparable
pairs whose products are not automatically ordered.  `sweep` walks a (b, c)
grid and records, per cell, the exact lattice verdict next to a sampled
log-concavity verdict, which is the data behind the region tables.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .checkers import (
    Holds,
    NoViolationFound,
    SampleConfig,
    Violated,
    check_nlc,
    check_slc,
)
from .poly import RationalLike, SubsetPoly, as_fraction

CELL_CAP = 250_000


@dataclass(frozen=True)
class FamilyParams:
    """Nonnegative rational parameters (b, c)."""

    b: Fraction
    c: Fraction

    def __post_init__(self) -> None:
        if self.b < 0 or self.c < 0:
            raise ValueError(f"family parameters must be nonnegative, got ({self.b}, {self.c})")

    @staticmethod
    def of(b: RationalLike, c: RationalLike) -> FamilyParams:
        return FamilyParams(as_fraction(b), as_fraction(c))


def make_family(b: RationalLike, c: RationalLike) -> SubsetPoly:
    """The normalized family member at (b, c)."""
    params = FamilyParams.of(b, c)
    weights = {0: Fraction(4)}
    for k in range(3):
        weights[1 << k] = params.b
    for mask in (0b011, 0b101, 0b110):
        weights[mask] = params.c
    return SubsetPoly.from_weights(3, weights).normalize()


def nlc_region_exact(b: RationalLike, c: RationalLike) -> bool:
    """Closed-form lattice condition for the family: b^2 >= 4c, exactly."""
    params = FamilyParams.of(b, c)
    return params.b * params.b >= 4 * params.c


# ----- grid sweep -------------------------------------------------------------


@dataclass(frozen=True)
class SweepConfig:
    """Grid and sampling parameters for a (b, c) sweep.

    b and c run over {0, step, 2*step, ...} up to b_max and c_max.  The grid
    values are exact rationals; pass steps like '0.05' as strings so nothing
    is rounded before the exact lattice check.
    """

    b_max: Fraction = Fraction(4)
    c_max: Fraction = Fraction(4)
    step: Fraction = Fraction(1, 20)
    samples_per_cell: int = 2000
    seed: int = 0
    box: tuple[float, float] = (0.01, 100.0)
    tolerance: float = 1e-9

    @staticmethod
    def of(
        b_max: RationalLike = Fraction(4),
        c_max: RationalLike = Fraction(4),
        step: RationalLike = Fraction(1, 20),
        samples_per_cell: int = 2000,
        seed: int = 0,
        box: tuple[float, float] = (0.01, 100.0),
        tolerance: float = 1e-9,
    ) -> SweepConfig:
        return SweepConfig(
            b_max=as_fraction(b_max),
            c_max=as_fraction(c_max),
            step=as_fraction(step),
            samples_per_cell=samples_per_cell,
            seed=seed,
            box=box,
            tolerance=tolerance,
        )

    def validate(self) -> None:
        if self.step <= 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.b_max < 0 or self.c_max < 0:
            raise ValueError("parameter ranges must be nonnegative")
        if self.samples_per_cell < 0:
            raise ValueError("samples_per_cell must be nonnegative")
        if len(self.grid_b()) * len(self.grid_c()) > CELL_CAP:
            raise ValueError(f"sweep would exceed the {CELL_CAP} cell cap")

    def grid_b(self) -> tuple[Fraction, ...]:
        return _grid_values(self.b_max, self.step)

    def grid_c(self) -> tuple[Fraction, ...]:
        return _grid_values(self.c_max, self.step)


def _grid_values(upper: Fraction, step: Fraction) -> tuple[Fraction, ...]:
    count = int(upper / step)
    return tuple(step * k for k in range(count + 1))


@dataclass(frozen=True)
class SweepCell:
    b: Fraction
    c: Fraction
    nlc: bool
    slc_no_violation: bool
    certified: bool
    points_tested: int


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    cells: tuple[SweepCell, ...]

    def cell_at(self, b: RationalLike, c: RationalLike) -> SweepCell:
        b, c = as_fraction(b), as_fraction(c)
        for cell in self.cells:
            if cell.b == b and cell.c == c:
                return cell
        raise KeyError(f"no sweep cell at ({b}, {c})")

    def count_nlc(self) -> int:
        return sum(1 for cell in self.cells if cell.nlc)

    def count_slc(self) -> int:
        return sum(1 for cell in self.cells if cell.slc_no_violation)

    def containment_failures(self) -> list[SweepCell]:
        """Cells satisfying the lattice condition but with a sampled violation."""
        return [cell for cell in self.cells if cell.nlc and not cell.slc_no_violation]


def sweep(cfg: SweepConfig = SweepConfig()) -> SweepResult:
    """Exact lattice flag and sampled log-concavity flag for every grid cell.

    Each cell gets its own deterministic random stream derived from the
    sweep seed and the cell's grid indices, so results are reproducible and
    independent of iteration order.
    """
    cfg.validate()
    cells = []
    for bi, b in enumerate(cfg.grid_b()):
        for ci, c in enumerate(cfg.grid_c()):
            p = make_family(b, c)
            nlc = isinstance(check_nlc(p), Holds)
            sample_cfg = SampleConfig(
                points=cfg.samples_per_cell,
                box=cfg.box,
                seed=(cfg.seed, bi, ci),
                tolerance=cfg.tolerance,
            )
            report = check_slc(p, sample_cfg)
            violated = isinstance(report.aggregate, Violated)
            certified = isinstance(report.aggregate, Holds)
            points = _points_tested(report.subsets.values())
            cells.append(
                SweepCell(
                    b=b,
                    c=c,
                    nlc=nlc,
                    slc_no_violation=not violated,
                    certified=certified,
                    points_tested=points,
                )
            )
    return SweepResult(config=cfg, cells=tuple(cells))


def _points_tested(verdicts) -> int:
    return sum(v.stats.points_tested for v in verdicts if isinstance(v, NoViolationFound))


# ----- output files -------------------------------------------------------------


def emit_region_tables(result: SweepResult, out_dir: str) -> tuple[str, str, str]:
    """Write nlc_boundary.txt, slc_boundary.txt, and sweep_full.csv.

    Boundary files hold one 'b c' row per grid column: the largest c at that
    b for which the flag is true.  A b with no true cell is omitted, as the
    header says.  Byte-identical output for identical sweeps.
    """
    os.makedirs(out_dir, exist_ok=True)
    cfg = result.config
    header = [
        f"# grid: b, c in 0..{_fmt(cfg.b_max)} x 0..{_fmt(cfg.c_max)} step {_fmt(cfg.step)}",
        f"# samples per cell: {cfg.samples_per_cell}, box: [{cfg.box[0]!r}, {cfg.box[1]!r}]"
        f", tolerance: {cfg.tolerance!r}, seed: {cfg.seed}",
        "# columns: b, largest c with the flag true; b omitted when no cell qualifies",
    ]
    nlc_path = os.path.join(out_dir, "nlc_boundary.txt")
    slc_path = os.path.join(out_dir, "slc_boundary.txt")
    csv_path = os.path.join(out_dir, "sweep_full.csv")

    _write_boundary(nlc_path, header, result, flag="nlc")
    _write_boundary(slc_path, header, result, flag="slc_no_violation")

    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["b", "c", "nlc", "slc_no_violation"])
        for cell in result.cells:
            writer.writerow(
                [_fmt(cell.b), _fmt(cell.c), int(cell.nlc), int(cell.slc_no_violation)]
            )
    return nlc_path, slc_path, csv_path


def _write_boundary(path: str, header: Sequence[str], result: SweepResult, flag: str) -> None:
    by_b: dict[Fraction, Fraction] = {}
    for cell in result.cells:
        if getattr(cell, flag) and (cell.b not in by_b or cell.c > by_b[cell.b]):
            by_b[cell.b] = cell.c
    with open(path, "w") as fh:
        for line in header:
            fh.write(line + "\n")
        for b in result.config.grid_b():
            if b in by_b:
                fh.write(f"{_fmt(b)} {_fmt(by_b[b])}\n")


def _fmt(value: Fraction) -> str:
    """Grid values as shortest round-trip floats: 2 -> '2.0', 3/20 -> '0.15'."""
    return repr(float(value))
