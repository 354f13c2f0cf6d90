"""The cone-type successor matrix: construction, fixture checks, primitivity and spectrum."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping, Optional

import numpy as np

from ..cones.services import ConeTypeTable, build_cone_table
from ..errors import FixtureError, NonConvergenceError, PreconditionError, PrimitivityError

FIXTURE_DIR = Path(__file__).resolve().parent / "fixtures"
PRINTED_BLOCKS_PATH = FIXTURE_DIR / "printed_blocks.txt"
ERRATA_PATH = FIXTURE_DIR / "errata.json"

PRINTED_BLOCKS_HEADER = (
    "# Cone-type successor matrix as printed, one block per section.\n"
    "# Rows are successor types, columns are predecessor types, ids in table order.\n"
    "# Classes: 1 = ids 1-8, 2 = ids 9-24, 3 = ids 25-40, 4 = ids 41-48.\n"
    "# Blocks that are not listed are zero; I marks an identity block.\n"
)

# Leading rows of M^k claimed positive, by power.
STAGED_ROWS = {2: 8, 3: 16, 4: 32, 5: 48}
INT64_BITS = 62


@dataclass(frozen=True, eq=False)
class ConeMatrix:
    """0/1 successor matrix; entry ``[c' - 1, c - 1]`` is 1 when ``c`` has a successor of type ``c'``."""

    entries: np.ndarray
    class_sizes: tuple[int, ...]
    labels: tuple[str, ...] = ()
    positive: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=np.uint8)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise PreconditionError("A cone matrix must be square.")
        if sum(self.class_sizes) != entries.shape[0]:
            raise PreconditionError("Class sizes do not add up to the matrix order.")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "positive", entries.astype(bool))

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def entry(self, row: int, column: int) -> int:
        """Entry addressed by 1-based cone-type ids."""
        return int(self.entries[row - 1, column - 1])

    def class_offsets(self) -> list[int]:
        return [0, *np.cumsum(self.class_sizes).tolist()]

    def block(self, i: int, j: int) -> np.ndarray:
        """Block ``M_{i,j}`` with 1-based class indices."""
        offsets = self.class_offsets()
        return self.entries[offsets[i - 1] : offsets[i], offsets[j - 1] : offsets[j]]

    def column_sums(self) -> np.ndarray:
        return self.entries.sum(axis=0, dtype=np.int64)

    def to_nested(self) -> list[list[int]]:
        return self.entries.astype(int).tolist()

    def with_entries(self, entries: np.ndarray) -> "ConeMatrix":
        return ConeMatrix(entries, self.class_sizes, self.labels)


@dataclass(frozen=True)
class MatrixDiff:
    row: int
    column: int
    computed: int
    printed: int

    def serialize(self) -> dict[str, int]:
        return {
            "row": self.row,
            "column": self.column,
            "computed": self.computed,
            "printed": self.printed,
        }


@dataclass(frozen=True)
class VerificationReport:
    """Differences between the computed matrix and the printed fixture."""

    diff: tuple[MatrixDiff, ...]
    errata: tuple[MatrixDiff, ...]

    @property
    def unexplained(self) -> tuple[MatrixDiff, ...]:
        known = set(self.errata)
        return tuple(entry for entry in self.diff if entry not in known)

    @property
    def missing_errata(self) -> tuple[MatrixDiff, ...]:
        found = set(self.diff)
        return tuple(entry for entry in self.errata if entry not in found)

    @property
    def passed(self) -> bool:
        return not self.unexplained and not self.missing_errata

    def serialize(self) -> dict[str, object]:
        return {
            "passed": self.passed,
            "diff": [entry.serialize() for entry in self.diff],
            "errata": [entry.serialize() for entry in self.errata],
            "unexplained": [entry.serialize() for entry in self.unexplained],
            "missing_errata": [entry.serialize() for entry in self.missing_errata],
        }


@dataclass(frozen=True)
class PrimitivityCertificate:
    """Smallest positive power and the staged row-positivity checks."""

    k: Optional[int]
    stages: dict[int, bool]
    leading_positive_rows: dict[int, int]
    first_failure: Optional[tuple[int, int, int]]
    max_entry: Optional[int]

    @property
    def primitive(self) -> bool:
        return self.k is not None

    @property
    def passed(self) -> bool:
        return self.primitive and all(self.stages.get(power, False) for power in STAGED_ROWS)

    def serialize(self) -> dict[str, object]:
        return {
            "k": self.k,
            "primitive": self.primitive,
            "stages": {str(power): ok for power, ok in self.stages.items()},
            "leading_positive_rows": {
                str(power): rows for power, rows in self.leading_positive_rows.items()
            },
            "first_failure": list(self.first_failure) if self.first_failure else None,
            "max_entry": self.max_entry,
        }


@dataclass(frozen=True, eq=False)
class SpectralResult:
    r: float
    right_vector: np.ndarray
    left_vector: np.ndarray
    residual: float
    iterations: int
    left_value: float
    restart_gap: float
    residual_history: tuple[float, ...] = field(repr=False, default=())

    def serialize(self) -> dict[str, object]:
        return {
            "r": self.r,
            "left_value": self.left_value,
            "residual": self.residual,
            "iterations": self.iterations,
            "restart_gap": self.restart_gap,
            "right_vector": self.right_vector.tolist(),
            "left_vector": self.left_vector.tolist(),
        }


@dataclass(frozen=True)
class GrowthRow:
    n: int
    count: int
    vector: tuple[int, ...]


def _class_sizes(cones: ConeTypeTable) -> tuple[int, ...]:
    return tuple(size for _, size in sorted(cones.class_sizes().items()))


def matrix_from_transitions(
    transitions: Mapping[tuple[int, int], int], cones: ConeTypeTable
) -> ConeMatrix:
    """Matrix of a successor map given as ``(c, letter) -> c'``; the identity row is ignored."""

    order = cones.count
    entries = np.zeros((order, order), dtype=np.uint8)
    for (source, _letter), target in transitions.items():
        if source == 0:
            continue
        entries[target - 1, source - 1] = 1
    labels = tuple(cones.label(c) for c in cones.ids)
    return ConeMatrix(entries, _class_sizes(cones), labels)


def build_matrix(cones: ConeTypeTable) -> ConeMatrix:
    transitions = {
        (source, letter): target
        for source in cones.ids
        for letter, target in cones.successor_row(source).items()
    }
    return matrix_from_transitions(transitions, cones)


@lru_cache(maxsize=None)
def cached_matrix(g: int = 2, experimental: bool = False) -> ConeMatrix:
    return build_matrix(build_cone_table(g, experimental))


def diff_matrices(computed: ConeMatrix, printed: ConeMatrix) -> tuple[MatrixDiff, ...]:
    if computed.entries.shape != printed.entries.shape:
        raise PreconditionError("Only matrices of the same order can be compared.")
    rows, columns = np.nonzero(computed.entries != printed.entries)
    return tuple(
        MatrixDiff(
            int(row) + 1,
            int(column) + 1,
            int(computed.entries[row, column]),
            int(printed.entries[row, column]),
        )
        for row, column in zip(rows, columns)
    )


def _block_order(class_count: int) -> list[tuple[int, int]]:
    return [(i, j) for j in range(1, class_count + 1) for i in range(1, class_count + 1)]


def format_blocks(matrix: ConeMatrix) -> str:
    """Non-zero blocks column by column; identity blocks collapse to ``I``."""

    sections = [PRINTED_BLOCKS_HEADER]
    for i, j in _block_order(len(matrix.class_sizes)):
        block = matrix.block(i, j)
        if not block.any():
            continue
        lines = [f"[M{i},{j}]"]
        if block.shape[0] == block.shape[1] and np.array_equal(block, np.eye(block.shape[0])):
            lines.append("I")
        else:
            lines.extend(" ".join(str(int(value)) for value in row) for row in block)
        sections.append("\n".join(lines) + "\n")
    return "\n".join(sections)


def parse_blocks(text: str, class_sizes: Iterable[int]) -> np.ndarray:
    sizes = tuple(class_sizes)
    offsets = [0, *np.cumsum(sizes).tolist()]
    entries = np.zeros((offsets[-1], offsets[-1]), dtype=np.uint8)
    current: Optional[tuple[int, int]] = None
    rows: list[list[int]] = []

    def flush() -> None:
        if current is None:
            return
        i, j = current
        shape = (sizes[i - 1], sizes[j - 1])
        if rows == [["I"]]:
            if shape[0] != shape[1]:
                raise FixtureError(f"Block M{i},{j} is marked I but is not square.")
            block = np.eye(shape[0], dtype=np.uint8)
        else:
            block = np.array(rows, dtype=np.uint8)
            if block.shape != shape:
                raise FixtureError(f"Block M{i},{j} has shape {block.shape}, expected {shape}.")
        entries[offsets[i - 1] : offsets[i], offsets[j - 1] : offsets[j]] = block

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[M") and line.endswith("]"):
            flush()
            try:
                i, j = (int(part) for part in line[2:-1].split(","))
            except ValueError:
                raise FixtureError(f"Unreadable block header on line {number}: {line!r}") from None
            if not (1 <= i <= len(sizes) and 1 <= j <= len(sizes)):
                raise FixtureError(f"Block M{i},{j} on line {number} is out of range.")
            current = (i, j)
            rows = []
            continue
        if current is None:
            raise FixtureError(f"Row outside of a block on line {number}.")
        if line == "I":
            rows.append(["I"])
            continue
        try:
            values = [int(token) for token in line.split()]
        except ValueError:
            raise FixtureError(f"Non-numeric row on line {number}.") from None
        if any(value not in (0, 1) for value in values):
            raise FixtureError(f"Entries must be 0 or 1 (line {number}).")
        rows.append(values)
    flush()
    return entries


def load_fixture(reference: ConeMatrix, path: Optional[Path] = None) -> ConeMatrix:
    """Printed matrix laid out with the class sizes of ``reference``."""

    path = Path(path or PRINTED_BLOCKS_PATH)
    if not path.is_file():
        raise FixtureError(f"Matrix fixture {path} is missing.")
    entries = parse_blocks(path.read_text(encoding="utf-8"), reference.class_sizes)
    return reference.with_entries(entries)


def load_errata(path: Optional[Path] = None) -> tuple[MatrixDiff, ...]:
    path = Path(path or ERRATA_PATH)
    if not path.is_file():
        return ()
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
        return tuple(
            MatrixDiff(int(item["row"]), int(item["column"]), int(item["computed"]), int(item["printed"]))
            for item in payload.get("entries", [])
        )
    except (ValueError, KeyError, TypeError) as exc:
        raise FixtureError(f"Errata file {path} is malformed: {exc}") from exc


def apply_errata(printed: ConeMatrix, errata: Iterable[MatrixDiff]) -> ConeMatrix:
    entries = printed.entries.copy()
    for entry in errata:
        entries[entry.row - 1, entry.column - 1] = entry.computed
    return printed.with_entries(entries)


def verify_against_printed(
    matrix: ConeMatrix,
    *,
    fixture_path: Optional[Path] = None,
    errata_path: Optional[Path] = None,
) -> VerificationReport:
    printed = load_fixture(matrix, fixture_path)
    return VerificationReport(diff_matrices(matrix, printed), load_errata(errata_path))


def _leading_positive_rows(positive: np.ndarray) -> int:
    rows_ok = positive.all(axis=1)
    return int(rows_ok.size if rows_ok.all() else np.argmin(rows_ok))


def _first_zero(positive: np.ndarray, rows: int) -> tuple[int, int]:
    row, column = np.argwhere(~positive[:rows])[0]
    return int(row) + 1, int(column) + 1


def integer_power(matrix: ConeMatrix, power: int) -> np.ndarray:
    """Exact ``M^power`` in 64-bit integers; refuses powers that could overflow."""

    growth = max(int(matrix.entries.sum(axis=1).max()), 1)
    if power * math.log2(growth + 1) >= INT64_BITS:
        raise PreconditionError(f"M^{power} may overflow 64-bit integers.")
    return np.linalg.matrix_power(matrix.entries.astype(np.int64), power)


def primitivity_certificate(
    matrix: ConeMatrix, *, max_power: Optional[int] = None
) -> PrimitivityCertificate:
    """Find the smallest positive power and check the staged row claims on the way.

    Positivity is tracked on the boolean mirror, so any power up to the Wielandt
    bound ``n^2 - 2n + 2`` can be examined without overflow.
    """

    order = matrix.order
    limit = max_power or order * order - 2 * order + 2
    pattern = matrix.positive.astype(np.int64)
    current = matrix.positive.copy()
    staged = STAGED_ROWS if order == 48 else {power: order for power in STAGED_ROWS}

    stages = {1: bool(current.all())}
    leading = {1: _leading_positive_rows(current)}
    first_failure: Optional[tuple[int, int, int]] = None
    k: Optional[int] = 1 if current.all() else None

    power = 1
    while k is None and power < limit:
        power += 1
        current = (current.astype(np.int64) @ pattern) > 0
        if power <= max(staged):
            leading[power] = _leading_positive_rows(current)
        if power in staged:
            stages[power] = bool(current[: staged[power]].all())
            if not stages[power] and first_failure is None:
                first_failure = (power, *_first_zero(current, staged[power]))
        if current.all():
            k = power

    for power in staged:
        stages.setdefault(power, k is not None and power >= k)

    max_entry = None
    if k is not None:
        max_entry = int(integer_power(matrix, max(k, max(staged))).max())
    return PrimitivityCertificate(k, stages, leading, first_failure, max_entry)


def require_primitive(certificate: PrimitivityCertificate) -> None:
    if certificate.passed:
        return
    if certificate.first_failure is not None:
        power, row, column = certificate.first_failure
        raise PrimitivityError(f"Entry ({row}, {column}) of M^{power} is zero.")
    raise PrimitivityError("No power of the matrix is entrywise positive.")


def _power_iteration(
    matrix: np.ndarray, start: np.ndarray, tol: float, max_iter: int
) -> tuple[np.ndarray, float, float, int, list[float]]:
    vector = start / start.max()
    image = matrix @ vector
    history: list[float] = []
    for iteration in range(1, max_iter + 1):
        value = float(image.max())
        residual = float(np.abs(image - value * vector).max())
        history.append(residual)
        if residual <= tol:
            return vector, value, residual, iteration, history
        vector = image / value
        image = matrix @ vector
    raise NonConvergenceError(
        f"Power iteration stopped at residual {history[-1]:.3e} after {max_iter} steps."
    )


def perron(
    matrix: ConeMatrix,
    *,
    tol: float = 1e-12,
    max_iter: int = 100_000,
    seed: int = 0,
) -> SpectralResult:
    """Perron root with right and left eigenvectors, normalized to max-norm 1.

    A second run from a random positive start measures how far the normalized
    right vectors drift apart.
    """

    values = matrix.entries.astype(np.float64)
    ones = np.ones(matrix.order)
    right, r, residual, iterations, history = _power_iteration(values, ones, tol, max_iter)
    left, left_value, _, _, _ = _power_iteration(values.T, ones, tol, max_iter)

    rng = np.random.default_rng(seed)
    restart, _, _, _, _ = _power_iteration(values, rng.uniform(0.5, 1.5, matrix.order), tol, max_iter)
    gap = float(np.abs(right - restart).max())

    return SpectralResult(
        r=r,
        right_vector=right,
        left_vector=left,
        residual=residual,
        iterations=iterations,
        left_value=left_value,
        restart_gap=gap,
        residual_history=tuple(history),
    )


def growth_counts(matrix: ConeMatrix, n_max: int) -> list[GrowthRow]:
    """Automaton counts ``s(n)`` with exact integers; ``v_1`` marks the first class.

    The identity has no column of its own, so the ``n = 0`` vector is all zeros.
    """

    if n_max < 0:
        raise PreconditionError("n_max must be non-negative.")
    pattern = matrix.entries.astype(object)
    rows = [GrowthRow(0, 1, (0,) * matrix.order)]
    vector = np.zeros(matrix.order, dtype=object)
    vector[: matrix.class_sizes[0]] = 1
    for n in range(1, n_max + 1):
        if n > 1:
            vector = pattern.dot(vector)
        values = tuple(int(value) for value in vector)
        rows.append(GrowthRow(n, sum(values), values))
    return rows


def to_csv(matrix: ConeMatrix) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    labels = list(matrix.labels) or [str(c) for c in range(1, matrix.order + 1)]
    writer.writerow(["successor", *labels])
    for label, row in zip(labels, matrix.to_nested()):
        writer.writerow([label, *row])
    return buffer.getvalue()


def growth_rate_estimate(sizes: Iterable[int]) -> float:
    """Ratio of the last two sphere sizes."""

    values = list(sizes)
    if len(values) < 2 or values[-2] == 0:
        raise PreconditionError("A growth-rate estimate needs two non-empty spheres.")
    return values[-1] / values[-2]
