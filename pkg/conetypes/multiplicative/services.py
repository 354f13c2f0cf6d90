"""Matrix systems over cone types and elementary multiplicative functions.

A multiplicative function ``mu[C(x, y), v]`` is evaluated three ways: the literal
recursion over successors, the sum over geodesics of products of transition
blocks, and the global block-matrix formula. Bases are first translated by
``x^-1`` so every evaluator works with a cone ``C(e, y0)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from ..cones.services import ConeTypeTable, classify, length_class_name
from ..errors import DimensionMismatchError, PreconditionError, SuccessorConflictError
from ..group.services import (
    GroupElement,
    Word,
    canonical_geodesic,
    normal_form,
    word_inverse,
)
from ..matrix.services import ConeMatrix
from ..oracle.services import enumerate_geodesics

DimsProfile = Union[int, Mapping[Union[str, int], int]]


def admissible_pairs(matrix: ConeMatrix, cones: ConeTypeTable) -> dict[tuple[int, int], int]:
    """Map every 1-entry ``(c', c)`` of the matrix to the generator realizing it."""

    pairs: dict[tuple[int, int], int] = {}
    for source in cones.ids:
        for letter, target in cones.successor_row(source).items():
            if (target, source) in pairs:
                first = cones.relator_table.alphabet.letter(pairs[(target, source)])
                second = cones.relator_table.alphabet.letter(letter)
                raise SuccessorConflictError(
                    f"Generators {first} and {second} both lead from type {source} to {target}."
                )
            pairs[(target, source)] = letter
    if len(pairs) != int(matrix.entries.sum()) or any(
        matrix.entry(target, source) != 1 for target, source in pairs
    ):
        raise SuccessorConflictError("Admissible pairs do not match the cone matrix.")
    return pairs


def resolve_dims(profile: DimsProfile, cones: ConeTypeTable) -> dict[int, int]:
    """Dimension per cone type from an int, a per-class mapping or a per-id mapping."""

    if isinstance(profile, int):
        dims = {c: profile for c in cones.ids}
    else:
        dims = {}
        for c in cones.ids:
            by_class = profile.get(length_class_name(cones.length_class(c)))
            by_id = profile.get(c, profile.get(str(c)))
            value = by_id if by_id is not None else by_class
            if value is None:
                raise DimensionMismatchError(f"No dimension given for cone type {c}.")
            dims[c] = int(value)
    if any(d < 1 for d in dims.values()):
        raise DimensionMismatchError("Every dimension must be at least 1.")
    return dims


def _scalar_array(values, exact: bool) -> np.ndarray:
    array = np.asarray(values)
    if exact:
        return np.vectorize(Fraction, otypes=[object])(array) if array.size else array.astype(object)
    return array.astype(np.float64)


def _zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        result = np.empty(shape, dtype=object)
        result.fill(Fraction(0))
        return result
    return np.zeros(shape)


def _identity(size: int, exact: bool) -> np.ndarray:
    result = _zeros((size, size), exact)
    for index in range(size):
        result[index, index] = Fraction(1) if exact else 1.0
    return result


@dataclass(frozen=True, eq=False)
class MatrixSystem:
    """Spaces ``V_c`` of dimension ``dims[c]`` and blocks ``H_{(c', c)}`` for admissible pairs."""

    dims: dict[int, int]
    blocks: dict[tuple[int, int], np.ndarray]
    exact: bool = True

    def __post_init__(self) -> None:
        for (target, source), block in self.blocks.items():
            expected = (self.dims[target], self.dims[source])
            if block.shape != expected:
                raise DimensionMismatchError(
                    f"Block ({target}, {source}) has shape {block.shape}, expected {expected}."
                )

    def block(self, target: int, source: int) -> np.ndarray:
        found = self.blocks.get((target, source))
        if found is None:
            return _zeros((self.dims[target], self.dims[source]), self.exact)
        return found

    def zero_vector(self, cone_type: int) -> np.ndarray:
        return _zeros(self.dims[cone_type], self.exact)

    def coerce_vector(self, values: Sequence, cone_type: int) -> np.ndarray:
        vector = _scalar_array(list(values), self.exact)
        if vector.shape != (self.dims[cone_type],):
            raise DimensionMismatchError(
                f"Type {cone_type} expects a vector of length {self.dims[cone_type]}, "
                f"got {vector.shape[0] if vector.ndim else 0}."
            )
        return vector

    def with_block(self, pair: tuple[int, int], block: np.ndarray) -> "MatrixSystem":
        blocks = dict(self.blocks)
        blocks[pair] = _scalar_array(block, self.exact)
        return MatrixSystem(dict(self.dims), blocks, self.exact)

    @cached_property
    def offsets(self) -> dict[int, int]:
        offsets: dict[int, int] = {}
        position = 0
        for cone_type in sorted(self.dims):
            offsets[cone_type] = position
            position += self.dims[cone_type]
        return offsets

    def span(self, cone_type: int) -> slice:
        """Coordinates of ``V_c`` inside the total space."""
        offset = self.offsets[cone_type]
        return slice(offset, offset + self.dims[cone_type])

    @property
    def total_dimension(self) -> int:
        return sum(self.dims.values())

    @cached_property
    def global_matrix(self) -> np.ndarray:
        """Block matrix ``N`` with ``H_{(c', c)}`` at block row ``c'`` and block column ``c``."""

        size = self.total_dimension
        result = _zeros((size, size), self.exact)
        for (target, source), block in self.blocks.items():
            row, column = self.offsets[target], self.offsets[source]
            result[row : row + block.shape[0], column : column + block.shape[1]] = block
        return result

    def injection(self, cone_type: int) -> np.ndarray:
        """``V_c``: the ``d_c x D`` matrix reading the ``c`` block of the total space."""

        size = self.dims[cone_type]
        result = _zeros((size, self.total_dimension), self.exact)
        offset = self.offsets[cone_type]
        result[:, offset : offset + size] = _identity(size, self.exact)
        return result

    def projector(self, cone_type: int) -> np.ndarray:
        """``E_c = V_c^T V_c``."""
        injection = self.injection(cone_type)
        return injection.T.dot(injection)


def random_system(
    matrix: ConeMatrix,
    cones: ConeTypeTable,
    profile: DimsProfile = 1,
    *,
    seed: int = 0,
    exact: bool = True,
) -> MatrixSystem:
    """Reproducible blocks with small rational entries ``p/q``, ``|p| <= 4``, ``1 <= q <= 3``."""

    dims = resolve_dims(profile, cones)
    rng = np.random.default_rng(seed)
    blocks = {}
    for target, source in sorted(admissible_pairs(matrix, cones)):
        shape = (dims[target], dims[source])
        numerators = rng.integers(-4, 5, size=shape)
        denominators = rng.integers(1, 4, size=shape)
        if exact:
            block = np.empty(shape, dtype=object)
            for index in np.ndindex(shape):
                block[index] = Fraction(int(numerators[index]), int(denominators[index]))
        else:
            block = numerators / denominators
        blocks[(target, source)] = block
    return MatrixSystem(dims, blocks, exact)


def constant_system(
    matrix: ConeMatrix, cones: ConeTypeTable, value: int = 1, *, exact: bool = True
) -> MatrixSystem:
    """Scalar system with ``H = value`` on every admissible pair."""

    dims = {c: 1 for c in cones.ids}
    blocks = {
        pair: _scalar_array([[value]], exact) for pair in sorted(admissible_pairs(matrix, cones))
    }
    return MatrixSystem(dims, blocks, exact)


def _format_scalar(value) -> Union[str, int, float]:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    return float(value)


def dump_system(system: MatrixSystem) -> dict[str, object]:
    return {
        "exact": system.exact,
        "dims": {str(c): d for c, d in sorted(system.dims.items())},
        "blocks": [
            {
                "from": source,
                "to": target,
                "entries": [_format_scalar(value) for value in block.reshape(-1)],
            }
            for (target, source), block in sorted(system.blocks.items())
        ],
    }


def load_system(
    payload: Mapping[str, object],
    matrix: ConeMatrix,
    cones: ConeTypeTable,
    *,
    exact: Optional[bool] = None,
) -> MatrixSystem:
    """Read the ``{dims, blocks: [{from, to, entries}]}`` schema and check it against ``matrix``."""

    exact = bool(payload.get("exact", True)) if exact is None else exact
    try:
        dims = {int(c): int(d) for c, d in dict(payload["dims"]).items()}
        raw_blocks = list(payload["blocks"])
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"Malformed matrix system: {exc}") from exc
    if set(dims) != set(cones.ids):
        raise DimensionMismatchError("The system must give a dimension for every cone type.")

    admissible = admissible_pairs(matrix, cones)
    blocks: dict[tuple[int, int], np.ndarray] = {}
    for item in raw_blocks:
        try:
            source, target = int(item["from"]), int(item["to"])
            values = [Fraction(str(value)) if exact else float(Fraction(str(value))) for value in item["entries"]]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"Malformed block entry: {exc}") from exc
        if (target, source) not in admissible:
            raise PreconditionError(f"Pair ({target}, {source}) is not admissible.")
        shape = (dims[target], dims[source])
        if len(values) != shape[0] * shape[1]:
            raise DimensionMismatchError(
                f"Block ({target}, {source}) needs {shape[0] * shape[1]} entries, got {len(values)}."
            )
        blocks[(target, source)] = np.array(values, dtype=object if exact else np.float64).reshape(shape)
    return MatrixSystem(dims, blocks, exact)


@dataclass(frozen=True, eq=False)
class MultFunc:
    """``mu[C(x, y), v]`` with ``c`` the cone type of ``x^-1 y``."""

    x: GroupElement
    y: GroupElement
    cone_type: int
    vector: np.ndarray = field(repr=False)


def base_cone_type(x: GroupElement, y: GroupElement, cones: ConeTypeTable) -> int:
    """Cone type of ``x^-1 y``; the base must have ``d(x, y) >= 1``."""

    table = cones.relator_table
    anchor = normal_form(word_inverse(x.word, table.inverse) + y.word, table)
    if anchor.is_identity:
        raise PreconditionError("The base of a multiplicative function needs d(x, y) >= 1.")
    return classify(anchor, cones)


def elementary_function(
    x: GroupElement,
    y: GroupElement,
    vector: Sequence,
    system: MatrixSystem,
    cones: ConeTypeTable,
) -> MultFunc:
    cone_type = base_cone_type(x, y, cones)
    return MultFunc(x, y, cone_type, system.coerce_vector(vector, cone_type))


def translate(f: MultFunc, gamma: GroupElement, cones: ConeTypeTable) -> MultFunc:
    """``mu[C(gamma x, gamma y), v]``; the cone type is unchanged."""

    table = cones.relator_table
    return MultFunc(
        normal_form(gamma.word + f.x.word, table),
        normal_form(gamma.word + f.y.word, table),
        f.cone_type,
        f.vector,
    )


@dataclass(frozen=True)
class _Frame:
    target: GroupElement
    gap: GroupElement
    in_cone: bool


class EvaluationContext:
    """Caches shared by every evaluation of one function under one system.

    Every cached value depends only on ``f``, ``system`` and ``cones``, so one
    context can serve any number of ``z``. The recursive operators are keyed by
    ``(cone type, anchor^-1 z)``: by translation invariance the operator from an
    anchor to ``z`` depends on nothing else.
    """

    def __init__(self, f: MultFunc, system: MatrixSystem, cones: ConeTypeTable) -> None:
        self.f = f
        self.system = system
        self.cones = cones
        self.table = cones.relator_table
        self._shift = word_inverse(f.x.word, self.table.inverse)
        self.anchor = normal_form(self._shift + f.y.word, self.table)
        self._anchor_inverse = word_inverse(self.anchor.word, self.table.inverse)
        self._geodesics: dict[Word, list[Word]] = {}
        self._steps: dict[Word, dict[int, Word]] = {}
        self._operators: dict[tuple[int, Word], Optional[np.ndarray]] = {}
        self._types: dict[Word, tuple[int, ...]] = {}
        self._products: dict[Word, np.ndarray] = {}
        self._states: dict[tuple[int, ...], np.ndarray] = {}

    def frame(self, z: GroupElement) -> _Frame:
        target = normal_form(self._shift + z.word, self.table)
        gap = normal_form(self._anchor_inverse + target.word, self.table)
        return _Frame(target, gap, target.length == self.anchor.length + gap.length)

    def outside(self) -> np.ndarray:
        return self.system.zero_vector(self.f.cone_type)

    def first_steps(self, relative: Word) -> dict[int, Word]:
        """Letters starting a geodesic of ``relative``, with what is left after each."""

        steps = self._steps.get(relative)
        if steps is None:
            inverse = self.table.inverse
            steps = {}
            for letter in range(self.table.alphabet.size):
                rest = normal_form(bytes((inverse[letter],)) + relative, self.table)
                if rest.length == len(relative) - 1:
                    steps[letter] = rest.word
            self._steps[relative] = steps
        return steps

    def operator(self, cone_type: int, relative: Word) -> Optional[np.ndarray]:
        """Linear map ``V_c -> V_{type(z)}`` for an anchor of type ``c``; None stands for zero."""

        key = (cone_type, relative)
        if key in self._operators:
            return self._operators[key]
        system = self.system
        if not relative:
            result = _identity(system.dims[cone_type], system.exact)
        else:
            steps = self.first_steps(relative)
            result = None
            for letter, child_type in self.cones.successor_row(cone_type).items():
                rest = steps.get(letter)
                if rest is None:
                    # z is not in the cone of the child anchor
                    continue
                below = self.operator(child_type, rest)
                if below is None:
                    continue
                term = below.dot(system.block(child_type, cone_type))
                result = term if result is None else result + term
        self._operators[key] = result
        return result

    def geodesics(self, gap: GroupElement) -> list[Word]:
        return enumerate_geodesics(gap, self.table, memo=self._geodesics)

    def types_along(self, prefix: Word) -> tuple[int, ...]:
        """Cone types ``c_0 .. c_j`` of the anchor extended by each prefix of ``prefix``."""

        cached = self._types.get(prefix)
        if cached is None:
            if not prefix:
                cached = (self.f.cone_type,)
            else:
                element = canonical_geodesic(self.anchor.word + prefix, self.table)
                current = classify(GroupElement.from_word(element), self.cones)
                cached = self.types_along(prefix[:-1]) + (current,)
            self._types[prefix] = cached
        return cached

    def product(self, prefix: Word) -> np.ndarray:
        """``H_{(c_j, c_{j-1})} ... H_{(c_1, c_0)} v`` along ``prefix``."""

        cached = self._products.get(prefix)
        if cached is None:
            if not prefix:
                cached = self.f.vector
            else:
                path = self.types_along(prefix)
                cached = self.system.block(path[-1], path[-2]).dot(self.product(prefix[:-1]))
            self._products[prefix] = cached
        return cached

    def state(self, inner: tuple[int, ...]) -> np.ndarray:
        """``E_{c_j} N ... E_{c_1} N V_{c_0}^T v`` for ``inner = (c_1, ..., c_j)``.

        Each ``E_c`` keeps only the ``c`` block, so the following ``N`` only needs
        the block columns of ``c``.
        """

        cached = self._states.get(inner)
        if cached is not None:
            return cached
        system = self.system
        cached = _zeros(system.total_dimension, system.exact)
        if inner:
            before = system.span(inner[-2] if len(inner) > 1 else self.f.cone_type)
            moved = system.global_matrix[:, before].dot(self.state(inner[:-1])[before])
            rows = system.span(inner[-1])
            cached[rows] = moved[rows]
        else:
            cached[system.span(self.f.cone_type)] = self.f.vector
        self._states[inner] = cached
        return cached


def _context(
    f: MultFunc, system: MatrixSystem, cones: ConeTypeTable, context: Optional[EvaluationContext]
) -> EvaluationContext:
    if context is None:
        return EvaluationContext(f, system, cones)
    if context.f is not f or context.system is not system:
        raise PreconditionError("The evaluation context belongs to another function or system.")
    return context


def eval_recursive(
    f: MultFunc,
    system: MatrixSystem,
    z: GroupElement,
    cones: ConeTypeTable,
    *,
    context: Optional[EvaluationContext] = None,
) -> np.ndarray:
    """Literal recursion over successors ``ya`` of the anchor."""

    context = _context(f, system, cones, context)
    frame = context.frame(z)
    if not frame.in_cone:
        return context.outside()
    mapping = context.operator(f.cone_type, frame.gap.word)
    if mapping is None:
        return context.outside()
    return mapping.dot(f.vector)


@dataclass(frozen=True, eq=False)
class GeodesicTerm:
    """One summand of the geodesic sum: the word, its cone-type path and its product."""

    word: Word
    path: tuple[int, ...]
    value: np.ndarray


def geodesic_terms(
    f: MultFunc,
    system: MatrixSystem,
    z: GroupElement,
    cones: ConeTypeTable,
    *,
    context: Optional[EvaluationContext] = None,
) -> list[GeodesicTerm]:
    """Products ``H_{(c_n, c_{n-1})} ... H_{(c_1, c_0)} v`` for every geodesic from ``y0`` to ``z``."""

    context = _context(f, system, cones, context)
    frame = context.frame(z)
    if not frame.in_cone:
        return []
    return [
        GeodesicTerm(word, context.types_along(word), context.product(word))
        for word in context.geodesics(frame.gap)
    ]


def eval_geodesic_sum(
    f: MultFunc,
    system: MatrixSystem,
    z: GroupElement,
    cones: ConeTypeTable,
    *,
    context: Optional[EvaluationContext] = None,
) -> np.ndarray:
    context = _context(f, system, cones, context)
    terms = geodesic_terms(f, system, z, cones, context=context)
    if not terms:
        return context.outside()
    total = terms[0].value
    for term in terms[1:]:
        total = total + term.value
    return total


def eval_matrix_form(
    f: MultFunc,
    system: MatrixSystem,
    z: GroupElement,
    cones: ConeTypeTable,
    *,
    context: Optional[EvaluationContext] = None,
) -> np.ndarray:
    """``V_{c_n} N [sum_w E_{c_{n-1}} N ... N E_{c_1}] N V_{c_0}^T v``.

    The bracket is summed over the cone-type paths of the geodesics from ``y0`` to
    ``z``; partial products are shared between paths with a common beginning.
    """

    context = _context(f, system, cones, context)
    frame = context.frame(z)
    if not frame.in_cone:
        return context.outside()
    if frame.gap.is_identity:
        return f.vector

    paths = [context.types_along(word) for word in context.geodesics(frame.gap)]
    bracket = _zeros(system.total_dimension, system.exact)
    for path in paths:
        bracket = bracket + context.state(path[1:-1])
    rows = system.span(paths[0][-1])
    return system.global_matrix[rows, :].dot(bracket)


EVALUATORS = {
    "recursive": eval_recursive,
    "geodesic": eval_geodesic_sum,
    "matrix": eval_matrix_form,
}


def format_vector(vector: np.ndarray) -> list[Union[str, int, float]]:
    return [_format_scalar(value) for value in vector]


def vectors_agree(first: np.ndarray, second: np.ndarray, *, exact: bool, tol: float = 1e-9) -> bool:
    if first.shape != second.shape:
        return False
    if exact:
        return bool(all(a == b for a, b in zip(first, second)))
    return bool(np.allclose(first.astype(np.float64), second.astype(np.float64), rtol=0.0, atol=tol))


def parse_dims_profile(text: str) -> DimsProfile:
    """``"2"`` for a uniform profile, or ``"singles=2,quadruples=3,17=4"`` per class or id."""

    text = text.strip()
    try:
        if "=" not in text:
            return int(text)
        profile: dict[Union[str, int], int] = {}
        for item in text.split(","):
            key, value = (part.strip() for part in item.split("="))
            profile[int(key) if key.isdigit() else key] = int(value)
    except ValueError:
        raise PreconditionError(f"Cannot read the dimension profile {text!r}.") from None
    return profile
