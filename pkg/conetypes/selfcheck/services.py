"""Acceptance checks run end to end against the brute-force oracle.

Each check is a method returning ``(passed, detail)``; :meth:`SelfCheck.run` times
them and turns domain errors into failed results so one broken check does not hide
the others.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator

import numpy as np

from ..cones.services import (
    GENUS_TWO_REPRESENTATIVES,
    ConeTypeTable,
    build_cone_table,
    classify,
    classify_by_oracle,
    enumerate_representatives,
    fingerprint_index,
    oracle_transitions,
    type_word_counts,
)
from ..errors import ConeTypesError
from ..group.services import (
    GroupElement,
    Genus,
    build_relator_table,
    freely_reduced_words,
    geodesic_class,
    inverse_element,
    is_geodesic_word,
    multiply,
    normal_form,
    parse_element,
    represents_identity,
    word_inverse,
)
from ..matrix.services import (
    ConeMatrix,
    cached_matrix,
    growth_counts,
    growth_rate_estimate,
    matrix_from_transitions,
    perron,
    primitivity_certificate,
    verify_against_printed,
)
from ..multiplicative.services import (
    EVALUATORS,
    EvaluationContext,
    constant_system,
    elementary_function,
    random_system,
    translate,
    vectors_agree,
)
from ..oracle.services import (
    Ball,
    build_ball,
    enumerate_geodesics,
    fingerprint,
    geodesic_counts,
    quadruple_occurrences,
    random_elements,
    random_geodesic_word,
    random_reduced_word,
)

VECTOR_PROFILE = {"singles": 2, "doubles": 1, "triples": 1, "quadruples": 3}
CLASSIFICATION_EXAMPLES = {"bc": "c", "aba": "ba", "abcd": "cd", "dcDCAdc": "BAdc"}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float

    def serialize(self) -> dict[str, object]:
        return {
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "elapsed": round(self.elapsed, 3),
        }


@dataclass(frozen=True)
class SelfCheckSettings:
    radius: int = 7
    sample_size: int = 10_000
    systems: int = 10
    mult_radius: int = 6
    nesting_samples: int = 1_000
    seed: int = 0
    tol: float = 1e-12
    max_iter: int = 100_000
    depth: int = 4
    max_elements: int = 20_000_000


class SelfCheck:
    """Genus-2 acceptance suite sharing one ball and one cone table."""

    def __init__(self, settings: SelfCheckSettings) -> None:
        self.settings = settings
        self.cones: ConeTypeTable = build_cone_table(2)
        self.table = self.cones.relator_table
        self.matrix: ConeMatrix = cached_matrix(2)

    @cached_property
    def ball(self) -> Ball:
        return build_ball(self.settings.radius, self.table, max_elements=self.settings.max_elements)

    @cached_property
    def counts(self) -> dict[bytes, int]:
        return geodesic_counts(self.ball)

    def _rng(self, offset: int) -> np.random.Generator:
        return np.random.default_rng(self.settings.seed + offset)

    def _elements_up_to(self, radius: int) -> Iterator[GroupElement]:
        for sphere in self.ball.spheres[: radius + 1]:
            for word in sphere:
                yield GroupElement.from_word(word)

    def check_representatives(self) -> tuple[bool, str]:
        labels = tuple(self.cones.label(c) for c in self.cones.ids)
        histogram = self.cones.class_sizes()
        counts = {
            g: len(enumerate_representatives(build_relator_table(g))) for g in (3, 4)
        }
        passed = (
            labels == GENUS_TWO_REPRESENTATIVES
            and histogram == {1: 8, 2: 16, 3: 16, 4: 8}
            and all(count == Genus(g).cone_type_count for g, count in counts.items())
        )
        return passed, f"48 types {histogram}, g=3: {counts[3]}, g=4: {counts[4]}"

    def check_matrix(self) -> tuple[bool, str]:
        report = verify_against_printed(self.matrix)
        sums = self.matrix.column_sums()
        from_oracle = matrix_from_transitions(
            oracle_transitions(self.cones, self.settings.depth), self.cones
        )
        zero_blocks = [(3, 1), (3, 3), (3, 4), (4, 1), (4, 2), (4, 4)]
        passed = (
            report.passed
            and np.array_equal(from_oracle.entries, self.matrix.entries)
            and bool((sums[:40] == 7).all() and (sums[40:] == 6).all())
            and np.array_equal(self.matrix.block(3, 2), np.eye(16, dtype=np.uint8))
            and not any(self.matrix.block(i, j).any() for i, j in zero_blocks)
        )
        return passed, f"{len(report.diff)} printed differences, {len(report.unexplained)} unexplained"

    def check_primitivity(self) -> tuple[bool, str]:
        certificate = primitivity_certificate(self.matrix)
        return (
            certificate.passed and certificate.k == 5,
            f"k={certificate.k}, leading rows {certificate.leading_positive_rows}",
        )

    def check_perron(self) -> tuple[bool, str]:
        result = perron(
            self.matrix, tol=self.settings.tol, max_iter=self.settings.max_iter, seed=self.settings.seed
        )
        ratio = growth_rate_estimate(self.ball.sphere_sizes())
        passed = (
            result.residual <= 1e-10
            and bool((result.right_vector > 0).all() and (result.left_vector > 0).all())
            and result.restart_gap <= 1e-8
            and abs(result.left_value - result.r) <= 1e-9
            and abs(ratio - result.r) <= 0.05 * result.r
        )
        return passed, f"r={result.r:.10f}, sphere ratio {ratio:.6f}, restart gap {result.restart_gap:.1e}"

    def check_classification(self) -> tuple[bool, str]:
        depth = self.settings.depth
        exhaustive = list(self._elements_up_to(min(5, self.settings.radius)))
        sample = random_elements(self.settings.sample_size, 7, self._rng(1), self.table)
        mismatches = [
            x for x in exhaustive + sample if classify(x, self.cones) != classify_by_oracle(x, self.cones, depth)
        ]
        examples = all(
            classify(parse_element(word, self.table), self.cones)
            == self.cones.id_of(self.table.parse(expected))
            for word, expected in CLASSIFICATION_EXAMPLES.items()
        )
        return (
            not mismatches and examples,
            f"{len(exhaustive)} exhaustive, {len(sample)} sampled, {len(mismatches)} mismatches",
        )

    def check_growth(self) -> tuple[bool, str]:
        rows = growth_counts(self.matrix, self.settings.radius)
        words = [sum(self.counts[word] for word in sphere) for sphere in self.ball.spheres]
        elements = self.ball.sphere_sizes()
        per_type = type_word_counts(self.ball, self.cones)
        passed = (
            [row.count for row in rows] == words
            and all(rows[n].count == elements[n] for n in range(min(3, self.settings.radius) + 1))
            and all(
                tuple(per_type[n][1:]) == rows[n].vector
                for n in range(1, min(6, self.settings.radius) + 1)
            )
        )
        return passed, f"words {words}, elements {elements}"

    def check_geodesics(self) -> tuple[bool, str]:
        checked = 0
        for length in range(self.settings.radius + 1):
            for word in freely_reduced_words(length, self.table):
                distance = self.ball.distance_of(normal_form(word, self.table))
                if is_geodesic_word(word, self.table) != (distance == length):
                    return False, f"geodesic test disagrees with the ball at {self.table.format(word)}"
                checked += 1
        rng = self._rng(5)
        inverse = self.table.inverse
        for _ in range(self.settings.sample_size):
            length = int(rng.integers(self.settings.radius + 1, 4 * self.settings.radius + 1))
            word = random_reduced_word(length, rng, self.table)
            reduced = normal_form(word, self.table).word
            if not represents_identity(word + word_inverse(reduced, inverse), self.table):
                return False, f"normal form changes the element of {self.table.format(word)}"
            if not is_geodesic_word(reduced, self.table):
                return False, f"normal form of {self.table.format(word)} is not geodesic"

        radius = min(6, self.settings.radius)
        multi = 0
        for element in self._elements_up_to(radius):
            expected = self.counts[element.word]
            words = geodesic_class(element.word, self.table)
            if len(words) != expected:
                return False, f"class size differs at {self.table.format(element.word)}"
            if expected > 1:
                multi += 1
                found = enumerate_geodesics(element, self.table, ball=self.ball)
                if set(found) != words:
                    return False, f"enumeration differs at {self.table.format(element.word)}"
        overlapping = 0
        for word, count in self.counts.items():
            if count > 1:
                quadruple_occurrences(GroupElement.from_word(word), self.table, ball=self.ball)
                overlapping += 1
        three_way = parse_element("abABAdc", self.table)
        passed = len(enumerate_geodesics(three_way, self.table)) == 3
        return passed, (
            f"{checked} words against the ball, {self.settings.sample_size} long words by Dehn, "
            f"{multi} multi-geodesic elements to radius {radius}, {overlapping} overlap checks"
        )

    def _in_cone(self, anchor: GroupElement, radius: int) -> list[GroupElement]:
        found = []
        for element in self._elements_up_to(radius):
            gap = multiply(inverse_element(anchor, self.table), element, table=self.table)
            if element.length == anchor.length + gap.length:
                found.append(element)
        return found

    def check_multiplicative(self) -> tuple[bool, str]:
        evaluations = 0
        for index in range(self.settings.systems):
            profile = 1 if index % 2 == 0 else VECTOR_PROFILE
            system = random_system(
                self.matrix, self.cones, profile, seed=self.settings.seed + index, exact=True
            )
            anchor = GroupElement.from_word(bytes((index % self.table.alphabet.size,)))
            cone_type = classify(anchor, self.cones)
            rng = self._rng(100 + index)
            vector = [int(value) for value in rng.integers(-3, 4, size=system.dims[cone_type])]
            function = elementary_function(
                GroupElement.identity(), anchor, vector, system, self.cones
            )
            context = EvaluationContext(function, system, self.cones)
            for z in self._in_cone(anchor, self.settings.mult_radius):
                values = [
                    evaluate(function, system, z, self.cones, context=context)
                    for evaluate in EVALUATORS.values()
                ]
                if not all(vectors_agree(values[0], other, exact=True) for other in values[1:]):
                    return False, f"evaluators disagree at {self.table.format(z.word)} (system {index})"
                evaluations += 1

        ones = constant_system(self.matrix, self.cones)
        anchor = parse_element("b", self.table)
        unit = elementary_function(GroupElement.identity(), anchor, [1], ones, self.cones)
        counting = EvaluationContext(unit, ones, self.cones)
        paths: dict[bytes, list[bytes]] = {}
        for z in self._in_cone(anchor, self.settings.mult_radius):
            gap = multiply(inverse_element(anchor, self.table), z, table=self.table)
            if EVALUATORS["recursive"](unit, ones, z, self.cones, context=counting)[0] != len(
                enumerate_geodesics(gap, self.table, memo=paths)
            ):
                return False, f"all-ones system miscounts geodesics at {self.table.format(z.word)}"

        rng = self._rng(7)
        system = random_system(self.matrix, self.cones, VECTOR_PROFILE, seed=self.settings.seed)
        base = elementary_function(
            GroupElement.identity(), anchor, [1] * system.dims[unit.cone_type], system, self.cones
        )
        for _ in range(20):
            gamma = normal_form(random_geodesic_word(3, rng, self.table), self.table)
            moved = translate(base, gamma, self.cones)
            z = normal_form(random_geodesic_word(4, rng, self.table), self.table)
            shifted = multiply(gamma, z, table=self.table)
            if not vectors_agree(
                EVALUATORS["recursive"](moved, system, shifted, self.cones),
                EVALUATORS["recursive"](base, system, z, self.cones),
                exact=True,
            ):
                return False, "translation identity fails"
        return True, f"{evaluations} three-way evaluations over {self.settings.systems} systems"

    def check_fingerprints(self) -> tuple[bool, str]:
        depth = self.settings.depth
        index = fingerprint_index(2, depth)
        cache: dict[bytes, frozenset] = {}

        def members(word: bytes) -> frozenset:
            if word not in cache:
                cache[word] = fingerprint(normal_form(word, self.table), depth, self.table).members
            return cache[word]

        rng = self._rng(3)
        for _ in range(self.settings.nesting_samples):
            word = random_geodesic_word(int(rng.integers(1, 7)), rng, self.table)
            chain = [members(word[start:]) for start in range(len(word))]
            if not all(inner <= outer for inner, outer in zip(chain, chain[1:])):
                return False, f"nesting fails for {self.table.format(word)}"

        witness = self.table.parse("BAd")
        separated = witness in members(self.table.parse("a")) and witness not in members(
            self.table.parse("ba")
        )
        return (
            index.depth == depth and separated,
            f"48 distinct fingerprints at depth {index.depth}, {self.settings.nesting_samples} chains nested",
        )

    def checks(self) -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
        return [
            ("representatives", self.check_representatives),
            ("matrix", self.check_matrix),
            ("primitivity", self.check_primitivity),
            ("perron", self.check_perron),
            ("classification", self.check_classification),
            ("growth", self.check_growth),
            ("geodesics", self.check_geodesics),
            ("multiplicative", self.check_multiplicative),
            ("fingerprints", self.check_fingerprints),
        ]

    def run(self) -> Iterator[CheckResult]:
        for name, check in self.checks():
            started = time.perf_counter()
            try:
                passed, detail = check()
            except ConeTypesError as exc:
                passed, detail = False, f"{exc.__class__.__name__}: {exc}"
            yield CheckResult(name, passed, detail, time.perf_counter() - started)
