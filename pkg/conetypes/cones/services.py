"""Cone-type representatives, the successor cascade and classification."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from ..errors import ClassificationError, PreconditionError, SuccessorConflictError
from ..group.services import GroupElement, RelatorTable, Word, build_relator_table, normal_form
from ..oracle.services import Ball, cone_membership, fingerprint, geodesic_counts

IDENTITY_TYPE = 0
LENGTH_CLASS_NAMES = {1: "singles", 2: "doubles", 3: "triples", 4: "quadruples"}

# Genus-2 representatives by id, 1..48.
GENUS_TWO_REPRESENTATIVES = (
    "B", "a", "d", "C", "D", "c", "b", "A",
    "Bc", "BA", "ab", "aB", "dC", "dc", "CD", "Cb",
    "Da", "DC", "cd", "cD", "bA", "ba", "AB", "Ad",
    "Bcd", "BAd", "abA", "aBA", "dCD", "dcD", "CDa", "Cba",
    "Dab", "DCb", "cdC", "cDC", "bAB", "baB", "ABc", "Adc",
    "BcdC", "abAB", "dCDa", "CDab", "DabA", "cdCD", "bABc", "ABcd",
)


def length_class_name(length: int) -> str:
    return LENGTH_CLASS_NAMES.get(length, f"length-{length}")


@dataclass(frozen=True)
class ConeTypeTable:
    """Representatives of the cone types and, when available, the successor map.

    Id 0 is the identity's type and has the empty word as placeholder. A length-2g
    representative and its twin both resolve to the same id.
    """

    relator_table: RelatorTable
    representatives: tuple[Word, ...]
    index: dict[Word, int] = field(compare=False, repr=False)
    successors: Optional[tuple[tuple[Optional[int], ...], ...]] = field(
        default=None, compare=False, repr=False
    )
    experimental: bool = False

    @property
    def count(self) -> int:
        """Number of non-identity cone types."""
        return len(self.representatives) - 1

    @property
    def ids(self) -> range:
        return range(1, len(self.representatives))

    def representative(self, cone_type: int) -> Word:
        return self.representatives[cone_type]

    def label(self, cone_type: int) -> str:
        return self.relator_table.format(self.representatives[cone_type]) or "e"

    def id_of(self, word: Word) -> int:
        try:
            return self.index[word]
        except KeyError:
            raise PreconditionError(
                f"{self.relator_table.format(word)!r} is not a cone-type representative."
            ) from None

    def length_class(self, cone_type: int) -> int:
        return len(self.representatives[cone_type])

    def ids_with_length(self, length: int) -> list[int]:
        return [c for c in self.ids if len(self.representatives[c]) == length]

    def class_sizes(self) -> dict[int, int]:
        sizes: dict[int, int] = {}
        for c in self.ids:
            length = len(self.representatives[c])
            sizes[length] = sizes.get(length, 0) + 1
        return sizes

    def _require_successors(self) -> tuple[tuple[Optional[int], ...], ...]:
        if self.successors is None:
            raise PreconditionError(
                "The successor map is only available for genus 2 unless the experimental "
                "cascade is enabled."
            )
        return self.successors

    def successor(self, cone_type: int, letter: int) -> Optional[int]:
        return self._require_successors()[cone_type][letter]

    def successor_row(self, cone_type: int) -> dict[int, int]:
        return {
            letter: target
            for letter, target in enumerate(self._require_successors()[cone_type])
            if target is not None
        }

    def out_degree(self, cone_type: int) -> int:
        return len(self.successor_row(cone_type))


def enumerate_representatives(table: RelatorTable) -> tuple[Word, ...]:
    """Non-identity representatives in catalogue order.

    Words are grouped by length, then by first letter in generator order; for each
    first letter the relator continuation comes before the inverse-relator one.
    Half-relator words keep only the relator continuation, since the other one is
    its twin.
    """

    half = table.half
    size = len(table.relator)
    relator_rotations = table.permutations[:size]
    inverse_rotations = table.permutations[size:]
    by_first_letter = {permutation[0]: permutation for permutation in relator_rotations}
    inverse_by_first_letter = {permutation[0]: permutation for permutation in inverse_rotations}

    words: list[Word] = []
    seen: set[Word] = set()
    for length in range(1, half + 1):
        for letter in range(table.alphabet.size):
            sources = [by_first_letter[letter]]
            if length < half:
                sources.append(inverse_by_first_letter[letter])
            for permutation in sources:
                word = permutation[:length]
                if word not in seen:
                    seen.add(word)
                    words.append(word)
    return tuple(words)


def cascade_target(representative: Word, letter: int, table: RelatorTable) -> Optional[Word]:
    """Representative word of the successor type, or ``None`` when ``letter`` leaves the cone.

    Singles, doubles and triples keep the longest suffix of ``z a`` that lies in R;
    a half-relator ``z`` with twin ``z'`` moves to ``z_k a`` or ``z'_k a``.
    """

    step = bytes((letter,))
    if not representative:
        return step

    inverse = table.inverse
    if representative[-1] == inverse[letter]:
        return None

    subwords = table.subwords
    length = len(representative)
    if length == table.half:
        partner = table.twins[representative]
        if partner[-1] == inverse[letter]:
            return None
        matches = [
            candidate
            for candidate in (representative[-1:] + step, partner[-1:] + step)
            if candidate in subwords
        ]
        if len(matches) > 1:
            raise SuccessorConflictError(
                f"Both {table.format(matches[0])!r} and {table.format(matches[1])!r} "
                f"continue {table.format(representative)!r}."
            )
        return matches[0] if matches else step

    extended = representative + step
    if extended in subwords:
        return extended
    for size in range(length, 1, -1):
        candidate = representative[length - size + 1 :] + step
        if candidate in subwords:
            return candidate
    return step


@lru_cache(maxsize=None)
def build_cone_table(g: int = 2, experimental: bool = False) -> ConeTypeTable:
    """Representatives for genus ``g`` plus the successor map where it is supported."""

    table = build_relator_table(g)
    representatives = (b"",) + enumerate_representatives(table)
    index = {word: cone_type for cone_type, word in enumerate(representatives)}
    for word in representatives[1:]:
        if len(word) == table.half:
            index[table.twins[word]] = index[word]

    successors = None
    if g == 2 or experimental:
        rows = []
        for word in representatives:
            row = []
            for letter in range(table.alphabet.size):
                target = cascade_target(word, letter, table)
                row.append(None if target is None else index[target])
            rows.append(tuple(row))
        successors = tuple(rows)
    return ConeTypeTable(table, representatives, index, successors, experimental and g != 2)


def successor_type(cone_type: int, letter: int, cones: ConeTypeTable) -> Optional[int]:
    return cones.successor(cone_type, letter)


def classify(x: GroupElement, cones: ConeTypeTable) -> int:
    """Walk the successor map along the normal form of ``x``."""

    state = IDENTITY_TYPE
    for position, letter in enumerate(x.word):
        following = cones.successor(state, letter)
        if following is None:
            raise ClassificationError(
                f"Letter {position + 1} of {cones.relator_table.format(x.word)!r} "
                f"leaves the cone of type {state}."
            )
        state = following
    return state


@dataclass(frozen=True)
class FingerprintIndex:
    depth: int
    lookup: dict[frozenset[Word], int] = field(compare=False, repr=False)


@lru_cache(maxsize=None)
def fingerprint_index(g: int, depth: int, max_depth: int = 8) -> FingerprintIndex:
    """Fingerprints of every representative, deepened until they are pairwise distinct."""

    cones = build_cone_table(g)
    table = cones.relator_table
    for current in range(depth, max_depth + 1):
        lookup: dict[frozenset[Word], int] = {}
        collision = False
        for cone_type, word in enumerate(cones.representatives):
            members = fingerprint(normal_form(word, table), current, table).members
            if members in lookup:
                collision = True
                break
            lookup[members] = cone_type
        if not collision:
            return FingerprintIndex(current, lookup)
    raise ClassificationError(
        f"Representative fingerprints still collide at depth {max_depth}."
    )


def classify_by_oracle(x: GroupElement, cones: ConeTypeTable, depth: int = 4) -> int:
    """Match the fingerprint of ``x`` against the representatives' fingerprints."""

    table = cones.relator_table
    index = fingerprint_index(table.genus.g, depth)
    members = fingerprint(x, index.depth, table).members
    cone_type = index.lookup.get(members)
    if cone_type is None:
        raise ClassificationError(
            f"No representative shares the depth-{index.depth} fingerprint of "
            f"{table.format(x.word)!r}."
        )
    return cone_type


def oracle_transitions(cones: ConeTypeTable, depth: int = 4) -> dict[tuple[int, int], int]:
    """Successor map recomputed from fingerprints: ``(c, a) -> c'`` for ``a`` in the cone."""

    table = cones.relator_table
    transitions: dict[tuple[int, int], int] = {}
    for cone_type, word in enumerate(cones.representatives):
        anchor = normal_form(word, table)
        for letter in range(table.alphabet.size):
            step = GroupElement.from_word(bytes((letter,)))
            if cone_membership(anchor, step, table):
                child = normal_form(anchor.word + step.word, table)
                transitions[(cone_type, letter)] = classify_by_oracle(child, cones, depth)
    return transitions


def type_word_counts(ball: Ball, cones: ConeTypeTable) -> list[list[int]]:
    """Per sphere, the number of geodesic words ending in each cone type."""

    counts = geodesic_counts(ball)
    rows = []
    for sphere in ball.spheres:
        row = [0] * len(cones.representatives)
        for word in sphere:
            row[classify(GroupElement.from_word(word), cones)] += counts[word]
        rows.append(row)
    return rows


def table_rows(cones: ConeTypeTable) -> list[dict[str, object]]:
    """Export rows: id, representative, length class and successor row."""

    table = cones.relator_table
    rows = []
    for cone_type, word in enumerate(cones.representatives):
        row: dict[str, object] = {
            "id": cone_type,
            "representative": table.format(word),
            "length_class": length_class_name(len(word)) if word else "identity",
        }
        if cones.successors is not None:
            row["successors"] = {
                table.alphabet.letter(letter): target
                for letter, target in cones.successor_row(cone_type).items()
            }
        rows.append(row)
    return rows
