"""Alphabet, relator machinery, free reduction and normal forms for surface groups.

Words are stored as ``bytes``: each byte is a generator index, and indices follow the
generator order, so comparing two equal-length words as bytes is the lexicographic
order and ``(len(w), w)`` is the shortlex order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from ..errors import PreconditionError, WordParseError

Word = bytes

GENUS_TWO_LETTERS = {"a1": "a", "b1": "b", "a2": "c", "b2": "d"}
INDEXED_TOKEN = re.compile(r"([ab])(\d+)(')?")


@dataclass(frozen=True)
class Genus:
    """Genus of the closed orientable surface."""

    g: int

    def __post_init__(self) -> None:
        if self.g < 2:
            raise PreconditionError(f"Genus must be at least 2, got {self.g}.")

    @property
    def alphabet_size(self) -> int:
        return 4 * self.g

    @property
    def relator_length(self) -> int:
        return 4 * self.g

    @property
    def half_length(self) -> int:
        return 2 * self.g

    @property
    def cone_type_count(self) -> int:
        return 8 * self.g * (2 * self.g - 1)


@dataclass(frozen=True)
class Generator:
    """One letter of the symmetric generating set."""

    index: int
    letter: str
    base: str
    exponent: int


@dataclass(frozen=True)
class Alphabet:
    """Generators in their total order together with the inversion table."""

    genus: Genus
    generators: tuple[Generator, ...]
    inverse: bytes
    drawing_order: tuple[int, ...]
    _lookup: dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    @property
    def size(self) -> int:
        return len(self.generators)

    def letter(self, index: int) -> str:
        return self.generators[index].letter

    def index_of(self, base: str, exponent: int) -> int:
        suffix = "" if exponent > 0 else "'"
        return self._lookup[base + suffix]

    def parse(self, text: str) -> Word:
        """Parse a word string; raise ``WordParseError`` with the offending position."""

        text = text.strip()
        if text in {"", "e"}:
            return b""
        if self.genus.g == 2 and not any(ch.isdigit() for ch in text):
            letters = bytearray()
            for position, char in enumerate(text):
                index = self._lookup.get(char)
                if index is None:
                    raise WordParseError(f"Unknown letter {char!r} in {text!r}", position)
                letters.append(index)
            return bytes(letters)

        letters = bytearray()
        position = 0
        while position < len(text):
            match = INDEXED_TOKEN.match(text, position)
            if match is None:
                raise WordParseError(f"Cannot read a generator in {text!r}", position)
            number = int(match.group(2))
            if not 1 <= number <= self.genus.g:
                raise WordParseError(
                    f"Generator index {number} is outside 1..{self.genus.g}", position
                )
            exponent = -1 if match.group(3) else 1
            letters.append(self.index_of(f"{match.group(1)}{number}", exponent))
            position = match.end()
        return bytes(letters)

    def format(self, word: Word) -> str:
        return "".join(self.generators[index].letter for index in word)


@lru_cache(maxsize=None)
def build_alphabet(g: int) -> Alphabet:
    """Order the 4g generators by the catalogue rule for any genus.

    The order starts at ``b1^-1``; each next generator is the inverse of the relator
    letter that precedes the current one in the relator.
    """

    genus = Genus(g)
    relator: list[tuple[str, int]] = []
    for i in range(1, g + 1):
        relator += [(f"a{i}", 1), (f"b{i}", 1), (f"a{i}", -1), (f"b{i}", -1)]

    order = [("b1", -1)]
    while len(order) < genus.alphabet_size:
        base, exponent = order[-1]
        preceding = relator[relator.index((base, exponent)) - 1]
        order.append((preceding[0], -preceding[1]))

    generators = []
    lookup: dict[str, int] = {}
    for index, (base, exponent) in enumerate(order):
        if g == 2:
            short = GENUS_TWO_LETTERS[base]
            letter = short if exponent > 0 else short.upper()
        else:
            letter = base if exponent > 0 else f"{base}'"
        generators.append(Generator(index, letter, base, exponent))
        lookup[letter] = index
        lookup[base if exponent > 0 else f"{base}'"] = index

    position = {symbol: index for index, symbol in enumerate(order)}
    inverse = bytes(position[(base, -exponent)] for base, exponent in order)
    start = position[("a1", 1)]
    drawing = tuple((start + step) % len(order) for step in range(len(order)))
    return Alphabet(genus, tuple(generators), inverse, drawing, lookup)


def word_inverse(word: Word, inverse: bytes) -> Word:
    return bytes(inverse[letter] for letter in reversed(word))


@dataclass(frozen=True)
class RelatorTable:
    """Cyclic permutations of the relator and its inverse, indexed for lookups."""

    alphabet: Alphabet
    relator: Word
    permutations: tuple[Word, ...]
    subwords: frozenset[Word] = field(repr=False)
    twins: dict[Word, Word] = field(compare=False, repr=False)
    shortenings: dict[Word, Word] = field(compare=False, repr=False)

    @property
    def genus(self) -> Genus:
        return self.alphabet.genus

    @property
    def half(self) -> int:
        return self.alphabet.genus.half_length

    @property
    def inverse(self) -> bytes:
        return self.alphabet.inverse

    def parse(self, text: str) -> Word:
        return self.alphabet.parse(text)

    def format(self, word: Word) -> str:
        return self.alphabet.format(word)


@lru_cache(maxsize=None)
def build_relator_table(g: int = 2) -> RelatorTable:
    """Build the relator table of the genus-``g`` surface group."""

    alphabet = build_alphabet(g)
    relator = bytes(
        alphabet.index_of(f"{kind}{i}", exponent)
        for i in range(1, g + 1)
        for kind, exponent in (("a", 1), ("b", 1), ("a", -1), ("b", -1))
    )
    inverse_relator = word_inverse(relator, alphabet.inverse)
    length = alphabet.genus.relator_length
    half = alphabet.genus.half_length

    permutations = tuple(
        source[shift:] + source[:shift]
        for source in (relator, inverse_relator)
        for shift in range(length)
    )
    subwords = frozenset(
        permutation[:size] for permutation in permutations for size in range(1, half + 1)
    )
    twins = {
        permutation[:half]: word_inverse(permutation[half:], alphabet.inverse)
        for permutation in permutations
    }
    shortenings = {
        permutation[: half + 1]: word_inverse(permutation[half + 1 :], alphabet.inverse)
        for permutation in permutations
    }
    return RelatorTable(alphabet, relator, permutations, subwords, twins, shortenings)


@dataclass(frozen=True, order=True)
class GroupElement:
    """A group element held by its shortlex-least geodesic word."""

    length: int
    word: Word

    @classmethod
    def from_word(cls, word: Word) -> "GroupElement":
        return cls(len(word), word)

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(0, b"")

    @property
    def is_identity(self) -> bool:
        return self.length == 0

    def __len__(self) -> int:
        return self.length


def free_reduce(word: Word, table: RelatorTable) -> Word:
    """Cancel adjacent inverse pairs until none remain."""

    inverse = table.inverse
    stack = bytearray()
    for letter in word:
        if stack and stack[-1] == inverse[letter]:
            stack.pop()
        else:
            stack.append(letter)
    return bytes(stack)


def is_freely_reduced(word: Word, table: RelatorTable) -> bool:
    inverse = table.inverse
    return all(inverse[left] != right for left, right in zip(word, word[1:]))


def freely_reduced_words(length: int, table: RelatorTable) -> list[Word]:
    """Every freely reduced word with exactly ``length`` letters, sorted."""

    inverse = table.inverse
    letters = range(table.alphabet.size)
    words = [b""]
    for _ in range(length):
        words = [
            word + bytes((letter,))
            for word in words
            for letter in letters
            if not word or inverse[word[-1]] != letter
        ]
    return words


def _has_half(word: Word, table: RelatorTable) -> bool:
    half = table.half
    twins = table.twins
    return any(word[start : start + half] in twins for start in range(len(word) - half + 1))


def _shorter_in_place(word: Word, table: RelatorTable) -> Optional[Word]:
    """A shorter word equal to ``word``, from a cancelling pair or a long relator window."""

    inverse = table.inverse
    for start in range(len(word) - 1):
        if inverse[word[start]] == word[start + 1]:
            return word[:start] + word[start + 2 :]
    window = table.half + 1
    shortenings = table.shortenings
    for start in range(len(word) - window + 1):
        replacement = shortenings.get(word[start : start + window])
        if replacement is not None:
            return word[:start] + replacement + word[start + window :]
    return None


def _shorter_in_closure(word: Word, table: RelatorTable) -> Optional[Word]:
    """A shorter word found anywhere in the twin closure of ``word``, or None."""

    shorter = _shorter_in_place(word, table)
    if shorter is not None or not _has_half(word, table):
        return shorter
    for candidate in sorted(_twin_closure(word, table)):
        shorter = _shorter_in_place(candidate, table)
        if shorter is not None:
            return shorter
    return None


def is_geodesic_word(word: Word, table: RelatorTable) -> bool:
    """Geodesic iff no word reachable by half-relator swaps can be shortened.

    A freely reduced word without any half-relator window is geodesic outright.
    """

    if not is_freely_reduced(word, table):
        return False
    return _shorter_in_closure(word, table) is None


def extends_geodesically(word: Word, letter: int, table: RelatorTable) -> bool:
    """True when ``word`` followed by ``letter`` is geodesic, for geodesic ``word``."""

    if word and word[-1] == table.inverse[letter]:
        return False
    return _shorter_in_closure(word + bytes((letter,)), table) is None


def is_in_r(word: Word, table: RelatorTable) -> bool:
    return word in table.subwords


def twin(quadruple: Word, table: RelatorTable) -> Word:
    """Return the other half-relator word representing the same element."""

    partner = table.twins.get(quadruple)
    if partner is None:
        raise PreconditionError(
            f"{table.format(quadruple)!r} is not a half-relator word of length {table.half}."
        )
    return partner


def represents_identity(word: Word, table: RelatorTable) -> bool:
    """Dehn's algorithm for the word problem: shorten relator windows until stuck.

    Only long windows of the word itself are used, never half-relator swaps.
    """

    current = free_reduce(word, table)
    window = table.half + 1
    while current:
        for start in range(len(current) - window + 1):
            replacement = table.shortenings.get(current[start : start + window])
            if replacement is not None:
                current = free_reduce(
                    current[:start] + replacement + current[start + window :], table
                )
                break
        else:
            return False
    return True


def dehn_reduce(word: Word, table: RelatorTable) -> Word:
    """Shorten ``word`` until no word in its twin closure can be shortened.

    The result is a geodesic word for the same element.
    """

    current = free_reduce(word, table)
    while True:
        shorter = _shorter_in_closure(current, table)
        if shorter is None:
            return current
        current = free_reduce(shorter, table)


def _twin_closure(word: Word, table: RelatorTable) -> set[Word]:
    half = table.half
    twins = table.twins
    seen = {word}
    pending = [word]
    while pending:
        current = pending.pop()
        for start in range(len(current) - half + 1):
            partner = twins.get(current[start : start + half])
            if partner is None:
                continue
            swapped = current[:start] + partner + current[start + half :]
            if swapped not in seen:
                seen.add(swapped)
                pending.append(swapped)
    return seen


def geodesic_class(word: Word, table: RelatorTable) -> set[Word]:
    """All geodesic words for the element a geodesic ``word`` represents."""

    if not is_geodesic_word(word, table):
        raise PreconditionError(f"{table.format(word)!r} is not a geodesic word.")
    return _twin_closure(word, table)


def canonical_geodesic(word: Word, table: RelatorTable) -> Word:
    """Shortlex-least word in the twin closure of an already geodesic ``word``."""

    if not _has_half(word, table):
        return word
    return min(_twin_closure(word, table))


def normal_form(word: Word, table: RelatorTable) -> GroupElement:
    return GroupElement.from_word(canonical_geodesic(dehn_reduce(word, table), table))


def multiply(*elements: GroupElement | Word, table: RelatorTable) -> GroupElement:
    parts = (part.word if isinstance(part, GroupElement) else part for part in elements)
    return normal_form(b"".join(parts), table)


def inverse_element(element: GroupElement, table: RelatorTable) -> GroupElement:
    return normal_form(word_inverse(element.word, table.inverse), table)


def distance(x: GroupElement, y: GroupElement, table: RelatorTable) -> int:
    """Word metric ``d(x, y) = |x^-1 y|``."""

    return len(dehn_reduce(word_inverse(x.word, table.inverse) + y.word, table))


def parse_element(text: str, table: RelatorTable) -> GroupElement:
    return normal_form(table.parse(text), table)


def subwords_by_length(table: RelatorTable) -> dict[int, int]:
    counts: dict[int, int] = {}
    for word in table.subwords:
        counts[len(word)] = counts.get(len(word), 0) + 1
    return dict(sorted(counts.items()))
