"""Brute-force Cayley graph engine: balls, geodesic DAGs, cones and fingerprints."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

import networkx as nx
import numpy as np

from ..errors import PreconditionError, ResourceLimitError, VerificationError
from ..group.services import (
    GroupElement,
    RelatorTable,
    Word,
    canonical_geodesic,
    dehn_reduce,
    extends_geodesically,
    normal_form,
)

DEFAULT_MAX_ELEMENTS = 20_000_000


@dataclass(frozen=True)
class BallEntry:
    """Distance of an element and the edges reaching it from the previous sphere."""

    distance: int
    predecessors: tuple[tuple[Word, int], ...]


@dataclass(frozen=True)
class Ball:
    """All elements at distance at most ``radius`` from the identity."""

    radius: int
    spheres: tuple[tuple[Word, ...], ...]
    entries: dict[Word, BallEntry] = field(compare=False, repr=False)
    table: RelatorTable = field(compare=False, repr=False)

    def sphere_sizes(self) -> list[int]:
        return [len(sphere) for sphere in self.spheres]

    def sphere(self, n: int) -> tuple[Word, ...]:
        return self.spheres[n]

    def __contains__(self, element: GroupElement | Word) -> bool:
        word = element.word if isinstance(element, GroupElement) else element
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def distance_of(self, element: GroupElement | Word) -> int:
        word = element.word if isinstance(element, GroupElement) else element
        return self.entries[word].distance

    def elements(self) -> Iterator[GroupElement]:
        for sphere in self.spheres:
            for word in sphere:
                yield GroupElement.from_word(word)


@dataclass(frozen=True)
class Fingerprint:
    """Elements of a cone type up to a fixed length."""

    depth: int
    members: frozenset[Word]

    def __len__(self) -> int:
        return len(self.members)

    def __le__(self, other: "Fingerprint") -> bool:
        return self.depth == other.depth and self.members <= other.members


def _check_capacity(total: int, frontier: int, branching: int, cap: int, radius: int) -> None:
    estimate = total + frontier * branching
    if estimate > cap:
        raise ResourceLimitError(
            f"A ball of radius {radius} needs an estimated {estimate} elements, "
            f"above the cap of {cap}."
        )


def _successor_key(word: Word, letter: int, table: RelatorTable) -> Word:
    return normal_form(word + bytes((letter,)), table).word


def build_ball(
    radius: int, table: RelatorTable, *, max_elements: int = DEFAULT_MAX_ELEMENTS
) -> Ball:
    """Breadth-first search of the Cayley graph out to ``radius``.

    Distances come from discovery order, not from word lengths, so the ball can be
    used to check the geodesic criterion. Spheres are sorted shortlex.
    """

    if radius < 0:
        raise PreconditionError("Ball radius must be non-negative.")

    size = table.alphabet.size
    inverse = table.inverse
    spheres: list[tuple[Word, ...]] = [(b"",)]
    distances: dict[Word, int] = {b"": 0}
    predecessors: dict[Word, list[tuple[Word, int]]] = {b"": []}

    for n in range(radius):
        current = spheres[-1]
        branching = size if n == 0 else size - 1
        _check_capacity(len(distances), len(current), branching, max_elements, radius)
        fresh: list[Word] = []
        for word in current:
            for letter in range(size):
                if word and word[-1] == inverse[letter]:
                    continue
                key = _successor_key(word, letter, table)
                known = distances.get(key)
                if known is None:
                    distances[key] = n + 1
                    predecessors[key] = [(word, letter)]
                    fresh.append(key)
                elif known == n + 1:
                    predecessors[key].append((word, letter))
        fresh.sort()
        spheres.append(tuple(fresh))

    entries = {
        word: BallEntry(distances[word], tuple(edges)) for word, edges in predecessors.items()
    }
    return Ball(radius, tuple(spheres), entries, table)


def sphere_sizes(
    radius: int, table: RelatorTable, *, max_elements: int = DEFAULT_MAX_ELEMENTS
) -> list[int]:
    """Sphere sizes out to ``radius`` keeping only two spheres in memory."""

    if radius < 0:
        raise PreconditionError("Ball radius must be non-negative.")

    size = table.alphabet.size
    inverse = table.inverse
    previous: set[Word] = set()
    current: set[Word] = {b""}
    sizes = [1]
    total = 1
    for n in range(radius):
        branching = size if n == 0 else size - 1
        _check_capacity(total, len(current), branching, max_elements, radius)
        fresh: set[Word] = set()
        for word in current:
            for letter in range(size):
                if word and word[-1] == inverse[letter]:
                    continue
                key = _successor_key(word, letter, table)
                if key not in previous and key not in current:
                    fresh.add(key)
        previous, current = current, fresh
        sizes.append(len(fresh))
        total += len(fresh)
    return sizes


def geodesic_counts(ball: Ball) -> dict[Word, int]:
    """Number of geodesic words reaching each element of the ball."""

    counts: dict[Word, int] = {b"": 1}
    for sphere in ball.spheres[1:]:
        for word in sphere:
            counts[word] = sum(counts[parent] for parent, _ in ball.entries[word].predecessors)
    return counts


def geodesic_dag(ball: Ball) -> nx.DiGraph:
    """The ball's geodesic edges as a directed graph labeled by generator."""

    graph = nx.DiGraph()
    for word, entry in ball.entries.items():
        graph.add_node(word, distance=entry.distance, label=ball.table.format(word) or "e")
        for parent, letter in entry.predecessors:
            graph.add_edge(parent, word, generator=ball.table.alphabet.letter(letter))
    return graph


def ball_to_dot(ball: Ball, *, name: str = "ball") -> str:
    """Render the geodesic DAG of a ball in Graphviz DOT syntax."""

    graph = geodesic_dag(ball)
    ordered = sorted(graph.nodes, key=lambda word: (len(word), word))
    ids = {node: index for index, node in enumerate(ordered)}
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for node in ordered:
        data = graph.nodes[node]
        lines.append(f'  n{ids[node]} [label="{data["label"]}", distance={data["distance"]}];')
    for source, target in sorted(graph.edges, key=lambda edge: (ids[edge[0]], ids[edge[1]])):
        generator = graph.edges[source, target]["generator"]
        lines.append(f'  n{ids[source]} -> n{ids[target]} [label="{generator}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cone_descendants(graph: nx.DiGraph, element: GroupElement, depth: int) -> set[Word]:
    """Elements reachable from ``element`` by at most ``depth`` outward DAG edges."""

    reached = nx.single_source_shortest_path_length(graph, element.word, cutoff=depth)
    return set(reached)


def cone_membership(x: GroupElement, z: GroupElement, table: RelatorTable) -> bool:
    """True when ``d(e, xz) = |x| + |z|``."""

    return len(dehn_reduce(x.word + z.word, table)) == x.length + z.length


def fingerprint(x: GroupElement, depth: int, table: RelatorTable) -> Fingerprint:
    """Elements ``z`` with ``|z| <= depth`` in the cone type of ``x``."""

    if depth < 1:
        raise PreconditionError("Fingerprint depth must be at least 1.")

    size = table.alphabet.size
    base = x.word
    members: set[Word] = {b""}
    frontier = [b""]
    for _ in range(depth):
        extended: list[Word] = []
        for suffix in frontier:
            path = base + suffix
            for letter in range(size):
                if extends_geodesically(path, letter, table):
                    extended.append(suffix + bytes((letter,)))
        members.update(canonical_geodesic(suffix, table) for suffix in extended)
        frontier = extended
    return Fingerprint(depth, frozenset(members))


def enumerate_geodesics(
    y: GroupElement,
    table: RelatorTable,
    *,
    ball: Optional[Ball] = None,
    max_paths: int = DEFAULT_MAX_ELEMENTS,
    memo: Optional[dict[Word, list[Word]]] = None,
) -> list[Word]:
    """All geodesic words from the identity to ``y``, sorted.

    Uses the predecessor lists of ``ball`` when it contains ``y``; otherwise walks
    the geodesic DAG backwards on demand. Passing the same ``memo`` to several
    calls shares the geodesics found for common elements.
    """

    if ball is not None and y.word in ball:
        def parents(word: Word) -> list[tuple[Word, int]]:
            return list(ball.entries[word].predecessors)
    else:
        inverse = table.inverse

        def parents(word: Word) -> list[tuple[Word, int]]:
            found = []
            for letter in range(table.alphabet.size):
                previous = normal_form(word + bytes((inverse[letter],)), table)
                if previous.length == len(word) - 1:
                    found.append((previous.word, letter))
            return found

    if memo is None:
        memo = {}
    memo.setdefault(b"", [b""])

    def paths_to(word: Word) -> list[Word]:
        cached = memo.get(word)
        if cached is not None:
            return cached
        paths: list[Word] = []
        for parent, letter in parents(word):
            tail = bytes((letter,))
            paths.extend(path + tail for path in paths_to(parent))
            if len(paths) > max_paths:
                raise ResourceLimitError(
                    f"More than {max_paths} geodesics reach {table.format(y.word)!r}."
                )
        memo[word] = paths
        return paths

    return sorted(paths_to(y.word))


def quadruple_occurrences(
    y: GroupElement, table: RelatorTable, *, ball: Optional[Ball] = None
) -> set[tuple[Word, int, Word]]:
    """Half-relator windows of every geodesic word of ``y`` with 1-based positions.

    Two windows of the same word may share at most one letter; anything else is
    reported as a verification failure.
    """

    half = table.half
    occurrences: set[tuple[Word, int, Word]] = set()
    for word in enumerate_geodesics(y, table, ball=ball):
        starts = [
            start for start in range(len(word) - half + 1) if word[start : start + half] in table.twins
        ]
        for left, right in zip(starts, starts[1:]):
            if half - (right - left) > 1:
                raise VerificationError(
                    f"Half-relator windows at {left + 1} and {right + 1} of "
                    f"{table.format(word)!r} share more than one letter."
                )
        occurrences.update((word, start + 1, word[start : start + half]) for start in starts)
    return occurrences


def random_geodesic_word(length: int, rng: np.random.Generator, table: RelatorTable) -> Word:
    """Uniform choice among geodesic extensions at every step."""

    word = b""
    size = table.alphabet.size
    while len(word) < length:
        options = [letter for letter in range(size) if extends_geodesically(word, letter, table)]
        word += bytes((int(rng.choice(options)),))
    return word


def random_reduced_word(length: int, rng: np.random.Generator, table: RelatorTable) -> Word:
    """A uniformly random freely reduced word, geodesic or not."""

    inverse = table.inverse
    size = table.alphabet.size
    word = b""
    while len(word) < length:
        letter = int(rng.integers(size))
        if not word or inverse[word[-1]] != letter:
            word += bytes((letter,))
    return word


def random_elements(
    count: int, max_length: int, rng: np.random.Generator, table: RelatorTable
) -> list[GroupElement]:
    """Random elements with lengths drawn uniformly from ``0..max_length``."""

    lengths = rng.integers(0, max_length + 1, size=count)
    return [
        GroupElement.from_word(canonical_geodesic(random_geodesic_word(int(n), rng, table), table))
        for n in lengths
    ]