from __future__ import annotations

import numpy as np
import pytest

from conetypes.errors import PreconditionError, WordParseError
from conetypes.group.services import (
    GroupElement,
    Genus,
    build_alphabet,
    build_relator_table,
    canonical_geodesic,
    dehn_reduce,
    distance,
    free_reduce,
    freely_reduced_words,
    geodesic_class,
    inverse_element,
    is_geodesic_word,
    is_in_r,
    multiply,
    normal_form,
    parse_element,
    represents_identity,
    subwords_by_length,
    twin,
    word_inverse,
)
from conetypes.oracle.services import random_reduced_word


def words(table, *texts):
    return [table.parse(text) for text in texts]


def test_genus_two_generator_order(table):
    """Generators follow the table order b^-1 < a < d < c^-1 < d^-1 < c < b < a^-1."""

    assert "".join(generator.letter for generator in table.alphabet.generators) == "BadCDcbA"
    assert table.format(table.relator) == "abABcdCD"


def test_inverse_is_a_fixed_point_free_involution():
    """Every alphabet pairs each letter with a different inverse."""

    for g in (2, 3, 4):
        inverse = build_alphabet(g).inverse
        assert len(inverse) == 4 * g
        assert all(inverse[inverse[i]] == i and inverse[i] != i for i in range(4 * g))


def test_general_genus_alphabet_starts_at_b1_inverse():
    """Higher genus alphabets use indexed letters and start at b1 inverse."""

    alphabet = build_alphabet(3)
    assert alphabet.letter(0) == "b1'"
    assert alphabet.letter(alphabet.drawing_order[0]) == "a1"
    table = build_relator_table(3)
    assert table.format(table.relator) == "a1b1a1'b1'a2b2a2'b2'a3b3a3'b3'"


def test_genus_must_be_at_least_two():
    """Genus 1 is rejected."""

    with pytest.raises(PreconditionError):
        Genus(1)


def test_parse_reports_the_offending_position(table):
    """Unknown letters raise a parse error naming their position."""

    with pytest.raises(WordParseError) as error:
        table.parse("ax")
    assert error.value.position == 1
    assert "position 1" in str(error.value)


def test_parse_accepts_identity_and_indexed_letters(table):
    """The empty word, e and indexed genus-2 letters all parse."""

    assert table.parse("") == b""
    assert table.parse("e") == b""
    assert table.parse("a1b1a2'") == table.parse("abC")


def test_free_reduce_examples(table):
    """Adjacent inverse pairs cancel, cascading inward."""

    assert free_reduce(table.parse("aA"), table) == b""
    assert free_reduce(table.parse("abBa"), table) == table.parse("aa")
    assert free_reduce(table.parse("abc"), table) == table.parse("abc")


def test_geodesic_criterion_examples(table):
    """Long relator pieces and cancellations are not geodesic."""

    assert is_geodesic_word(table.parse("abABAdc"), table)
    assert not is_geodesic_word(table.parse("abABcdC"), table)
    assert not is_geodesic_word(table.parse("aA"), table)


def test_membership_in_r(table):
    """Relator subwords are in R; the empty word is not."""

    assert is_in_r(table.parse("bABc"), table)
    assert not is_in_r(table.parse("bABa"), table)
    assert not is_in_r(b"", table)


def test_subword_counts_by_length(table):
    """R has 8 letters, 16 pairs, 16 triples and 16 half-relator words."""

    assert subwords_by_length(table) == {1: 8, 2: 16, 3: 16, 4: 16}


def test_twin_examples(table):
    """Twins swap the two halves of an octagon."""

    assert table.format(twin(table.parse("abAB"), table)) == "dcDC"
    assert table.format(twin(table.parse("BAdc"), table)) == "ABcd"


def test_twin_is_an_involution_on_the_same_element(table):
    """Every half-relator word and its twin are distinct words of one element."""

    for quadruple in table.twins:
        partner = twin(quadruple, table)
        assert partner != quadruple
        assert is_in_r(partner, table)
        assert twin(partner, table) == quadruple
        assert normal_form(quadruple, table) == normal_form(partner, table)


def test_twin_rejects_short_words(table):
    """Only half-relator words have twins."""

    with pytest.raises(PreconditionError):
        twin(table.parse("ab"), table)


def test_normal_form_examples(table):
    """The relator is trivial and a known rewrite lands on a shorter word."""

    assert normal_form(table.relator, table).is_identity
    assert normal_form(table.parse("baBAd"), table) == normal_form(table.parse("cdC"), table)
    assert normal_form(table.parse("baBAd"), table).length == 3
    assert normal_form(table.parse("a"), table) == GroupElement.from_word(table.parse("a"))


def test_every_cyclic_permutation_is_trivial(table):
    """All stored relator permutations evaluate to the identity."""

    assert len(table.permutations) == 16
    assert all(normal_form(permutation, table).is_identity for permutation in table.permutations)


def test_geodesic_class_of_the_two_quadruple_element(table):
    """The element abABAdc has exactly three geodesic words."""

    found = geodesic_class(table.parse("abABAdc"), table)
    assert found == set(words(table, "abABAdc", "dcDCAdc", "abAABcd"))
    assert geodesic_class(table.parse("a"), table) == {table.parse("a")}


def test_geodesic_class_rejects_non_geodesic_words(table):
    """Only geodesic words have a geodesic class."""

    with pytest.raises(PreconditionError):
        geodesic_class(table.parse("aA"), table)


def test_canonical_geodesic_is_shortlex_least(table):
    """Each word of a class canonicalizes to the same least word."""

    for word in words(table, "abABAdc", "dcDCAdc", "abAABcd"):
        assert canonical_geodesic(word, table) == table.parse("abABAdc")


def test_distance_and_inverses(table):
    """The metric is left invariant and inverses cancel."""

    x = parse_element("abABAdc", table)
    assert distance(GroupElement.identity(), parse_element("abAB", table), table) == 4
    assert distance(x, x, table) == 0
    assert multiply(x, inverse_element(x, table), table=table).is_identity
    assert distance(parse_element("a", table), parse_element("ab", table), table) == 1


def test_shortcut_hidden_behind_a_twin(table):
    """abABDabA only shrinks after abAB is swapped for dcDC."""

    word = table.parse("abABDabA")
    assert not is_geodesic_word(word, table)
    assert len(dehn_reduce(word, table)) == 6
    shortened = normal_form(word, table)
    assert shortened.length == 6
    assert distance(GroupElement.identity(), shortened, table) == 6
    assert distance(GroupElement.identity(), GroupElement.from_word(word), table) == 6
    assert represents_identity(word + word_inverse(shortened.word, table.inverse), table)


def test_represents_identity_examples(table):
    """Relators and their conjugates are trivial; generators and halves are not."""

    assert represents_identity(table.parse("abABcdCD"), table)
    assert represents_identity(table.parse("aabABcdCDA"), table)
    assert not represents_identity(table.parse("ab"), table)
    assert not represents_identity(table.parse("abAB"), table)


def test_freely_reduced_word_counts(table):
    """There are 8 * 7^(n - 1) freely reduced words of length n."""

    assert freely_reduced_words(0, table) == [b""]
    for length in range(1, 5):
        found = freely_reduced_words(length, table)
        assert len(found) == 8 * 7 ** (length - 1)
        assert found == sorted(found)


def test_geodesic_words_match_ball_distances(table, ball):
    """A reduced word up to length 5 passes the criterion exactly when its length is the distance."""

    for length in range(6):
        for word in freely_reduced_words(length, table):
            element = normal_form(word, table)
            assert ball.distance_of(element) == element.length
            assert is_geodesic_word(word, table) == (element.length == length), table.format(word)


def test_long_reductions_stay_in_the_same_element(table):
    """Reducing a long random word keeps its element, its parity and lands on a geodesic."""

    rng = np.random.default_rng(3)
    for _ in range(200):
        word = random_reduced_word(int(rng.integers(6, 21)), rng, table)
        reduced = dehn_reduce(word, table)
        assert represents_identity(word + word_inverse(reduced, table.inverse), table)
        assert is_geodesic_word(reduced, table)
        assert len(reduced) <= len(word)
        assert (len(word) - len(reduced)) % 2 == 0
