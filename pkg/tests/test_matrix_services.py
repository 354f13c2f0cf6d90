from __future__ import annotations

import numpy as np
import pytest

from conetypes.cones.services import oracle_transitions, type_word_counts
from conetypes.errors import FixtureError, NonConvergenceError, PreconditionError, PrimitivityError
from conetypes.matrix.services import (
    PRINTED_BLOCKS_PATH,
    ConeMatrix,
    MatrixDiff,
    apply_errata,
    diff_matrices,
    format_blocks,
    growth_counts,
    growth_rate_estimate,
    integer_power,
    load_errata,
    load_fixture,
    matrix_from_transitions,
    parse_blocks,
    perron,
    primitivity_certificate,
    require_primitive,
    to_csv,
    verify_against_printed,
)

ERRATA = {
    MatrixDiff(21, 24, 0, 1),
    MatrixDiff(24, 21, 1, 0),
    MatrixDiff(24, 22, 0, 1),
}


def test_matrix_shape_and_column_sums(matrix):
    """Every short type has 7 successors and every half-relator type 6."""

    assert matrix.order == 48
    assert matrix.class_sizes == (8, 16, 16, 8)
    sums = matrix.column_sums()
    assert set(sums[:40].tolist()) == {7}
    assert set(sums[40:].tolist()) == {6}
    assert int(matrix.entries.sum()) == 328


def test_matrix_block_structure(matrix):
    """Doubles feed triples through an identity block; six blocks vanish."""

    assert np.array_equal(matrix.block(3, 2), np.eye(16, dtype=np.uint8))
    for i, j in [(3, 1), (4, 1), (4, 2), (3, 3), (3, 4), (4, 4)]:
        assert not matrix.block(i, j).any()


def test_single_letter_column(matrix):
    """The type of a steps to five singles and two doubles."""

    column = matrix.entries[:, 1]
    assert int(column[:8].sum()) == 5
    assert int(column[8:24].sum()) == 2
    assert matrix.entry(11, 2) == 1


def test_oracle_matrix_matches(matrix, cones):
    """The fingerprint oracle rebuilds the same matrix."""

    rebuilt = matrix_from_transitions(oracle_transitions(cones), cones)
    assert np.array_equal(rebuilt.entries, matrix.entries)


def test_verify_against_the_printed_matrix(matrix):
    """The printed matrix differs in exactly the three known entries."""

    report = verify_against_printed(matrix)
    assert report.passed
    assert set(report.diff) == ERRATA
    assert report.unexplained == ()
    assert report.serialize()["passed"] is True


def test_verify_without_errata_fails(matrix, tmp_path):
    """Unlisted differences and stale errata both fail verification."""

    missing = tmp_path / "none.json"
    report = verify_against_printed(matrix, errata_path=missing)
    assert not report.passed
    assert set(report.unexplained) == ERRATA

    computed = tmp_path / "computed.txt"
    computed.write_text(format_blocks(matrix), encoding="utf-8")
    assert verify_against_printed(matrix, fixture_path=computed, errata_path=missing).passed
    stale = verify_against_printed(matrix, fixture_path=computed)
    assert not stale.passed
    assert set(stale.missing_errata) == ERRATA


def test_applying_errata_recovers_the_computed_matrix(matrix):
    """Printed entries corrected by the errata equal the computed ones."""

    printed = load_fixture(matrix)
    corrected = apply_errata(printed, load_errata())
    assert np.array_equal(corrected.entries, matrix.entries)


def test_diff_is_symmetric(matrix):
    """Swapping the operands swaps computed and printed."""

    printed = load_fixture(matrix)
    forward = diff_matrices(matrix, printed)
    backward = diff_matrices(printed, matrix)
    assert {(d.row, d.column, d.printed, d.computed) for d in forward} == {
        (d.row, d.column, d.computed, d.printed) for d in backward
    }


def test_fixture_text_round_trips(matrix):
    """Formatting the parsed fixture reproduces the file."""

    text = PRINTED_BLOCKS_PATH.read_text(encoding="utf-8")
    assert format_blocks(load_fixture(matrix)) == text


def test_computed_blocks_differ_in_two_lines(matrix):
    """Only rows 21 and 24 of the doubles block change."""

    printed = PRINTED_BLOCKS_PATH.read_text(encoding="utf-8").splitlines()
    computed = format_blocks(matrix).splitlines()
    assert len(printed) == len(computed)
    assert sum(1 for a, b in zip(printed, computed) if a != b) == 2


@pytest.mark.parametrize(
    "text",
    [
        "[M1,1]\n1 2\n",
        "1 0 1\n",
        "[M1,1]\n1 0\n",
        "[M9,1]\n",
        "[Mx]\n",
        "[M1,2]\nI\n",
    ],
)
def test_malformed_fixture_text(text):
    """Bad values, stray rows, wrong shapes and bad headers are rejected."""

    with pytest.raises(FixtureError):
        parse_blocks(text, (8, 16, 16, 8))


def test_missing_fixture(matrix, tmp_path):
    """A fixture path that does not exist is a fixture error."""

    with pytest.raises(FixtureError):
        load_fixture(matrix, tmp_path / "absent.txt")


def test_malformed_errata(tmp_path):
    """Errata entries need all four fields."""

    path = tmp_path / "errata.json"
    path.write_text('{"entries": [{"row": 1}]}', encoding="utf-8")
    with pytest.raises(FixtureError):
        load_errata(path)


def test_primitivity_certificate(matrix):
    """M^5 is the first positive power and the staged row claims hold."""

    certificate = primitivity_certificate(matrix)
    assert certificate.k == 5
    assert certificate.passed
    assert certificate.first_failure is None
    assert [certificate.leading_positive_rows[p] for p in (2, 3, 4, 5)] == [8, 24, 40, 48]
    assert certificate.max_entry == 1500
    assert int(integer_power(matrix, 5).min()) > 0
    require_primitive(certificate)


def test_identity_matrix_is_not_primitive():
    """No power of the identity matrix is positive."""

    identity = ConeMatrix(np.eye(48, dtype=np.uint8), (8, 16, 16, 8))
    certificate = primitivity_certificate(identity, max_power=10)
    assert not certificate.primitive
    assert certificate.first_failure == (2, 1, 2)
    assert certificate.max_entry is None
    with pytest.raises(PrimitivityError):
        require_primitive(certificate)


def test_integer_power_refuses_overflow(matrix):
    """Large powers are refused rather than wrapped."""

    with pytest.raises(PreconditionError):
        integer_power(matrix, 40)


def test_perron_root(matrix):
    """Power iteration settles on r close to 6.99498 with positive vectors."""

    result = perron(matrix, tol=1e-12, seed=3)
    assert result.r == pytest.approx(6.9949772326, abs=1e-8)
    assert result.left_value == pytest.approx(result.r, abs=1e-8)
    assert (result.right_vector > 0).all()
    assert (result.left_vector > 0).all()
    assert result.right_vector.max() == pytest.approx(1.0)
    assert result.restart_gap <= 1e-8
    assert result.residual <= 1e-12
    assert len(result.residual_history) == result.iterations


def test_perron_matches_sphere_growth(matrix, ball):
    """The last sphere ratio of the ball is within 5% of r."""

    r = perron(matrix).r
    assert growth_rate_estimate(ball.sphere_sizes()) == pytest.approx(r, rel=0.05)


def test_perron_non_convergence(matrix):
    """One step is never enough."""

    with pytest.raises(NonConvergenceError):
        perron(matrix, max_iter=1)


def test_growth_counts(matrix):
    """The automaton counts geodesic words sphere by sphere."""

    rows = growth_counts(matrix, 7)
    assert [row.count for row in rows] == [1, 8, 56, 392, 2744, 19192, 134248, 939064]
    assert rows[0].vector == (0,) * 48
    assert rows[1].vector == (1,) * 8 + (0,) * 40
    assert all(len(row.vector) == 48 for row in rows)
    with pytest.raises(PreconditionError):
        growth_counts(matrix, -1)


def test_growth_vectors_match_the_ball(matrix, ball, cones):
    """Per-type word counts on the ball equal the automaton vectors."""

    per_type = type_word_counts(ball, cones)
    for row in growth_counts(matrix, 5):
        assert tuple(per_type[row.n][1:]) == row.vector


def test_csv_export(matrix):
    """The CSV has a header row and one row per type."""

    lines = to_csv(matrix).splitlines()
    assert len(lines) == 49
    assert lines[0].split(",")[:3] == ["successor", "B", "a"]
    assert lines[1].split(",")[0] == "B"


def test_growth_rate_estimate_needs_two_spheres():
    """A single sphere gives no ratio."""

    with pytest.raises(PreconditionError):
        growth_rate_estimate([1])
    assert growth_rate_estimate([8, 56]) == 7.0
