from __future__ import annotations

import json

from conetypes.cli import build_cli
from conetypes.matrix.services import PRINTED_BLOCKS_PATH
from conetypes.models import SystemLog


def invoke_json(runner, *args):
    result = runner.invoke(args=list(args))
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


def test_normalize_command(runner):
    """normalize prints the normal form and its length."""

    payload = invoke_json(runner, "normalize", "aAbaBAd")
    assert payload["length"] == 3
    assert payload["input"] == "aAbaBAd"

    text = runner.invoke(args=["normalize", "aA", "--format", "text"])
    assert text.exit_code == 0
    assert text.output.strip() == ""


def test_distance_and_geodesics_commands(runner):
    """distance measures word length and geodesics lists a whole class."""

    assert invoke_json(runner, "distance", "abAB")["distance"] == 4
    assert invoke_json(runner, "distance", "a", "ab")["distance"] == 1
    payload = invoke_json(runner, "geodesics", "dcDCAdc")
    assert payload["count"] == 3
    assert payload["normal_form"] == "abABAdc"


def test_parse_errors_exit_with_code_two(runner, app):
    """An unknown letter exits 2 and is logged as an error."""

    result = runner.invoke(args=["normalize", "axb"])
    assert result.exit_code == 2
    assert "position 1" in result.output

    with app.app_context():
        entry = SystemLog.query.filter_by(component="Group", level="error").first()
        assert entry is not None
        assert entry.technical_details.startswith("WordParseError")


def test_precondition_errors_exit_with_code_one(runner):
    """Genus 1 is a usage error."""

    result = runner.invoke(args=["normalize", "a", "--genus", "1"])
    assert result.exit_code == 1


def test_conetype_command(runner):
    """Automaton and oracle classification agree on known words."""

    payload = invoke_json(runner, "conetype", "abcd")
    assert payload["id"] == 19
    assert payload["representative"] == "cd"
    assert payload["length_class"] == "doubles"
    assert payload["method"] == "automaton"

    oracle = invoke_json(runner, "conetype", "bc", "--oracle")
    assert oracle["id"] == 6
    assert oracle["method"] == "oracle"

    identity = invoke_json(runner, "conetype", "e")
    assert identity["id"] == 0 and identity["length_class"] == "identity"

    shortcut = invoke_json(runner, "conetype", "abABDabA")
    assert shortcut["id"] == invoke_json(runner, "conetype", "abABDabA", "--oracle")["id"]


def test_table_command_formats(runner):
    """The table prints as JSON or CSV."""

    payload = invoke_json(runner, "table")
    assert payload["count"] == 48
    assert payload["types"][42]["representative"] == "abAB"

    csv_result = runner.invoke(args=["table", "--format", "csv"])
    lines = csv_result.output.splitlines()
    assert len(lines) == 50
    assert lines[0] == "id,representative,length_class,successors"


def test_matrix_printed_blocks(runner):
    """The computed blocks differ from the printed ones on two rows."""

    result = runner.invoke(args=["matrix", "--format", "paper-blocks"])
    assert result.exit_code == 0
    printed = PRINTED_BLOCKS_PATH.read_text(encoding="utf-8").splitlines()
    computed = result.output.splitlines()
    assert len(printed) == len(computed)
    assert sum(1 for a, b in zip(printed, computed) if a != b) == 2

    payload = invoke_json(runner, "matrix")
    assert payload["order"] == 48
    assert payload["class_sizes"] == [8, 16, 16, 8]


def test_verify_command(runner, tmp_path):
    """verify passes with the shipped errata and exits 4 without them."""

    payload = invoke_json(runner, "verify")
    assert payload["passed"] is True
    assert len(payload["diff"]) == 3

    result = runner.invoke(args=["verify", "--errata", str(tmp_path / "none.json")])
    assert result.exit_code == 4
    assert "3 unexplained differences" in result.output


def test_verify_with_a_malformed_fixture(runner, tmp_path):
    """A broken fixture is a verification failure."""

    fixture = tmp_path / "blocks.txt"
    fixture.write_text("[M1,1]\n1 1\n", encoding="utf-8")
    result = runner.invoke(args=["verify", "--fixture", str(fixture)])
    assert result.exit_code == 4


def test_spectral_commands(runner):
    """primitivity, perron and growth report the known constants."""

    certificate = invoke_json(runner, "primitivity")
    assert certificate["k"] == 5
    assert certificate["max_entry"] == 1500

    perron = runner.invoke(args=["perron", "--format", "text"])
    assert perron.exit_code == 0
    assert perron.output.strip().startswith("6.99497723")

    with_ratio = invoke_json(runner, "perron", "--radius", "3")
    assert abs(with_ratio["sphere_ratio"] - 7.0) < 1e-12

    growth = invoke_json(runner, "growth", "4")
    assert [row["count"] for row in growth["rows"]] == [1, 8, 56, 392, 2744]

    csv_result = runner.invoke(args=["growth", "2", "--format", "csv"])
    assert csv_result.output.splitlines() == ["n,count", "0,1", "1,8", "2,56"]


def test_oracle_commands(runner):
    """ball, spheres and quadruples expose the brute-force oracle."""

    ball = invoke_json(runner, "ball", "--radius", "4")
    assert ball["sphere_sizes"] == [1, 8, 56, 392, 2736]
    assert ball["geodesic_words"] == [1, 8, 56, 392, 2744]

    dot = runner.invoke(args=["ball", "--radius", "1", "--format", "dot"])
    assert dot.output.startswith("digraph ball {")
    assert dot.output.count("->") == 8

    assert invoke_json(runner, "spheres", "--radius", "3")["sphere_sizes"] == [1, 8, 56, 392]

    quadruples = invoke_json(runner, "quadruples", "abABAdc")
    positions = {(row["word"], row["position"]) for row in quadruples["occurrences"]}
    assert ("abABAdc", 1) in positions and ("abABAdc", 4) in positions


def test_ball_cap_exits_with_code_three(app):
    """Hitting the element cap exits 3."""

    app.config["CONETYPE_MAX_BALL"] = 100
    result = app.test_cli_runner().invoke(args=["spheres", "--radius", "5"])
    assert result.exit_code == 3


def test_mu_with_the_ones_system(runner):
    """The all-ones system counts geodesics and the evaluators agree."""

    payload = invoke_json(runner, "mu", "ones", "babAB")
    assert payload["cone_type"] == 7
    assert payload["agree"] is True
    assert payload["values"] == {"recursive": [2], "geodesic": [2], "matrix": [2]}


def test_mu_with_a_random_vector_system(runner):
    """Random systems with vector spaces agree exactly."""

    payload = invoke_json(
        runner,
        "mu",
        "random",
        "abABd",
        "--y",
        "abAB",
        "--dims",
        "singles=2,doubles=1,triples=1,quadruples=3",
        "--vector",
        "1,-1/2,3",
        "--seed",
        "4",
    )
    assert payload["agree"] is True
    assert payload["cone_type"] == 42
    values = payload["values"]
    assert values["recursive"] == values["geodesic"] == values["matrix"]
    assert len(values["recursive"]) == 2


def test_mu_single_method_text(runner):
    """One evaluator can be chosen and printed as plain text."""

    result = runner.invoke(
        args=["mu", "ones", "b", "--method", "geodesic", "--format", "text"]
    )
    assert result.exit_code == 0
    assert result.output.strip() == "1"


def test_mu_with_a_missing_file(runner, tmp_path):
    """A system path that does not exist is a usage error."""

    result = runner.invoke(args=["mu", str(tmp_path / "absent.json"), "b"])
    assert result.exit_code == 1


def test_system_command_round_trips_through_mu(runner, tmp_path):
    """A dumped system can be fed back to mu."""

    result = runner.invoke(args=["system", "--seed", "9"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert len(payload["blocks"]) == 328

    path = tmp_path / "system.json"
    path.write_text(result.output, encoding="utf-8")
    from_file = invoke_json(runner, "mu", str(path), "bab")
    random = invoke_json(runner, "mu", "random", "bab", "--seed", "9")
    assert from_file["values"] == random["values"]


def test_selfcheck_at_desk_scale(runner):
    """A reduced selfcheck passes every check."""

    result = runner.invoke(
        args=[
            "selfcheck",
            "--radius",
            "3",
            "--sample-size",
            "10",
            "--systems",
            "2",
            "--mult-radius",
            "2",
            "--nesting-samples",
            "10",
            "--format",
            "json",
        ]
    )
    assert result.exit_code == 0, result.output
    checks = json.loads(result.output)["checks"]
    assert len(checks) == 9
    assert all(check["passed"] for check in checks)


def test_logs_command(runner):
    """Command outcomes are stored and can be read back."""

    runner.invoke(args=["distance", "ab"])
    payload = invoke_json(runner, "logs", "--component", "Group")
    assert payload["logs"]
    assert payload["logs"][0]["action"] == "distance"
    assert payload["latest"] is not None


def test_group_main_maps_usage_errors(app):
    """The top-level group reports usage errors with code 1."""

    cli = build_cli(create_app=lambda: app)
    assert cli.main(args=["normalize"]) == 1
    assert cli.main(args=["normalize", "ax"]) == 2
    assert cli.main(args=["distance", "ab"]) == 0
