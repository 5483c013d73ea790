"""
Tests for the agw command line.
"""

import json

import pytest

from asyncgames.cli import EXIT_INVALID, EXIT_NEGATIVE, EXIT_OK, main, parse_args


@pytest.fixture
def agw(fixtures_dir, capsys):
    """Run agw with fixture names resolved; return (status, stdout, stderr)."""
    def run(*argv):
        resolved = [str(fixtures_dir / a) if "." in a and not a.startswith("-") and "=" not in a else a
                    for a in argv]
        with pytest.raises(SystemExit) as info:
            main(resolved)
        out, err = capsys.readouterr()
        return info.value.code, out, err

    return run


def test_commands_need_files():
    with pytest.raises(SystemExit):
        parse_args(["innocence"])


def test_check_game_passes_on_booleans(agw):
    status, out, _ = agw("check-game", "bb.env")
    assert status == EXIT_OK
    assert "Verdict: pass" in out


def test_check_game_reports_a_missing_face(agw):
    status, out, _ = agw("check-game", "no-cube.ag", "--json")
    assert status == EXIT_NEGATIVE
    data = json.loads(out)
    assert data["passed"] is False
    cube = data["results_by_check"]["cube"][0]
    assert cube["passed"] is False
    assert cube["witness"]["path"] == ["x0a", "xab", "xabc"]


def test_check_game_on_an_event_structure(agw):
    status, _, _ = agw("check-game", "b.es", "--format", "markdown")
    assert status == EXIT_OK


def test_missing_file_is_invalid(agw):
    status, out, err = agw("check-game", "missing.env")
    assert status == EXIT_INVALID
    assert out == ""
    assert err.startswith("error:")


def test_unsupported_suffix_is_invalid(agw):
    status, _, err = agw("check-game", "notes.txt")
    assert status == EXIT_INVALID
    assert "Unsupported input file" in err


def test_check_strategy(agw):
    status, out, _ = agw("check-strategy", "and_p.str")
    assert status == EXIT_OK
    assert "Plays:" in out


def test_innocence_of_sigma(agw):
    status, out, _ = agw("innocence", "bb.env", "sigma.str")
    assert status == EXIT_NEGATIVE
    assert "Innocent: no" in out
    assert "Asynchronous: no" in out
    row = next(line for line in out.splitlines() if line.startswith("root=after"))
    assert "FAIL" in row


def test_innocence_of_a_single_switching(agw):
    status, out, _ = agw("innocence", "sigma.str", "--switching", "root=before")
    assert status == EXIT_OK
    assert "root=before" in out
    assert "root=after" not in out


def test_unknown_switching_is_invalid(agw):
    status, _, _ = agw("innocence", "sigma.str", "--switching", "L=before")
    assert status == EXIT_INVALID


def test_innocence_of_independent_answers(agw):
    status, out, _ = agw("innocence", "indep.str", "--parallel", "--workers", "2")
    assert status == EXIT_OK
    assert "Innocent: yes" in out


def test_innocence_with_skipped_criteria_is_undetermined(agw):
    status, out, _ = agw("innocence", "indep.str", "--include", "ingenuity")
    assert status == EXIT_NEGATIVE
    assert "Innocent: undetermined" in out
    assert "Asynchronous: undetermined" in out


def test_innocence_json(agw):
    status, out, _ = agw("innocence", "and_p.str", "--json")
    assert status == EXIT_OK
    assert json.loads(out)["verdict"] == {"asynchronous": True, "innocent": True}


def test_interaction_deadlock(agw):
    status, out, _ = agw("interact", "sigma.str", "and_r.str")
    assert status == EXIT_NEGATIVE
    assert "DEADLOCK at {L.R.q, R.q}" in out


def test_interaction_completes(agw):
    status, out, _ = agw("interact", "sigma.str", "and_l.str")
    assert status == EXIT_OK
    assert "COMPLETE" in out


def test_interaction_needs_two_strategies(agw):
    status, _, err = agw("interact", "sigma.str")
    assert status == EXIT_INVALID
    assert "Expected 2 strategy file(s)" in err


def test_compose(agw):
    status, out, _ = agw("compose", "sigma.str", "and_l.str")
    assert status == EXIT_OK
    assert out.splitlines()[0] == "strategy sigma_and_l on one -o B"


def test_compose_with_functoriality(agw):
    status, out, _ = agw("compose", "sigma.str", "and_r.str", "--functoriality")
    assert status == EXIT_NEGATIVE
    lines = out.splitlines()
    assert lines[0] == "# lax: FAIL"
    assert lines[1] == "# strong: FAIL"


def test_compose_writes_output(agw, tmp_path):
    target = tmp_path / "composite.str"
    status, out, _ = agw("compose", "sigma.str", "and_l.str", "--name", "answer", "--output", str(target))
    assert status == EXIT_OK
    assert "Report saved to" in out
    assert target.read_text(encoding="utf-8").startswith("strategy answer on one -o B\n")


def test_fixpoints(agw):
    status, out, _ = agw("fixpoints", "sigma.str", "--json")
    assert status == EXIT_OK
    data = json.loads(out)
    assert data["halting"] == ["{}", "{R.q}", "{L.q, L.true}", "{L.q, L.true, R.false, R.q}"]
    assert len(data["dynamic_domain"]) == 8


def test_fixpoints_of_parallel_conjunction_add_meets(agw):
    status, out, _ = agw("fixpoints", "and_p.str", "--json")
    assert status == EXIT_NEGATIVE
    data = json.loads(out)
    assert "{L.L.q, L.R.false, L.R.q, R.false, R.q}" in data["added_meets"]


def test_export_game(agw):
    status, out, _ = agw("export-dot", "game", "bb.env", "--tiles")
    assert status == EXIT_OK
    assert "digraph" in out
    assert "dotted" in out


def test_export_order(agw):
    status, out, _ = agw("export-dot", "order", "sigma.str")
    assert status == EXIT_OK
    assert "digraph" in out


def test_export_jumps(agw):
    status, out, _ = agw("export-dot", "jumps", "mll.env", "nested_lift.str", "--switching", "root=left")
    assert status == EXIT_OK
    assert "digraph" in out


def test_export_jumps_needs_a_formula(agw):
    status, _, _ = agw("export-dot", "jumps", "sigma.str")
    assert status == EXIT_INVALID
