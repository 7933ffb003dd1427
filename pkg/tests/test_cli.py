"""CLI surface: run, verify-ledger, replay, bundled listing."""

from __future__ import annotations

import json

from click.testing import CliRunner

from pause.cli import main
from pause.scenario import bundled


def test_run_scenario_writes_outputs(tmp_path):
    scenario_path = tmp_path / "case2.json"
    scenario_path.write_text(json.dumps(bundled("case2_routes").raw))
    out_dir = tmp_path / "out"
    runner = CliRunner()
    result = runner.invoke(
        main, ["run", str(scenario_path), "--out", str(out_dir)]
    )
    assert result.exit_code == 0, result.output
    assert "PASS" in result.output and "FAIL:" not in result.output
    assert (out_dir / "events.jsonl").exists()
    assert (out_dir / "report.md").exists()
    assert (out_dir / "picture.geojson").exists()


def test_failed_assertion_exits_nonzero(tmp_path):
    raw = json.loads(json.dumps(bundled("case2_routes").raw))
    raw["assertions"] = [{"type": "chosen_route", "route_id": "C"}]
    scenario_path = tmp_path / "mut.json"
    scenario_path.write_text(json.dumps(raw))
    result = CliRunner().invoke(main, ["run", str(scenario_path)])
    assert result.exit_code == 1
    assert "FAIL" in result.output


def test_verify_ledger_ok_and_broken(tmp_path):
    scenario_path = tmp_path / "case1.json"
    scenario_path.write_text(json.dumps(bundled("case1_mapping").raw))
    out_dir = tmp_path / "out"
    runner = CliRunner()
    assert runner.invoke(main, ["run", str(scenario_path), "--out", str(out_dir)]).exit_code == 0

    ledger_dir = out_dir / "ledger"
    for command in (["verify-ledger", str(ledger_dir)], ["ledger", "verify", str(ledger_dir)]):
        result = runner.invoke(main, command)
        assert result.exit_code == 0, result.output
        assert result.output.startswith("ok:")

    block_file = sorted(ledger_dir.glob("*.json"))[0]
    data = json.loads(block_file.read_text())
    data["entries"][0]["node_id"] = "tampered"
    block_file.write_text(json.dumps(data))
    result = runner.invoke(main, ["verify-ledger", str(ledger_dir)])
    assert result.exit_code == 1
    assert "BROKEN at height 0" in result.output


def test_replay_command(tmp_path):
    scenario_path = tmp_path / "case3.json"
    scenario_path.write_text(json.dumps(bundled("case3_misinfo").raw))
    out_dir = tmp_path / "out"
    runner = CliRunner()
    runner.invoke(main, ["run", str(scenario_path), "--out", str(out_dir)])
    result = runner.invoke(main, ["replay", str(out_dir / "events.jsonl")])
    assert result.exit_code == 0, result.output
    assert "byte-identically" in result.output


def test_scenarios_listing():
    result = CliRunner().invoke(main, ["scenarios"])
    assert result.exit_code == 0
    for name in ("case1_mapping", "case2_routes", "case3_misinfo", "surrender_beacon"):
        assert name in result.output


def test_run_bundled():
    result = CliRunner().invoke(main, ["run-bundled", "surrender_beacon"])
    assert result.exit_code == 0, result.output
