"""Command-line client, exercised in-process against the bundled app."""

import json

import pytest

from sascalc import cli


@pytest.fixture(autouse=True)
def plain_output(monkeypatch):
    monkeypatch.setenv("SAS_COLOR", "0")


def test_gain_stdout_is_byte_exact(capsys):
    assert cli.main(["gain", "--n1", "3", "--n2", "2"]) == 0
    captured = capsys.readouterr()
    assert captured.out == '{"gain":12}\n'
    assert captured.err == ""


def test_validate_clean_file(corpus_dir, capsys):
    path = str(corpus_dir / "fig5_fusion.sas")
    assert cli.main(["validate", path]) == 0
    captured = capsys.readouterr()
    report = json.loads(captured.out)
    assert report["ok"] is True and report["systems"] == 2
    assert captured.err == ""


def test_validate_error_file_exits_1_with_diagnostics(corpus_dir, capsys):
    path = str(corpus_dir / "err_duplicate_member.sas")
    assert cli.main(["validate", path]) == 1
    captured = capsys.readouterr()
    assert json.loads(captured.out)["ok"] is False
    line = captured.err.strip().split("\n")[0]
    assert line.startswith(f"{path}:")
    assert " error[E_DUPLICATE_MEMBER]: " in line
    assert "\x1b[" not in captured.err


def test_validate_warning_only_exits_0(corpus_dir, capsys):
    path = str(corpus_dir / "warn_unbound_event.sas")
    assert cli.main(["validate", path]) == 0
    captured = capsys.readouterr()
    assert " warning[W_UNBOUND_EVENT]: " in captured.err


def test_missing_file(capsys):
    assert cli.main(["validate", "/nonexistent/echo.sas"]) == 1
    captured = capsys.readouterr()
    assert captured.err == "error: cannot read /nonexistent/echo.sas: no such file\n"


def test_fuse_with_oracle(corpus_dir, capsys):
    path = str(corpus_dir / "fig5_fusion.sas")
    assert cli.main(["fuse", path, "--systems", "S1,S2", "--oracle"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["gain"] == 12 and body["oracle"] == 12
    assert body["fused"] == "S1⊞S2"


def test_fuse_unknown_system_reports_code(corpus_dir, capsys):
    path = str(corpus_dir / "fig5_fusion.sas")
    assert cli.main(["fuse", path, "--systems", "S1,S7"]) == 1
    assert capsys.readouterr().err.startswith("error[unknown-system]: ")


def test_knowledge_gain(corpus_dir, capsys):
    path = str(corpus_dir / "concepts_basic.sas")
    assert cli.main(["knowledge-gain", path, "--concepts", "Car,Wheel"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["total"] == 16


def test_compose(corpus_dir, capsys):
    path = str(corpus_dir / "knowledge_layers.sas")
    assert cli.main(["compose", path, "--layers", "2"]) == 0
    body = json.loads(capsys.readouterr().out)
    # 4 concepts, 2 declared items; C(4,2)=6 then C(6,2)=15.
    assert body == {"concepts": 4, "items": 2, "layer_sizes": [6, 15], "entire_bir": 23}


def test_topology(corpus_dir, capsys):
    path = str(corpus_dir / "two_systems_disjoint.sas")
    assert cli.main(["topology", path]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["depth"] == 1
    assert sorted(c["components"] for c in body["children"]) == [4, 5]


def test_reliability(capsys):
    assert cli.main(["reliability", "--error-rates", "0.1,0.2"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["saturated"] is False
    assert abs(body["cancellation_delta"] - 0.28) < 1e-12


def test_capacity(capsys):
    assert cli.main(["capacity", "--neurons", "1e11", "--synapses", "1e3"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert abs(body["log10_bir"] - 8432.395353608566) < 1e-6


def test_capacity_domain_error(capsys):
    assert cli.main(["capacity", "--neurons", "10", "--synapses", "20"]) == 1
    assert capsys.readouterr().err.startswith("error[DomainError]: ")


def test_dispatch_writes_trace_document(corpus_dir, tmp_path, capsys):
    events = tmp_path / "events.txt"
    events.write_text("# warm-up\n0,tick\n3,jolt\n9,ping\n", encoding="utf-8")
    trace = tmp_path / "trace.json"
    path = str(corpus_dir / "events_bindings.sas")
    assert cli.main(["dispatch", path, "--events", str(events), "--trace", str(trace)]) == 0

    summary = json.loads(capsys.readouterr().out)
    assert summary == {"events": 3, "handled": 3, "unhandled": 0, "trace": str(trace)}

    text = trace.read_text(encoding="utf-8")
    assert text.startswith("{\n  ") and text.endswith("\n")
    doc = json.loads(text)
    assert [e["binding"] for e in doc["trace"]] == ["plan_day", "halt", "echo"]
    assert [e["t"] for e in doc["trace"]] == [0, 3, 9]


def test_dispatch_malformed_events_file(corpus_dir, tmp_path, capsys):
    events = tmp_path / "events.txt"
    events.write_text("0,tick\nbogus line\n", encoding="utf-8")
    path = str(corpus_dir / "events_bindings.sas")
    code = cli.main(["dispatch", path, "--events", str(events), "--trace", str(tmp_path / "t.json")])
    assert code == 1
    assert capsys.readouterr().err.startswith("error: events line 2")


def test_simulate_json_stdout(capsys):
    assert cli.main(["simulate-pps", "--steps", "5"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert len(body["samples"]) == 6
    assert body["step"] == 1e-3


def test_simulate_csv_to_file(tmp_path, capsys):
    out = tmp_path / "run.csv"
    code = cli.main(
        ["simulate-pps", "--steps", "3", "--out", "csv", "--path", str(out)]
    )
    assert code == 0
    assert capsys.readouterr().out == ""
    lines = out.read_text(encoding="utf-8").split("\n")
    assert lines[0] == "t,N_L,N_G,V"
    assert len(lines) == 6 and lines[-1] == ""
    assert lines[1].startswith("0,10,200,")


def test_simulate_rejects_bad_horizon(capsys):
    assert cli.main(["simulate-pps", "--dt", "1.0", "--steps", "200000"]) == 1
    assert capsys.readouterr().err.startswith("error[invalid-parameters]: ")


def test_taxonomy(capsys):
    assert cli.main(["taxonomy"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert len(body) == 16
    assert body[-1]["type_tag"] == "Inductive"


def test_usage_errors_exit_2():
    for argv in (
        ["gain", "--n1", "3"],
        ["fuse", "x.sas", "--systems", "OnlyOne"],
        ["reliability", "--error-rates", "a,b"],
        ["compose", "x.sas", "--layers", "0"],
        ["simulate-pps", "--out", "xml"],
        ["no-such-command"],
    ):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(argv)
        assert excinfo.value.code == 2


def test_unreachable_server(capsys):
    code = cli.main(["--server", "http://127.0.0.1:1", "gain", "--n1", "1", "--n2", "1"])
    assert code == 1
    assert capsys.readouterr().err.startswith("error: cannot reach server: ")
