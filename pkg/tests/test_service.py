"""CLI behavior, JSON document stability, and the HTTP API."""

import json
import shutil
import subprocess
import sys
import threading

import httpx
import pytest

from mmlcheck.cli import main
from mmlcheck.pipeline import Options, check_modules
from mmlcheck.service import make_server

from helpers import FIXTURES, fixture_source


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- CLI -------------------------------------------------------------------------


def test_well_typed_exit_zero(tmp_path, capsys):
    f = tmp_path / "ok.mml"
    f.write_text(fixture_source("welltyped.mml"))
    code, out, _ = run_cli(["check", str(f), "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["errors"] == []


def test_fig1_exit_one_six_causes(tmp_path, capsys):
    f = tmp_path / "fig1.mml"
    f.write_text(fixture_source("fig1.mml"))
    code, out, _ = run_cli(["check", str(f), "--json"], capsys)
    assert code == 1
    doc = json.loads(out)
    assert len(doc["errors"]) == 2
    assert len(doc["errors"][0]["causes"]) == 6


def test_missing_file_exit_two(capsys):
    code, _, err = run_cli(["check", "/nonexistent/nope.mml"], capsys)
    assert code == 2
    assert "error" in err


def test_syntax_error_exit_two(tmp_path, capsys):
    f = tmp_path / "bad.mml"
    f.write_text("f = \\x ->")
    code, _, err = run_cli(["check", str(f)], capsys)
    assert code == 2
    assert "syntax error" in err


def test_unresolved_name_exit_two(tmp_path, capsys):
    f = tmp_path / "bad.mml"
    f.write_text("x = missingThing")
    code, _, err = run_cli(["check", str(f)], capsys)
    assert code == 2
    assert "unresolved" in err


def test_human_rendering_has_stars_and_hints(tmp_path, capsys):
    f = tmp_path / "fig12.mml"
    f.write_text(fixture_source("fig12.mml"))
    code, out, _ = run_cli(["check", str(f), "--stats"], capsys)
    assert code == 1
    assert "★★★" in out
    assert "type hints" in out
    assert "query_count" in out


def test_dump_constraints_flag(tmp_path, capsys):
    f = tmp_path / "x.mml"
    f.write_text("x = 1\n")
    code, out, _ = run_cli(["check", str(f), "--dump-constraints"], capsys)
    assert code == 0
    assert "x/2:" in out
    assert "V0 = int" in out


def test_reduction_flags_change_output(tmp_path, capsys):
    f = tmp_path / "fig14.mml"
    f.write_text(fixture_source("fig14.mml"))
    _, out_default, _ = run_cli(["check", str(f), "--json"], capsys)
    _, out_noreduce, _ = run_cli(["check", str(f), "--json", "--no-reduce"], capsys)
    assert len(json.loads(out_default)["errors"][0]["causes"]) == 2
    assert len(json.loads(out_noreduce)["errors"][0]["causes"]) == 4


def test_no_merge_signatures_flag(tmp_path, capsys):
    f = tmp_path / "fig13.mml"
    f.write_text(fixture_source("fig13.mml"))
    code, out, _ = run_cli(["check", str(f), "--dump-constraints", "--no-merge-signatures"], capsys)
    assert out.count("soft") == 10
    code, out, _ = run_cli(["check", str(f), "--dump-constraints"], capsys)
    assert out.count("soft") == 2


def test_top_k_limits_causes(tmp_path, capsys):
    f = tmp_path / "fig1.mml"
    f.write_text(fixture_source("fig1.mml"))
    _, out, _ = run_cli(["check", str(f), "--json", "--top-k", "2"], capsys)
    doc = json.loads(out)
    assert all(len(e["causes"]) <= 2 for e in doc["errors"])


def test_manifest_check(tmp_path, capsys):
    for name in ("a.mml", "b.mml", "manifest.json"):
        shutil.copy(FIXTURES / "fig6" / name, tmp_path / name)
    code, out, _ = run_cli(["check", "--manifest", str(tmp_path / "manifest.json"), "--json"], capsys)
    assert code == 1
    doc = json.loads(out)
    assert len(doc["errors"]) == 1
    assert len(doc["errors"][0]["causes"]) == 3


def test_determinism_byte_identical_json(tmp_path, capsys):
    f = tmp_path / "fig1.mml"
    f.write_text(fixture_source("fig1.mml"))

    def normalized():
        _, out, _ = run_cli(["check", str(f), "--json"], capsys)
        doc = json.loads(out)
        doc.pop("timing", None)
        return json.dumps(doc, sort_keys=True)

    assert normalized() == normalized()


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mmlcheck.cli", "check", str(FIXTURES / "fig9.mml"), "--json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1
    doc = json.loads(proc.stdout)
    assert len(doc["errors"][0]["causes"]) == 3


# --- HTTP service ------------------------------------------------------------------


@pytest.fixture()
def server(tmp_path):
    for name in ("fig1.mml", "welltyped.mml"):
        shutil.copy(FIXTURES / name, tmp_path / name)
    srv = make_server(tmp_path, 0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{srv.server_address[1]}"
    try:
        yield base, tmp_path
    finally:
        srv.shutdown()
        srv.server_close()


def test_health(server):
    base, _ = server
    r = httpx.get(f"{base}/api/health")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_files_and_file(server):
    base, _ = server
    files = httpx.get(f"{base}/api/files").json()["files"]
    assert "fig1.mml" in files
    content = httpx.get(f"{base}/api/file", params={"path": "fig1.mml"}).json()["content"]
    assert "elem '1'" in content


def test_file_unknown_404(server):
    base, _ = server
    assert httpx.get(f"{base}/api/file", params={"path": "nope.mml"}).status_code == 404
    assert httpx.get(f"{base}/api/file", params={"path": "../etc/passwd"}).status_code == 404


def test_check_two_errors(server):
    base, _ = server
    r = httpx.post(f"{base}/api/check", json={"files": ["fig1.mml"]})
    assert r.status_code == 200
    doc = r.json()
    assert len(doc["errors"]) == 2


def test_check_equals_cli_document(server):
    base, tmp = server
    r = httpx.post(f"{base}/api/check", json={"files": ["fig1.mml"]}).json()
    r.pop("timing", None)
    local = check_modules([("fig1", (tmp / "fig1.mml").read_text())], None, Options())
    expected = local.diagnosis.to_json_dict(include_timing=False)
    assert r == expected


def test_put_then_check_roundtrip(server):
    base, _ = server
    fixed = "nums = [1, 2, 3]\n\nfound = elem 1 (reverse (sort nums))\n\ntotal = add (length nums) 25\n"
    put = httpx.put(f"{base}/api/file", json={"path": "fig1.mml", "content": fixed})
    assert put.status_code == 200
    doc = httpx.post(f"{base}/api/check", json={"files": ["fig1.mml"]}).json()
    assert doc["errors"] == []


def test_check_syntax_error_422(server):
    base, _ = server
    httpx.put(f"{base}/api/file", json={"path": "broken.mml", "content": "f = \\x ->"})
    r = httpx.post(f"{base}/api/check", json={"files": ["broken.mml"]})
    assert r.status_code == 422
    err = r.json()["error"]
    assert err["kind"] == "syntax"
    assert "span" in err


def test_check_malformed_400(server):
    base, _ = server
    r = httpx.post(
        f"{base}/api/check",
        content=b"not json",
        headers={"Content-Type": "application/json"},
    )
    assert r.status_code == 400


def test_concurrent_checks_consistent(server):
    base, _ = server
    results = []

    def go():
        results.append(httpx.post(f"{base}/api/check", json={"files": ["fig1.mml"]}, timeout=30).json())

    threads = [threading.Thread(target=go) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for doc in results:
        doc.pop("timing", None)
    assert all(doc == results[0] for doc in results)


def test_weights_flag_accepted_and_validated(tmp_path, capsys):
    f = tmp_path / "fig12.mml"
    f.write_text(fixture_source("fig12.mml"))
    code, out, _ = run_cli(["check", str(f), "--json", "--weights", "1,0.5,0.25,0.1"], capsys)
    assert code == 1
    code, _, err = run_cli(["check", str(f), "--weights", "1,2"], capsys)
    assert code == 2
    assert "weights" in err


def test_enum_timeout_budget_flags(tmp_path, capsys):
    f = tmp_path / "fig45.mml"
    f.write_text(fixture_source("fig45.mml"))
    _, out, _ = run_cli(["check", str(f), "--json", "--max-solve-calls", "5"], capsys)
    assert json.loads(out)["partial"] is True
    _, out, _ = run_cli(["check", str(f), "--json", "--enum-timeout-ms", "0.0001"], capsys)
    assert json.loads(out)["partial"] is True


def test_serve_missing_root_exit_two(capsys):
    code, _, err = run_cli(["serve", "--root", "/nonexistent/dir"], capsys)
    assert code == 2
    assert "does not exist" in err
