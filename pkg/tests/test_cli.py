from __future__ import annotations

import io
import json
import shutil

import pytest

from asap import parse_inline_xml
from asap.cli import cmd_diff, main, strip_markup
from asap.config import load_config, resources_root
from asap.errors import ConfigNotFound, MalformedInput, MissingResource

from conftest import CORPUS, FIXTURES, GOLDEN


def run(argv):
    return main([str(a) for a in argv])


def test_golden_single_document(tmp_path):
    src = tmp_path / "in"
    src.mkdir()
    shutil.copy(CORPUS / "ambler_reuse_first.txt", src)
    assert run(["analyze", src, "--out", tmp_path / "ann"]) == 0
    assert run(["structure", tmp_path / "ann", "--out", tmp_path / "st"]) == 0
    assert (tmp_path / "ann" / "ambler_reuse_first.xml").read_bytes() == \
        (GOLDEN / "ambler_reuse_first.annotated.xml").read_bytes()
    assert (tmp_path / "st" / "ambler_reuse_first.xml").read_bytes() == \
        (GOLDEN / "ambler_reuse_first.pattern.xml").read_bytes()
    assert (tmp_path / "st" / "ambler_reuse_first.validation.txt").read_bytes() == b""


def test_manifest_contents(tmp_path):
    assert run(["analyze", CORPUS, "--out", tmp_path / "ann"]) == 0
    m = json.loads((tmp_path / "ann" / "manifest.json").read_text())
    assert m["command"] == "analyze" and m["toolkit_version"] == "0.1.0"
    assert len(m["config_digest"]) == 64
    assert len(m["documents"]) == 15
    patrons = next(d for d in m["documents"] if d["input"] == "patrons.txt")
    assert patrons["counts"]["Problem"] == 8
    assert patrons["outputs"] == ["patrons.xml"]


def test_html_input_is_stripped(tmp_path):
    assert run(["analyze", CORPUS, "--out", tmp_path / "ann"]) == 0
    doc = parse_inline_xml((tmp_path / "ann" / "propel_risk_review.xml").read_bytes())
    assert "<h1>" not in doc.text and "Name: Risk Review" in doc.text
    assert doc.text.count("Risk Review") == 1  # the <title> is dropped
    assert strip_markup("<p>a &amp; b</p><script>x</script>") == "\na & b\n"


def test_one_bad_document_does_not_stop_the_run(tmp_path, capsys):
    src = tmp_path / "in"
    src.mkdir()
    shutil.copy(CORPUS / "psigma_test_first.txt", src)
    (src / "broken.txt").write_bytes(b"Problem: \xff\xfe not utf-8")
    assert run(["analyze", src, "--out", tmp_path / "ann"]) == 1
    m = json.loads((tmp_path / "ann" / "manifest.json").read_text())
    status = {d["input"]: d["status"] for d in m["documents"]}
    assert status == {"broken.txt": "error", "psigma_test_first.txt": "ok"}
    assert "UnicodeDecodeError" in next(d["error"] for d in m["documents"] if d["input"] == "broken.txt")
    assert (tmp_path / "ann" / "psigma_test_first.xml").is_file()
    assert "broken.txt" in capsys.readouterr().err


def test_empty_corpus_is_fatal(tmp_path, capsys):
    assert run(["analyze", tmp_path, "--out", tmp_path / "ann"]) == 2
    assert "no .txt" in capsys.readouterr().err


def test_structure_reports_invalid_pattern(tmp_path):
    src = tmp_path / "in"
    src.mkdir()
    (src / "plain.txt").write_text("Nothing here looks like a heading.")
    assert run(["analyze", src, "--out", tmp_path / "ann"]) == 0
    assert run(["structure", tmp_path / "ann", "--out", tmp_path / "st"]) == 0
    assert (tmp_path / "st" / "plain.xml").read_bytes() == b"<processPattern/>"
    assert (tmp_path / "st" / "plain.validation.txt").read_text().startswith("ERROR core ")
    m = json.loads((tmp_path / "st" / "manifest.json").read_text())
    assert m["documents"][0]["valid"] is False


def test_structure_rejects_malformed_xml(tmp_path):
    (tmp_path / "bad.xml").write_text("<asapDoc>unclosed")
    assert run(["structure", tmp_path, "--out", tmp_path / "st"]) == 1
    m = json.loads((tmp_path / "st" / "manifest.json").read_text())
    assert m["documents"][0]["error"].startswith("MalformedInput")


def test_diff_exit_codes(tmp_path, capsys):
    assert run(["analyze", CORPUS, "--out", tmp_path / "ann"]) == 0
    key = FIXTURES / "keys" / "patrons.xml"
    assert run(["diff", "--key", key, "--response", tmp_path / "ann" / "patrons.xml",
                "--types", "Problem"]) == 0
    assert "Correct: 8" in capsys.readouterr().out
    # a response for a different document misses most of the key
    assert run(["diff", "--key", key, "--response", tmp_path / "ann" / "psigma_test_first.xml",
                "--types", "Problem"]) == 1
    assert run(["diff", "--key", tmp_path / "nope.xml", "--response", key, "--types", "Problem"]) == 2
    assert run(["diff", "--key", key, "--response", key, "--types", "Problem", "--beta", "0"]) == 2


def test_diff_jsonl(tmp_path):
    key = FIXTURES / "keys" / "patrons.xml"
    out = io.StringIO()
    assert cmd_diff(key, key, ["Problem", "Solution"], fmt="jsonl", stream=out) == 0
    recs = [json.loads(line) for line in out.getvalue().splitlines()]
    summaries = [r for r in recs if r["record"] == "summary"]
    assert [(s["type"], s["correct"]) for s in summaries] == [("Problem", 8), ("Solution", 0)]


def test_bundled_config():
    cfg = load_config()
    assert cfg.gazetteer_index.name == "lists.def"
    assert cfg.beta == 1.0 and cfg.strip_types == ("Sentence", "Token", "SpaceToken", "Lookup")
    assert cfg.digest() == load_config().digest()


def test_config_errors(tmp_path):
    with pytest.raises(ConfigNotFound):
        load_config(tmp_path / "missing.conf")
    (tmp_path / "a.conf").write_text("gazetteer_index = nowhere.def\nrule_files = x.jape\n")
    with pytest.raises(MissingResource):
        load_config(tmp_path / "a.conf")
    (tmp_path / "b.conf").write_text("colour = blue\n")
    with pytest.raises(MalformedInput) as err:
        load_config(tmp_path / "b.conf")
    assert err.value.line == 1


def test_config_cli_errors_are_fatal(tmp_path):
    assert run(["analyze", CORPUS, "--config", tmp_path / "missing.conf"]) == 2


def test_resource_root_from_environment(tmp_path, monkeypatch):
    root = tmp_path / "res"
    shutil.copytree(resources_root(), root)
    (root / "lists" / "solution.lst").write_text("Remedy\n")
    monkeypatch.setenv("ASAP_RESOURCES", str(root))
    cfg = load_config()
    assert cfg.source == root / "asap.conf"
    monkeypatch.delenv("ASAP_RESOURCES")
    assert cfg.digest() != load_config().digest()


def test_config_digest_tracks_settings(tmp_path):
    root = tmp_path / "res"
    shutil.copytree(resources_root(), root)
    conf = root / "asap.conf"
    before = load_config(conf).digest()
    conf.write_text(conf.read_text().replace("beta = 1", "beta = 2"))
    assert load_config(conf).beta == 2.0
    assert load_config(conf).digest() != before


def test_default_output_dir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    src = tmp_path / "in"
    src.mkdir()
    shutil.copy(CORPUS / "ppdl_change_control.txt", src)
    assert run(["analyze", src]) == 0
    assert run(["structure", "out/annotated"]) == 0
    assert (tmp_path / "out" / "structured" / "ppdl_change_control.xml").is_file()
