import json
import re
import socket

import pytest

import tqamark as tq
from tqamark.cli import main

from conftest import S5_MARKED, S5_PLAIN
from test_corpus import TMX_SAMPLE, magazine_corpus

ANSI_RE = re.compile(r"\x1b\[[0-9;]*m")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def scale_config(tmp_path, name, file_name):
    cfg = {
        "scales": [
            {"name": name, "bands": [{"lower": 0, "upper": 100, "label": "pass"}]}
        ]
    }
    path = tmp_path / file_name
    path.write_text(json.dumps(cfg), encoding="utf-8")
    return path


class TestValidate:
    def test_clean_file(self, capsys, s5_file):
        code, out, err = run(capsys, "validate", str(s5_file))
        assert (code, out, err) == (0, "", "")

    def test_bad_markup(self, capsys, tmp_path):
        bad = tmp_path / "bad.tqm"
        bad.write_text("ab <bogus weight='minor'>x</bogus>", encoding="utf-8")
        code, out, err = run(capsys, "validate", str(bad))
        assert code == 1
        assert out == ""
        assert err.startswith("4\tUnknownTag\t")

    def test_diagnostics_sorted_by_offset(self, capsys, tmp_path):
        bad = tmp_path / "bad.tqm"
        bad.write_text(
            "<style_mistake>a</style_mistake> &nope; x", encoding="utf-8"
        )
        code, out, err = run(capsys, "validate", str(bad))
        assert code == 1
        offsets = [int(line.split("\t")[0]) for line in err.splitlines()]
        assert offsets == sorted(offsets)

    def test_missing_file(self, capsys, tmp_path):
        code, out, err = run(capsys, "validate", str(tmp_path / "absent.tqm"))
        assert code == 2
        assert err.startswith("error:")


class TestScore:
    def test_human_truncate(self, capsys, s5_file):
        code, out, err = run(capsys, "score", str(s5_file), "--mode", "truncate")
        assert code == 0
        assert out == (
            "document: s5\n"
            "words: 53\n"
            "error points: 4\n"
            "TQI: 93\n"
            "grade: good\n"
            "scale: freshman\n"
            "breakdown:\n"
            "  content minor x1 = 1\n"
            "  style critical x1 = 3\n"
        )

    def test_human_exact_default(self, capsys, s5_file):
        code, out, _ = run(capsys, "score", str(s5_file))
        assert code == 0
        assert "TQI: 92.45\n" in out

    def test_unannotated_scores_hundred(self, capsys, tmp_path):
        clean = tmp_path / "clean.tqm"
        clean.write_text("Перевод без единой ошибки.", encoding="utf-8")
        code, out, _ = run(capsys, "score", str(clean))
        assert code == 0
        assert "TQI: 100.00\n" in out
        assert "grade: excellent\n" in out
        assert "breakdown:" not in out

    def test_scale_flag(self, capsys, tmp_path):
        ninety = tmp_path / "n90.tqm"
        ninety.write_text(
            "<style_mistake weight='minor'>one</style_mistake>"
            " two three four five six seven eight nine ten",
            encoding="utf-8",
        )
        code, out, _ = run(capsys, "score", str(ninety), "--scale", "senior")
        assert code == 0
        assert "TQI: 90.00\n" in out
        assert "grade: satisfactory\n" in out
        assert "scale: senior\n" in out

    def test_json_round_trip(self, capsys, s5_file, s5_doc, config):
        code, out, _ = run(capsys, "score", str(s5_file), "--json")
        assert code == 0
        report = tq.score(s5_doc, config.taxonomy, config.weights, config.default_scale)
        assert out == tq.encode_report(report) + "\n"
        assert tq.decode_report(out) == report

    def test_mode_alias(self, capsys, s5_file):
        code, out, _ = run(capsys, "score", str(s5_file), "--mode", "exact")
        assert code == 0
        assert "TQI: 92.45\n" in out

    def test_unknown_scale(self, capsys, s5_file):
        code, out, err = run(capsys, "score", str(s5_file), "--scale", "doctoral")
        assert code == 1
        assert err.startswith("error:")

    def test_invalid_markup_is_exit_one(self, capsys, tmp_path):
        bad = tmp_path / "bad.tqm"
        bad.write_text("x </style_mistake>", encoding="utf-8")
        code, _, err = run(capsys, "score", str(bad))
        assert code == 1
        assert "UnbalancedTags" in err


class TestRender:
    def test_ansi_codes(self, capsys, s5_file):
        code, out, _ = run(
            capsys, "render", str(s5_file),
            "--representation", "severity-highlight", "--mode", "ansi",
        )
        assert code == 0
        assert "\x1b[1;41m" in out  # bold on red: the critical span
        assert ANSI_RE.sub("", out) == S5_PLAIN + "\n"

    def test_html_by_default(self, capsys, s5_file):
        code, out, _ = run(
            capsys, "render", str(s5_file), "--representation", "severity-highlight"
        )
        assert code == 0
        assert '<span class="mistake cat-style sev-critical">' in out

    def test_plain_verbatim(self, capsys, s5_file):
        code, out, _ = run(capsys, "render", str(s5_file), "--representation", "plain")
        assert code == 0
        assert out == S5_PLAIN + "\n"

    def test_out_writes_stylesheet(self, capsys, s5_file, tmp_path):
        target = tmp_path / "rendered"
        target.mkdir()
        out_file = target / "s5.html"
        code, out, _ = run(
            capsys, "render", str(s5_file),
            "--representation", "severity-highlight", "--out", str(out_file),
        )
        assert code == 0
        assert out == ""
        assert "sev-minor" in out_file.read_text(encoding="utf-8")
        stylesheet = target / "stylesheet.css"
        assert stylesheet.exists()
        assert ".sev-critical" in stylesheet.read_text(encoding="utf-8")

    def test_ansi_out_skips_stylesheet(self, capsys, s5_file, tmp_path):
        out_file = tmp_path / "s5.txt"
        code, _, _ = run(
            capsys, "render", str(s5_file),
            "--representation", "severity-highlight",
            "--mode", "ansi", "--out", str(out_file),
        )
        assert code == 0
        assert not (tmp_path / "stylesheet.css").exists()

    def test_unknown_representation(self, capsys, s5_file):
        code, _, err = run(
            capsys, "render", str(s5_file), "--representation", "neon"
        )
        assert code == 1
        assert err.startswith("error:")


class TestQuery:
    def test_magazine(self, capsys, tmp_path, taxonomy):
        corpus = magazine_corpus(tmp_path, taxonomy)
        code, out, _ = run(
            capsys, "query", "--corpus", str(corpus.root),
            "--category", "content", "--word", "magazine",
        )
        assert code == 0
        assert out == "mag-1\t7:27\tcontent\tminor\tthe magazine article\n"

    def test_no_matches(self, capsys, s5_corpus):
        code, out, err = run(
            capsys, "query", "--corpus", str(s5_corpus.root), "--category", "form"
        )
        assert (code, out, err) == (0, "", "")

    def test_unknown_category(self, capsys, s5_corpus):
        code, _, err = run(
            capsys, "query", "--corpus", str(s5_corpus.root), "--category", "spelling"
        )
        assert code == 1
        assert err.startswith("error:")

    def test_unknown_severity(self, capsys, s5_corpus):
        code, _, err = run(
            capsys, "query", "--corpus", str(s5_corpus.root), "--severity", "fatal"
        )
        assert code == 1

    def test_missing_corpus(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "query", "--corpus", str(tmp_path / "nowhere"), "--category", "form"
        )
        assert code == 2


class TestStats:
    def test_golden_corpus(self, capsys, s5_corpus):
        code, out, _ = run(capsys, "stats", "--corpus", str(s5_corpus.root))
        assert code == 0
        assert "documents: 1\n" in out
        assert "annotations: 2\n" in out
        assert "content minor: 1\n" in out
        assert "style critical: 1\n" in out
        assert "mean TQI: 92.45\n" in out

    def test_cohort_without_members(self, capsys, s5_corpus):
        code, out, _ = run(
            capsys, "stats", "--corpus", str(s5_corpus.root), "--cohort", "freshman"
        )
        assert code == 0
        assert "documents: 0\n" in out
        assert "mean TQI" not in out


class TestImportAndInit:
    def test_init_then_import(self, capsys, tmp_path):
        root = tmp_path / "fresh"
        code, out, _ = run(capsys, "init", "--corpus", str(root))
        assert code == 0
        assert out.startswith("initialized corpus")
        assert (root / "manifest").exists()

        tmx = tmp_path / "batch.tmx"
        tmx.write_text(TMX_SAMPLE, encoding="utf-8")
        code, out, _ = run(capsys, "import", "--corpus", str(root), str(tmx))
        assert code == 0
        assert out == "imported 3 documents\n"

        code, out, _ = run(capsys, "stats", "--corpus", str(root))
        assert "documents: 3\n" in out
        assert "mean TQI: 100.00\n" in out

    def test_init_occupied(self, capsys, tmp_path):
        blocker = tmp_path / "busy"
        blocker.mkdir()
        (blocker / "junk").write_text("x", encoding="utf-8")
        code, _, err = run(capsys, "init", "--corpus", str(blocker))
        assert code == 2
        assert err.startswith("error:")

    def test_import_malformed(self, capsys, tmp_path):
        root = tmp_path / "fresh"
        run(capsys, "init", "--corpus", str(root))
        bad = tmp_path / "bad.tmx"
        bad.write_text("<tu><tuv>", encoding="utf-8")
        code, _, err = run(capsys, "import", "--corpus", str(root), str(bad))
        assert code == 1
        assert err.startswith("error:")


class TestConfigResolution:
    def test_explicit_beats_env_and_local(self, capsys, s5_file, tmp_path, monkeypatch):
        explicit = scale_config(tmp_path, "explicit-scale", "explicit.json")
        env_cfg = scale_config(tmp_path, "env-scale", "env.json")
        local_dir = tmp_path / "cwd"
        local_dir.mkdir()
        scale_config(local_dir, "local-scale", "tqamark.config")
        monkeypatch.setenv("TQAMARK_CONFIG", str(env_cfg))
        monkeypatch.chdir(local_dir)

        code, out, _ = run(
            capsys, "--config", str(explicit), "score", str(s5_file)
        )
        assert code == 0
        assert "scale: explicit-scale\n" in out

    def test_env_beats_local(self, capsys, s5_file, tmp_path, monkeypatch):
        env_cfg = scale_config(tmp_path, "env-scale", "env.json")
        local_dir = tmp_path / "cwd"
        local_dir.mkdir()
        scale_config(local_dir, "local-scale", "tqamark.config")
        monkeypatch.setenv("TQAMARK_CONFIG", str(env_cfg))
        monkeypatch.chdir(local_dir)

        code, out, _ = run(capsys, "score", str(s5_file))
        assert "scale: env-scale\n" in out

    def test_local_beats_builtin(self, capsys, s5_file, tmp_path, monkeypatch):
        local_dir = tmp_path / "cwd"
        local_dir.mkdir()
        scale_config(local_dir, "local-scale", "tqamark.config")
        monkeypatch.delenv("TQAMARK_CONFIG", raising=False)
        monkeypatch.chdir(local_dir)

        code, out, _ = run(capsys, "score", str(s5_file))
        assert "scale: local-scale\n" in out

    def test_builtin_fallback(self, capsys, s5_file, tmp_path, monkeypatch):
        empty = tmp_path / "empty"
        empty.mkdir()
        monkeypatch.delenv("TQAMARK_CONFIG", raising=False)
        monkeypatch.chdir(empty)

        code, out, _ = run(capsys, "score", str(s5_file))
        assert "scale: freshman\n" in out

    def test_unreadable_config(self, capsys, s5_file, tmp_path):
        code, _, err = run(
            capsys, "--config", str(tmp_path / "absent.json"), "score", str(s5_file)
        )
        assert code == 2
        assert err.startswith("error:")

    def test_invalid_config_json(self, capsys, s5_file, tmp_path):
        broken = tmp_path / "broken.json"
        broken.write_text("{not json", encoding="utf-8")
        code, _, err = run(capsys, "--config", str(broken), "score", str(s5_file))
        assert code == 2


class TestServe:
    def test_occupied_port(self, capsys, s5_corpus):
        with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as blocker:
            blocker.bind(("127.0.0.1", 0))
            port = blocker.getsockname()[1]
            code, _, err = run(
                capsys, "serve", "--corpus", str(s5_corpus.root),
                "--port", str(port),
            )
        assert code == 2
        assert err.startswith("error:")
