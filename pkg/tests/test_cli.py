from __future__ import annotations

import json

import pytest

from fixtures import DECLARED_TOTALS, distribution_fixture, reference_counts_tsv
from lexishot.cli import main
from lexishot.corpus import dump_corpus
from lexishot.interp import EmbeddingTable, dump_embedding_table
from lexishot.lexicon import dump_lexicon


@pytest.fixture()
def workdir(tmp_path, marked_terms_lexicon, data_dir):
    (tmp_path / "marked.tsv").write_text(
        dump_lexicon(marked_terms_lexicon), encoding="utf-8"
    )
    (tmp_path / "reference.tsv").write_text(reference_counts_tsv(), encoding="utf-8")
    pool, lexicon, _ = distribution_fixture("de")
    (tmp_path / "german.tsv").write_text(dump_corpus(pool), encoding="utf-8")
    (tmp_path / "german_lex.tsv").write_text(dump_lexicon(lexicon), encoding="utf-8")
    return tmp_path


def test_lexicon_stats_table(workdir, capsys):
    assert main(["lexicon-stats", "--lexicon", str(workdir / "reference.tsv")]) == 0
    out = capsys.readouterr().out
    assert "Brazil" in out and "Total" in out


def test_lexicon_stats_json_output(workdir):
    out = workdir / "stats.json"
    main(["lexicon-stats", "--lexicon", str(workdir / "reference.tsv"), "-o", str(out)])
    payload = json.loads(out.read_text("utf-8"))
    assert payload["countries"]["Brazil"]["Neutral"] == 30
    assert payload["countries"]["Germany"]["total"] == 49


def test_lexicon_validate_reports_discrepancies(workdir, capsys):
    declared = ",".join(f"{c}={n}" for c, n in DECLARED_TOTALS.items())
    code = main(
        [
            "lexicon-validate",
            "--lexicon",
            str(workdir / "reference.tsv"),
            "--declared",
            declared,
        ]
    )
    out = capsys.readouterr().out
    assert code == 1
    assert "Germany: computed total 49 != declared 50" in out
    assert "India: computed total 46 != declared 50" in out
    assert "Kenya: computed total 113 != declared 116" in out
    assert "Brazil" not in out


def test_lexicon_validate_ok(workdir, capsys):
    code = main(
        [
            "lexicon-validate",
            "--lexicon",
            str(workdir / "reference.tsv"),
            "--declared",
            "Brazil=45",
        ]
    )
    assert code == 0
    assert "match" in capsys.readouterr().out


def test_lexicon_validate_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text("only\ttwo\n", encoding="utf-8")
    assert main(["lexicon-validate", "--lexicon", str(bad)]) == 1
    assert "line 1" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["sample", "--method", "bogus", "--size", "3", "--corpus", "x"])
    assert exc.value.code == 2


def test_match_jsonl(workdir, capsys):
    corpus = workdir / "tiny.tsv"
    corpus.write_text("d1\tHOF\tde\tdie Juden dort\nd2\tNOT\tde\tnichts\n", encoding="utf-8")
    assert (
        main(["match", "--lexicon", str(workdir / "marked.tsv"), "--corpus", str(corpus)])
        == 0
    )
    lines = capsys.readouterr().out.strip().splitlines()
    first = json.loads(lines[0])
    assert first["id"] == "d1" and first["has_target"] is True
    assert json.loads(lines[1])["matches"] == []


def test_match_jobs_order_stable(workdir, tmp_path):
    corpus = workdir / "german.tsv"
    out1, out4 = tmp_path / "m1.jsonl", tmp_path / "m4.jsonl"
    args = ["match", "--lexicon", str(workdir / "german_lex.tsv"), "--corpus", str(corpus)]
    main(args + ["-o", str(out1), "--jobs", "1"])
    main(args + ["-o", str(out4), "--jobs", "4"])
    assert out1.read_bytes() == out4.read_bytes()


def test_sample_header_and_determinism(workdir, tmp_path):
    out_a, out_b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    args = [
        "sample",
        "--method",
        "lexicon",
        "--size",
        "96",
        "--seed",
        "7",
        "--lexicon",
        str(workdir / "german_lex.tsv"),
        "--corpus",
        str(workdir / "german.tsv"),
    ]
    assert main(args + ["-o", str(out_a)]) == 0
    assert main(args + ["-o", str(out_b)]) == 0
    assert out_a.read_bytes() == out_b.read_bytes()
    header = json.loads(out_a.read_text("utf-8").splitlines()[0])
    assert header == {"method": "Lexicon", "size": 96, "seed": 7, "complement": None}


def test_sample_multi_seed_aggregate(workdir, tmp_path, capsys):
    template = tmp_path / "shots_{seed}.jsonl"
    code = main(
        [
            "sample",
            "--method",
            "lexicon",
            "--size",
            "64",
            "--seeds",
            "1,2,3",
            "--lexicon",
            str(workdir / "german_lex.tsv"),
            "--corpus",
            str(workdir / "german.tsv"),
            "-o",
            str(template),
        ]
    )
    assert code == 0
    for seed in (1, 2, 3):
        assert (tmp_path / f"shots_{seed}.jsonl").exists()
    summary = json.loads(capsys.readouterr().out)
    assert len(summary["sets"]) == 3
    assert summary["mean"]["S"] == pytest.approx(12.0)
    assert summary["std"]["S"] == 0.0


def test_sample_requires_seed(workdir, capsys):
    code = main(
        [
            "sample",
            "--method",
            "random",
            "--size",
            "4",
            "--corpus",
            str(workdir / "german.tsv"),
        ]
    )
    assert code == 1
    assert "--seed" in capsys.readouterr().err


def test_complement_cli(workdir, tmp_path, capsys):
    base = tmp_path / "base.jsonl"
    main(
        [
            "sample",
            "--method",
            "random",
            "--size",
            "16",
            "--seed",
            "3",
            "--corpus",
            str(workdir / "german.tsv"),
            "-o",
            str(base),
        ]
    )
    out = tmp_path / "plus_l.jsonl"
    code = main(
        [
            "complement",
            "--base",
            str(base),
            "--corpus",
            str(workdir / "german.tsv"),
            "--lexicon",
            str(workdir / "german_lex.tsv"),
            "--kind",
            "l",
            "--complement-size",
            "8",
            "-o",
            str(out),
        ]
    )
    assert code == 0
    lines = out.read_text("utf-8").splitlines()
    header = json.loads(lines[0])
    assert header["complement"] == {"kind": "+l", "size": 8}
    assert len(lines) == 1 + 16 + 8
    origins = [json.loads(l)["origin"] for l in lines[1:]]
    assert origins.count("complement-target") == 4
    assert origins.count("complement-slur") == 4


def test_distribution_cli(workdir, tmp_path, capsys):
    shots = tmp_path / "shots.jsonl"
    main(
        [
            "sample",
            "--method",
            "lexicon",
            "--size",
            "64",
            "--seed",
            "1",
            "--lexicon",
            str(workdir / "german_lex.tsv"),
            "--corpus",
            str(workdir / "german.tsv"),
            "-o",
            str(shots),
        ]
    )
    capsys.readouterr()
    out = tmp_path / "dist.json"
    code = main(
        [
            "distribution",
            str(shots),
            "--lexicon",
            str(workdir / "german_lex.tsv"),
            "--corpus",
            str(workdir / "german.tsv"),
            "-o",
            str(out),
        ]
    )
    assert code == 0
    table = capsys.readouterr().out
    assert "Lexicon_64" in table
    payload = json.loads(out.read_text("utf-8"))
    assert payload["sets"][0]["S"] == 12
    assert payload["sets"][0]["T"] == 10


def test_annotate_words_cli(workdir, data_dir, capsys):
    code = main(
        [
            "annotate-words",
            "--country",
            "Germany",
            "--lexicon",
            str(workdir / "marked.tsv"),
            "--words",
            str(data_dir / "wordlists" / "germany_top_words.txt"),
        ]
    )
    assert code == 0
    assert "Germany: 1 slur, 4 targets" in capsys.readouterr().out


def _write_tables(tmp_path, before_entries, after_entries, dim=2):
    before = tmp_path / "before.tbl"
    after = tmp_path / "after.tbl"
    before.write_text(
        dump_embedding_table(EmbeddingTable(dim, before_entries, {"layer": "8"})),
        encoding="utf-8",
    )
    after.write_text(
        dump_embedding_table(EmbeddingTable(dim, after_entries, {"layer": "8"})),
        encoding="utf-8",
    )
    return before, after


def test_rep_shift_identity(workdir, tmp_path, capsys):
    entries = {"wajinga": (1.0, 2.0), "luo": (0.5, 0.25), "kikuyu": (3.0, -1.0), "tangatanga": (1.0, 1.0)}
    before, after = _write_tables(tmp_path, entries, entries)
    groups = tmp_path / "groups.json"
    groups.write_text(
        json.dumps({"Slurs": ["wajinga"], "Targets": ["luo", "kikuyu", "tangatanga"]}),
        encoding="utf-8",
    )
    out = tmp_path / "shift.json"
    code = main(
        ["rep-shift", "--before", str(before), "--after", str(after), "--groups", str(groups), "-o", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text("utf-8"))
    assert all(abs(g["mean"] - 1.0) < 1e-9 for g in payload["groups"])
    assert "Slurs" in capsys.readouterr().out


def test_rep_shift_groups_from_lexicon_stop_random(workdir, tmp_path, capsys):
    words = ["wajinga", "luo", "kikuyu", "tangatanga", "na", "ya", "r1", "r2", "r3", "r4", "r5", "r6"]
    entries = {w: (float(i + 1), 1.0) for i, w in enumerate(words)}
    before, after = _write_tables(tmp_path, entries, entries)
    pool = tmp_path / "pool.txt"
    pool.write_text("\n".join(["r1", "r2", "r3", "r4", "r5", "r6"]), encoding="utf-8")
    code = main(
        [
            "rep-shift",
            "--before",
            str(before),
            "--after",
            str(after),
            "--lexicon",
            str(workdir / "marked.tsv"),
            "--country",
            "Kenya",
            "--stopwords",
            "sw",
            "--random-pool",
            str(pool),
            "--seed",
            "11",
        ]
    )
    # the bundled sw stopword list contains words absent from the tiny table
    assert code == 1


def test_rep_shift_on_checked_in_tables(data_dir, tmp_path, capsys):
    groups = tmp_path / "groups.json"
    groups.write_text(
        json.dumps(
            {
                "Slurs": ["slur1", "slur2"],
                "Targets": ["target1", "target2"],
                "Stop": ["stop1", "stop2"],
                "Random": ["rand1", "rand2"],
            }
        ),
        encoding="utf-8",
    )
    code = main(
        [
            "rep-shift",
            "--before",
            str(data_dir / "embeddings" / "layer8_before.tbl"),
            "--after",
            str(data_dir / "embeddings" / "layer8_after.tbl"),
            "--groups",
            str(groups),
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "Slurs" in out and "0.5000" in out and "0.9444" in out


def test_rep_shift_distance_metric(tmp_path, capsys):
    before, after = _write_tables(tmp_path, {"a": (1.0, 0.0)}, {"a": (0.0, 1.0)})
    groups = tmp_path / "groups.json"
    groups.write_text(json.dumps({"G": ["a"]}), encoding="utf-8")
    code = main(
        ["rep-shift", "--before", str(before), "--after", str(after), "--groups", str(groups), "--metric", "distance"]
    )
    assert code == 0
    assert "1.0000" in capsys.readouterr().out


def test_eval_perfect(tmp_path, capsys):
    pred = tmp_path / "p.tsv"
    pred.write_text("a\tHOF\tHOF\nb\tNOT\tNOT\n", encoding="utf-8")
    code = main(["eval", "--labels", "HOF,NOT", "--pred", str(pred)])
    assert code == 0
    out = capsys.readouterr().out
    assert "macro F1: 1.00" in out


def test_eval_aggregate_multiple(tmp_path, capsys):
    for i, (g, p) in enumerate((("HOF", "HOF"), ("HOF", "NOT"))):
        (tmp_path / f"p{i}.tsv").write_text(
            f"a\tHOF\t{p}\nb\tNOT\tNOT\n", encoding="utf-8"
        )
    out = tmp_path / "agg.json"
    code = main(
        [
            "eval",
            "--labels",
            "HOF,NOT",
            "--pred",
            str(tmp_path / "p0.tsv"),
            "--pred",
            str(tmp_path / "p1.tsv"),
            "-o",
            str(out),
        ]
    )
    assert code == 0
    payload = json.loads(out.read_text("utf-8"))
    assert len(payload["runs"]) == 2
    assert "std" in payload["aggregate"]


def test_eval_shots_cli(workdir, tmp_path, capsys):
    shots = tmp_path / "shots.jsonl"
    main(
        [
            "sample",
            "--method",
            "random",
            "--size",
            "8",
            "--seed",
            "2",
            "--corpus",
            str(workdir / "german.tsv"),
            "-o",
            str(shots),
        ]
    )
    rows = [
        json.loads(line)
        for line in shots.read_text("utf-8").splitlines()[1:]
    ]
    pred = tmp_path / "p.tsv"
    pred.write_text(
        "".join(f"{r['id']}\t{r['label']}\t{r['label']}\n" for r in rows),
        encoding="utf-8",
    )
    code = main(
        ["eval-shots", "--shots", str(shots), "--pred", str(pred), "--labels", "HOF,NOT"]
    )
    assert code == 0
    assert "macro F1: 1.00" in capsys.readouterr().out


def test_config_file_mirrors_flags(workdir, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "method=random\nsize=4\nseed=5\n"
        f"corpus={workdir / 'german.tsv'}\n",
        encoding="utf-8",
    )
    out_cfg = tmp_path / "c.jsonl"
    assert main(["sample", "--config", str(cfg), "-o", str(out_cfg)]) == 0
    header = json.loads(out_cfg.read_text("utf-8").splitlines()[0])
    assert header["size"] == 4 and header["seed"] == 5
    # explicit flag wins over the config value
    out_flag = tmp_path / "f.jsonl"
    assert main(["sample", "--config", str(cfg), "--seed", "9", "-o", str(out_flag)]) == 0
    assert json.loads(out_flag.read_text("utf-8").splitlines()[0])["seed"] == 9


def test_env_data_dir_resolution(workdir, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("LEXISHOT_DATA", str(workdir))
    monkeypatch.chdir(tmp_path)
    assert main(["lexicon-stats", "--lexicon", "reference.tsv"]) == 0
    assert "Kenya" in capsys.readouterr().out
