import csv
import json

import pytest

from chunkbench.chunkers import read_chunks
from chunkbench.cli import main
from chunkbench.corpus import load_corpus

from conftest import MINI_DATASET

SMALL_GRID = {
    "fixed_size": {"n_chunks": [3], "overlap": [0, 1]},
    "breakpoint": {"percentile": [50, 90]},
    "single_linkage": {
        "n_clusters": [3],
        "positional_weight": [0.5],
        "stop_distance": 0.5,
    },
    "dbscan": {"eps": [0.3], "min_samples": [2], "positional_weight": [0.5]},
}


def write_config(tmp_path, **overrides):
    payload = {"grid": SMALL_GRID, "k_list": [1, 3], "embedder": {"dimension": 64}}
    payload.update(overrides)
    path = tmp_path / "run.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def run(argv):
    return main([str(a) for a in argv])


class TestExitCodes:
    def test_unknown_config_key_is_a_usage_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"datsaet": "typo"}), encoding="utf-8")
        code = run(
            ["bench", "--task", "doc", "--config", bad, "--dataset", MINI_DATASET,
             "--out", tmp_path / "out"]
        )
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_bad_chunker_json(self, tmp_path, capsys):
        code = run(
            ["chunk", "--chunker", "{not json", "--dataset", MINI_DATASET,
             "--out", tmp_path / "out"]
        )
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_unknown_chunker_kind(self, tmp_path, capsys):
        code = run(
            ["chunk", "--chunker", json.dumps({"kind": "semantic_magic"}),
             "--dataset", MINI_DATASET, "--out", tmp_path / "out"]
        )
        assert code == 2

    def test_missing_dataset_directory(self, tmp_path, capsys):
        code = run(
            ["bench", "--task", "doc", "--dataset", tmp_path / "nowhere",
             "--out", tmp_path / "out"]
        )
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_unsorted_k_list_rejected(self, tmp_path, capsys):
        cfg = write_config(tmp_path, k_list=[3, 1])
        code = run(
            ["bench", "--task", "doc", "--config", cfg, "--dataset", MINI_DATASET,
             "--out", tmp_path / "out"]
        )
        assert code == 2

    def test_inspect_unknown_doc_id(self, tmp_path, capsys):
        code = run(["inspect", "--doc-id", "missing-doc", "--dataset", MINI_DATASET])
        assert code == 2
        assert "missing-doc" in capsys.readouterr().err

    def test_stitch_bad_target(self, tmp_path, capsys):
        code = run(
            ["stitch", "--target", "0", "--dataset", MINI_DATASET, "--out", tmp_path / "out"]
        )
        assert code == 2

    def test_gen_without_generation_section(self, tmp_path, capsys):
        code = run(
            ["gen", "--chunker", json.dumps({"kind": "fixed_size", "n_chunks": 3, "overlap": 0}),
             "--dataset", MINI_DATASET, "--out", tmp_path / "out"]
        )
        assert code == 2
        assert "generation" in capsys.readouterr().err


class TestStitchCommand:
    def test_writes_corpus_and_map(self, tmp_path):
        out = tmp_path / "stitched"
        code = run(
            ["stitch", "--target", "30", "--seed", "7",
             "--dataset", MINI_DATASET, "--out", out]
        )
        assert code == 0
        documents, queries = load_corpus(out)
        assert documents and queries
        assert all(d.doc_id.startswith("stitched-") for d in documents)
        map_lines = [
            json.loads(line)
            for line in (out / "stitch_map.jsonl").read_text(encoding="utf-8").splitlines()
        ]
        assert {row["doc_id"] for row in map_lines} == {d.doc_id for d in documents}
        sources = [src for row in map_lines for src in row["source_doc_ids"]]
        original_docs, _ = load_corpus(MINI_DATASET)
        assert sorted(sources) == sorted(d.doc_id for d in original_docs)

    def test_deterministic_for_seed(self, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert run(
                ["stitch", "--target", "25", "--seed", "11",
                 "--dataset", MINI_DATASET, "--out", out]
            ) == 0
            outs.append((out / "docs.jsonl").read_bytes())
        assert outs[0] == outs[1]


class TestChunkCommand:
    def test_writes_chunks_for_every_document(self, tmp_path):
        out = tmp_path / "chunks"
        code = run(
            ["chunk",
             "--chunker", json.dumps({"kind": "fixed_size", "n_chunks": 3, "overlap": 0}),
             "--dataset", MINI_DATASET, "--out", out]
        )
        assert code == 0
        chunks = read_chunks(out / "chunks.jsonl")
        documents, _ = load_corpus(MINI_DATASET)
        assert {c.doc_id for c in chunks} == {d.doc_id for d in documents}
        by_doc = {}
        for chunk in chunks:
            by_doc.setdefault(chunk.doc_id, []).append(chunk)
        assert all(len(v) == 3 for v in by_doc.values())

    def test_breakpoint_chunker_accepted(self, tmp_path):
        out = tmp_path / "bp"
        code = run(
            ["chunk",
             "--chunker", json.dumps(
                 {"kind": "breakpoint", "policy": {"kind": "percentile", "amount": 90}}
             ),
             "--dataset", MINI_DATASET, "--out", out]
        )
        assert code == 0
        assert read_chunks(out / "chunks.jsonl")


class TestBenchCommand:
    def bench(self, tmp_path, task, name):
        cfg = write_config(tmp_path)
        out = tmp_path / name
        code = run(
            ["bench", "--task", task, "--config", cfg, "--seed", "7",
             "--dataset", MINI_DATASET, "--out", out]
        )
        assert code == 0
        return out

    def test_doc_task_outputs(self, tmp_path):
        out = self.bench(tmp_path, "doc", "doc-run")
        rows = [
            json.loads(line)
            for line in (out / "results.jsonl").read_text(encoding="utf-8").splitlines()
        ]
        # 6 grid configs x 10 queries x 2 k values
        assert len(rows) == 6 * 10 * 2
        assert {r["task"] for r in rows} == {"doc"}
        assert {r["k"] for r in rows} == {1, 3}
        sample = rows[0]
        assert set(sample) >= {
            "dataset", "task", "chunker", "config", "query_id", "k",
            "retrieved_chunk_ids", "recall", "precision", "f1",
        }
        for row in rows:
            assert 0.0 <= row["recall"] <= 1.0
            assert 0.0 <= row["precision"] <= 1.0
            assert len(row["retrieved_chunk_ids"]) <= row["k"]

        with (out / "summary.csv").open(encoding="utf-8", newline="") as fh:
            summary = list(csv.DictReader(fh))
        assert len(summary) == 6 * 2
        assert all(row["n_queries"] == "10" for row in summary)

        best = json.loads((out / "best_configs.json").read_text(encoding="utf-8"))
        assert set(best) == {"fixed_size", "breakpoint", "clustering"}
        assert best["clustering"]["kind"] in {"single_linkage", "dbscan"}

    def test_evidence_task_runs(self, tmp_path):
        out = self.bench(tmp_path, "evidence", "ev-run")
        rows = [
            json.loads(line)
            for line in (out / "results.jsonl").read_text(encoding="utf-8").splitlines()
        ]
        assert {r["task"] for r in rows} == {"evidence"}
        assert any(r["recall"] > 0 for r in rows)

    def test_reruns_are_byte_identical(self, tmp_path):
        first = self.bench(tmp_path, "doc", "run-one")
        second = self.bench(tmp_path, "doc", "run-two")
        for name in ("results.jsonl", "summary.csv", "best_configs.json"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_no_failures_file_on_clean_run(self, tmp_path):
        out = self.bench(tmp_path, "doc", "clean-run")
        assert not (out / "failures.jsonl").exists()


class TestGenCommand:
    def test_answers_written(self, tmp_path, mock_service):
        mock_service.set_handler(
            lambda payload: (200, {"text": f"echo: {payload['prompt'][:20]}"})
        )
        cfg = write_config(
            tmp_path,
            generation={
                "endpoint": mock_service.url,
                "model_id": "gen-test",
                "retry_base_delay": 0.0,
            },
        )
        out = tmp_path / "answers"
        code = run(
            ["gen",
             "--chunker", json.dumps({"kind": "fixed_size", "n_chunks": 3, "overlap": 0}),
             "--config", cfg, "--dataset", MINI_DATASET, "--out", out, "--jobs", "1"]
        )
        assert code == 0
        answers = [
            json.loads(line)
            for line in (out / "answers.jsonl").read_text(encoding="utf-8").splitlines()
        ]
        _, queries = load_corpus(MINI_DATASET)
        assert [a["query_id"] for a in answers] == sorted(q.query_id for q in queries)
        for a in answers:
            assert a["answer"].startswith("echo: ")
            assert -1.0 <= a["qa_similarity"] <= 1.0
        assert all(
            req["payload"]["model"] == "gen-test" for req in mock_service.requests
        )

    def test_service_failure_exits_nonzero(self, tmp_path, mock_service):
        mock_service.set_handler(lambda payload: (500, {"error": "down"}))
        cfg = write_config(
            tmp_path,
            generation={
                "endpoint": mock_service.url,
                "model_id": "gen-test",
                "retry_base_delay": 0.0,
            },
        )
        code = run(
            ["gen",
             "--chunker", json.dumps({"kind": "fixed_size", "n_chunks": 3, "overlap": 0}),
             "--config", cfg, "--dataset", MINI_DATASET, "--out", tmp_path / "o",
             "--jobs", "1"]
        )
        assert code == 1


class TestSweepReportCommand:
    def test_trends_over_bench_outputs(self, tmp_path):
        cfg = write_config(tmp_path)
        for task in ("doc", "evidence"):
            assert run(
                ["bench", "--task", task, "--config", cfg, "--seed", "7",
                 "--dataset", MINI_DATASET, "--out", tmp_path / f"runs/{task}"]
            ) == 0
        out = tmp_path / "report"
        code = run(["sweep-report", tmp_path / "runs", "--out", out])
        assert code == 0
        with (out / "trends.csv").open(encoding="utf-8", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert rows
        names = {row["hyperparameter"] for row in rows}
        assert "fixed_size.n_chunks" in names
        assert "breakpoint.percentile.amount" in names
        for row in rows:
            assert 0.0 <= float(row["f1"]) <= 1.0
        keys = [(row["hyperparameter"], float(row["value"])) for row in rows]
        assert keys == sorted(keys)

    def test_empty_directory_is_an_error(self, tmp_path, capsys):
        (tmp_path / "empty").mkdir()
        code = run(["sweep-report", tmp_path / "empty", "--out", tmp_path / "r"])
        assert code == 2


class TestInspectCommand:
    def test_prints_labeled_sections(self, tmp_path, capsys):
        code = run(["inspect", "--doc-id", "honeybee-hives", "--dataset", MINI_DATASET])
        assert code == 0
        out = capsys.readouterr().out
        headers = [line for line in out.splitlines() if line.startswith("== ")]
        # four default chunkers shown side by side
        assert len(headers) == 4
        assert any("fixed_size" in h for h in headers)
        assert any("dbscan" in h for h in headers)
        assert "sentences" in out

    def test_explicit_chunker_flag(self, tmp_path, capsys):
        code = run(
            ["inspect", "--doc-id", "night-sky", "--dataset", MINI_DATASET,
             "--chunker", json.dumps({"kind": "fixed_size", "n_chunks": 2, "overlap": 0})]
        )
        assert code == 0
        out = capsys.readouterr().out
        headers = [line for line in out.splitlines() if line.startswith("== ")]
        assert len(headers) == 1
