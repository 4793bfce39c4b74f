import json

import pytest

from freesplit import complete_bipartite, complete_graph, serialize_graph
from freesplit.cli import main

from conftest import petersen_graph


@pytest.fixture
def graphs_dir(tmp_path):
    (tmp_path / "k55.g6").write_text(
        serialize_graph(complete_bipartite(5, 5), "graph6") + "\n")
    (tmp_path / "k6.g6").write_text(
        serialize_graph(complete_graph(6), "graph6") + "\n")
    (tmp_path / "petersen.g6").write_text(
        serialize_graph(petersen_graph(), "graph6") + "\n")
    return tmp_path


def run_cli(*args):
    return main(list(args))


class TestDecomposeCommand:
    def test_two_mode_success(self, graphs_dir):
        out = graphs_dir / "run"
        code = run_cli("decompose", "--input", str(graphs_dir / "k55.g6"),
                       "--mode", "two", "--family", "clique:2",
                       "--p", "2", "--q", "4", "--out", str(out))
        assert code == 0
        record = json.loads((out / "decomposition.json").read_text())
        assert sorted(len(p) for p in record["parts"]) == [5, 5]
        report = json.loads((out / "report.json").read_text())
        assert report["overall"] is True
        assert [c["id"] for c in report["checks"]][:3] == ["C1", "C2", "C3"]
        assert record["verifier_report_id"] == report["report_id"]

    def test_precondition_exit_code_and_witness(self, graphs_dir):
        out = graphs_dir / "run"
        code = run_cli("decompose", "--input", str(graphs_dir / "k6.g6"),
                       "--mode", "two", "--family", "clique:2",
                       "--p", "2", "--q", "4", "--out", str(out))
        assert code == 3
        payload = json.loads((out / "report.json").read_text())
        assert payload["error"] == "PreconditionViolated"
        assert len(payload["witness"]["members"]) == 5

    def test_budget_exit_code(self, graphs_dir):
        code = run_cli("decompose", "--input", str(graphs_dir / "petersen.g6"),
                       "--mode", "degenerateC", "--p", "1", "--q", "2",
                       "--budget-nodes", "1")
        assert code == 4

    def test_degenerate_modes(self, graphs_dir):
        out = graphs_dir / "runA"
        code = run_cli("decompose", "--input", str(graphs_dir / "petersen.g6"),
                       "--mode", "degenerateA", "--p", "1", "--q", "2",
                       "--out", str(out))
        assert code == 0
        assert json.loads((out / "report.json").read_text())["overall"]

    def test_lemma2_mode(self, graphs_dir):
        out = graphs_dir / "runL"
        code = run_cli("decompose", "--input", str(graphs_dir / "k55.g6"),
                       "--mode", "lemma2", "--p", "2", "--q", "4",
                       "--out", str(out))
        assert code == 0

    def test_missing_family_is_config_error(self, graphs_dir):
        code = run_cli("decompose", "--input", str(graphs_dir / "k55.g6"),
                       "--mode", "two", "--p", "2", "--q", "4")
        assert code == 1

    def test_unknown_flag_is_config_error(self, graphs_dir):
        assert run_cli("decompose", "--nonsense") == 1

    def test_replay_reproduces_artifacts(self, graphs_dir):
        out = graphs_dir / "run"
        run_cli("decompose", "--input", str(graphs_dir / "k55.g6"),
                "--mode", "two", "--family", "clique:2", "--p", "2", "--q", "4",
                "--out", str(out))
        first = {
            name: (out / name).read_text()
            for name in ("decomposition.json", "report.json", "run_config.json")
        }
        code = run_cli("decompose", "--config", str(out / "run_config.json"))
        assert code == 0
        for name, content in first.items():
            assert (out / name).read_text() == content


class TestVerifyCommand:
    def test_round_trip_and_corruption(self, graphs_dir):
        out = graphs_dir / "run"
        run_cli("decompose", "--input", str(graphs_dir / "k55.g6"),
                "--mode", "two", "--family", "clique:2", "--p", "2", "--q", "4",
                "--out", str(out))
        code = run_cli("verify", "--input", str(graphs_dir / "k55.g6"),
                       "--decomposition", str(out / "decomposition.json"),
                       "--mode", "two", "--family", "clique:2",
                       "--p", "2", "--q", "4")
        assert code == 0
        record = json.loads((out / "decomposition.json").read_text())
        record["parts"][0] = record["parts"][0][:-1]
        record["parts"][1].append(4)
        bad = graphs_dir / "bad.json"
        bad.write_text(json.dumps(record))
        code = run_cli("verify", "--input", str(graphs_dir / "k55.g6"),
                       "--decomposition", str(bad),
                       "--mode", "two", "--family", "clique:2",
                       "--p", "2", "--q", "4", "--out", str(graphs_dir / "v2"))
        assert code == 2
        report = json.loads((graphs_dir / "v2" / "report.json").read_text())
        assert report["overall"] is False


class TestHuntCommand:
    def test_clean_corpus_exit_zero(self, tmp_path):
        out = tmp_path / "hunt"
        code = run_cli("hunt", "--claim", "theorem1", "--n", "6",
                       "--connected", "--delta", "5", "--kd-free",
                       "--omega-min", "4",
                       "--grid", "p=3,q=3,family=clique:3",
                       "--exhaustive", "--out", str(out))
        assert code == 0
        summary = json.loads((out / "hunt_summary.json").read_text())
        assert summary["counterexample_candidates"] == []
        assert summary["engine_gaps"] == []
        assert summary["cells"] == summary["engine_ok"] > 0
        records = (out / "hunt_records.ndjson").read_text().splitlines()
        assert len(records) == summary["cells"]

    def test_dirty_corpus_exit_two(self, tmp_path):
        code = run_cli("hunt", "--claim", "theorem1", "--n", "5",
                       "--connected", "--delta", "4",
                       "--grid", "p=2,q=3,family=clique:2",
                       "--out", str(tmp_path / "hunt"))
        assert code == 2

    def test_grid_parse_error(self, tmp_path):
        code = run_cli("hunt", "--claim", "theorem1", "--n", "5",
                       "--grid", "zzz")
        assert code == 1

    def test_hunt_replay_byte_identical(self, tmp_path):
        args = ["hunt", "--claim", "theorem1", "--n", "6",
                "--connected", "--delta", "5", "--kd-free", "--omega-min", "4",
                "--grid", "p=3,q=3,family=clique:3"]
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert run_cli(*args, "--out", str(out1)) == 0
        assert run_cli(*args, "--out", str(out2)) == 0
        for name in ("hunt_records.ndjson", "hunt_summary.json"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


class TestEnumerateCommand:
    def test_stream_counts(self, tmp_path):
        out = tmp_path / "enum"
        code = run_cli("enumerate", "--n", "4", "--connected", "--dedup",
                       "--out", str(out))
        assert code == 0
        lines = (out / "graphs.g6").read_text().splitlines()
        assert len(lines) == 6  # connected graphs on 4 vertices up to isomorphism

    def test_range_exit(self, tmp_path):
        assert run_cli("enumerate", "--n", "11") == 4


class TestStatsCommand:
    def test_stats_fields(self, graphs_dir, capsys):
        code = run_cli("stats", "--input", str(graphs_dir / "petersen.g6"))
        assert code == 0
        stats = json.loads(capsys.readouterr().out)
        assert stats == {"n": 10, "edges": 15, "min_degree": 3, "max_degree": 3,
                         "components": 1, "clique_number": 2, "degeneracy": 3}
