from __future__ import annotations

import csv
import io
import json

import pytest

from gedsearch import format_text_graph, generate_synthetic, parse_text_dataset
from gedsearch.cli import load_dataset, main, parse_costs
from conftest import make_graph


@pytest.fixture
def dataset_file(tmp_path):
    graphs = [
        generate_synthetic(4, 0.5, 2, seed=s, graph_id=f"g{s}") for s in range(3)
    ]
    path = tmp_path / "graphs.txt"
    path.write_text("".join(format_text_graph(g) for g in graphs), encoding="utf-8")
    return path


class TestParseCosts:
    def test_constant(self):
        costs = parse_costs("constant:3,1,2")
        assert costs.node_sub("a", "b") == 3.0
        assert costs.node_del("a") == 1.0
        assert costs.edge_ins("x") == 2.0

    def test_table(self, tmp_path):
        path = tmp_path / "costs.json"
        path.write_text(json.dumps({"node": {"sub_default": 9.0}}))
        costs = parse_costs(f"table:{path}")
        assert costs.node_sub("a", "b") == 9.0

    @pytest.mark.parametrize(
        "text",
        ["constant:1,2", "constant:a,b,c", "table:", "euclidean:2", "constant"],
    )
    def test_malformed_specifications(self, text):
        with pytest.raises(ValueError):
            parse_costs(text)


class TestLoadDataset:
    def test_single_file(self, dataset_file):
        graphs = load_dataset(dataset_file, "text")
        assert [g.graph_id for g in graphs] == ["g0", "g1", "g2"]

    def test_directory_reads_sorted_matching_files(self, tmp_path):
        for name, gid in [("b.txt", "second"), ("a.txt", "first")]:
            (tmp_path / name).write_text(
                format_text_graph(make_graph(gid, "ab")), encoding="utf-8"
            )
        (tmp_path / "notes.md").write_text("ignored")
        graphs = load_dataset(tmp_path, "text")
        assert [g.graph_id for g in graphs] == ["first", "second"]

    def test_duplicate_ids_rejected(self, tmp_path):
        doc = format_text_graph(make_graph("twin", "a"))
        (tmp_path / "x.txt").write_text(doc + doc, encoding="utf-8")
        with pytest.raises(ValueError, match="duplicate graph id"):
            load_dataset(tmp_path / "x.txt", "text")

    def test_empty_directory_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="no .txt files"):
            load_dataset(tmp_path, "text")


class TestMainRun:
    def test_writes_csv_and_returns_zero(self, dataset_file, tmp_path, capsys):
        out = tmp_path / "report.csv"
        code = main(
            [
                "run",
                "--dataset", str(dataset_file),
                "--algorithm", "k-refine",
                "--kappa", "2",
                "--deterministic",
                "--out", str(out),
            ]
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text(encoding="utf-8"))))
        assert len(rows) == 6  # three pairs plus three shuffled copies
        assert {r["algorithm"] for r in rows} == {"k-refine"}
        assert all(r["seconds"] == "0.000000" for r in rows)

    def test_stdout_by_default(self, dataset_file, capsys):
        code = main(
            ["run", "--dataset", str(dataset_file), "--kappa", "1",
             "--deterministic"]
        )
        assert code == 0
        captured = capsys.readouterr().out
        assert captured.startswith("g_id,h_id,algorithm,")

    def test_malformed_dataset_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("graph g\nn 1\nv 2 a\n")
        assert main(["run", "--dataset", str(bad)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_dataset_exits_two(self, tmp_path, capsys):
        assert main(["run", "--dataset", str(tmp_path / "absent.txt")]) == 2

    def test_bad_costs_exit_two(self, dataset_file, capsys):
        code = main(
            ["run", "--dataset", str(dataset_file), "--costs", "constant:1,2"]
        )
        assert code == 2

    def test_bad_workers_exit_two(self, dataset_file, capsys):
        code = main(["run", "--dataset", str(dataset_file), "--workers", "0"])
        assert code == 2


class TestMainExact:
    def write(self, tmp_path, name, graph):
        path = tmp_path / name
        path.write_text(format_text_graph(graph), encoding="utf-8")
        return path

    def test_prints_value_and_assignments(self, tmp_path, capsys):
        g = self.write(tmp_path, "g.txt", make_graph("g", "ab", [(1, 2, "x")]))
        h = self.write(tmp_path, "h.txt", make_graph("h", "a"))
        code = main(["exact", "--g", str(g), "--h", str(h)])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "exact 2.0"  # delete node 2 and its edge
        assert lines[1:] == ["1 -> 1", "2 -> -"]

    def test_dummy_rows_use_dashes(self, tmp_path, capsys):
        g = self.write(tmp_path, "g.txt", make_graph("g", "a"))
        h = self.write(tmp_path, "h.txt", make_graph("h", "ab"))
        assert main(["exact", "--g", str(g), "--h", str(h)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "exact 1.0"
        assert "- -> 2" in lines or "- -> 1" in lines

    def test_oversized_pair_exits_two(self, tmp_path, capsys):
        g = self.write(tmp_path, "g.txt", make_graph("g", "a" * 7))
        h = self.write(tmp_path, "h.txt", make_graph("h", "b" * 6))
        assert main(["exact", "--g", str(g), "--h", str(h)]) == 2
        assert "exceeds the guard" in capsys.readouterr().err

    def test_multi_graph_file_exits_two(self, tmp_path, capsys):
        doc = format_text_graph(make_graph("a", "a")) + format_text_graph(
            make_graph("b", "b")
        )
        path = tmp_path / "two.txt"
        path.write_text(doc, encoding="utf-8")
        assert main(["exact", "--g", str(path), "--h", str(path)]) == 2


class TestMainGen:
    def test_directory_output_round_trips(self, tmp_path):
        out = tmp_path / "corpus"
        code = main(
            ["gen", "--out", str(out), "--count", "4", "--nodes", "5",
             "--density", "0.5", "--seed", "9"]
        )
        assert code == 0
        files = sorted(p.name for p in out.iterdir())
        assert files == ["g000.txt", "g001.txt", "g002.txt", "g003.txt"]
        graphs = load_dataset(out, "text")
        assert all(g.num_nodes == 5 for g in graphs)

    def test_single_file_output(self, tmp_path):
        out = tmp_path / "all.txt"
        assert main(["gen", "--out", str(out), "--count", "3"]) == 0
        graphs = parse_text_dataset(out.read_text(encoding="utf-8"))
        assert [g.graph_id for g in graphs] == ["g000", "g001", "g002"]

    def test_generation_is_seed_deterministic(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        main(["gen", "--out", str(a), "--count", "2", "--seed", "5"])
        main(["gen", "--out", str(b), "--count", "2", "--seed", "5"])
        assert a.read_text() == b.read_text()

    def test_zero_count_exits_two(self, tmp_path, capsys):
        assert main(["gen", "--out", str(tmp_path / "x.txt"), "--count", "0"]) == 2

    def test_generated_corpus_feeds_run(self, tmp_path, capsys):
        corpus = tmp_path / "set"
        main(["gen", "--out", str(corpus), "--count", "3", "--nodes", "4"])
        code = main(
            ["run", "--dataset", str(corpus), "--kappa", "2", "--deterministic"]
        )
        assert code == 0
        assert len(capsys.readouterr().out.splitlines()) == 7
