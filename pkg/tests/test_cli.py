"""End-to-end CLI runs, config resolution, and error-path exit codes."""

import pytest

import snipgraph.cli as cli
from snipgraph.cli import (
    ConfigError,
    _parse_pattern_args,
    load_config_file,
    main,
)
from snipgraph.extract import load_patterns_file
from snipgraph.graph import read_edge_list_file
from snipgraph.search import SearchGateway, TransportError, save_corpus_file

from conftest import NAMES, CorpusBuilder

A, B, C = NAMES[:3]


def write_lines(path, lines):
    path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
    return str(path)


def chain_builder():
    builder = CorpusBuilder()
    builder.pair(A, B, times=2)
    builder.pair(B, C, times=2)
    return builder


@pytest.fixture
def workspace(tmp_path):
    """corpus.tsv + names.txt + seeds.txt for the standard chain corpus."""
    save_corpus_file(chain_builder().records, str(tmp_path / "corpus.tsv"))
    write_lines(tmp_path / "names.txt", NAMES)
    write_lines(tmp_path / "seeds.txt", [A])
    return tmp_path


def base_args(ws, command="extract", prefix="out/run"):
    return [
        command,
        "--seeds", str(ws / "seeds.txt"),
        "--catalog", str(ws / "names.txt"),
        "--corpus", str(ws / "corpus.tsv"),
        "--output-prefix", str(ws / prefix),
    ]


class TestExtractCommand:
    def test_bf_end_to_end(self, workspace, capsys):
        assert main(base_args(workspace)) == 0
        out = capsys.readouterr().out
        prefix = str(workspace / "out/run")
        assert f"wrote {prefix}.edges (2 edges, 3 nodes)" in out
        assert f"wrote {prefix}.trace.csv (3 steps)" in out
        graph = read_edge_list_file(prefix + ".edges")
        assert sorted(graph.edges()) == [(A, B, 4), (B, C, 4)]
        assert (workspace / "out/run.summary.txt").read_text() == (
            "status: complete\n"
            "stopped: frontier-empty\n"
            "mode: bf\n"
            "seeds: 1\n"
            "nodes: 3\n"
            "edges: 2\n"
            "requests: 3\n"
            "queries: 3\n"
            "patterns: 10\n"
        )
        trace = (workspace / "out/run.trace.csv").read_text().splitlines()
        assert trace[0] == "step,entity,snippets,new_nodes,new_edges,nodes,edges,requests"
        assert len(trace) == 4

    def test_warm_cache_rerun_is_free_and_identical(self, workspace):
        args = base_args(workspace) + ["--cache-dir", str(workspace / "cache")]
        assert main(args) == 0
        cold_edges = (workspace / "out/run.edges").read_bytes()
        # the cold trace records spending; warm runs must agree with each
        # other byte for byte and spend nothing
        assert main(args) == 0
        warm_edges = (workspace / "out/run.edges").read_bytes()
        warm_trace = (workspace / "out/run.trace.csv").read_bytes()
        summary = (workspace / "out/run.summary.txt").read_text()
        assert warm_edges == cold_edges
        assert "requests: 0\n" in summary
        assert main(args) == 0
        assert (workspace / "out/run.edges").read_bytes() == warm_edges
        assert (workspace / "out/run.trace.csv").read_bytes() == warm_trace

    def test_custom_query_patterns_file(self, workspace, capsys):
        builder = CorpusBuilder()
        builder.pair(A, B, phrase="duets with", times=2)
        save_corpus_file(builder.records, str(workspace / "corpus.tsv"))
        write_lines(workspace / "patterns.txt", ["duets with"])
        args = base_args(workspace) + ["--patterns", str(workspace / "patterns.txt")]
        assert main(args) == 0
        graph = read_edge_list_file(str(workspace / "out/run.edges"))
        assert sorted(graph.edges()) == [(A, B, 4)]

    def test_empty_patterns_file(self, workspace, capsys):
        write_lines(workspace / "patterns.txt", ["# nothing"])
        args = base_args(workspace) + ["--patterns", str(workspace / "patterns.txt")]
        assert main(args) == 1
        assert "pattern file is empty" in capsys.readouterr().err


class TestMinePatterns:
    @pytest.fixture
    def mining_workspace(self, workspace):
        builder = CorpusBuilder()
        builder.pair(A, B, times=2)
        builder.pair(A, B, phrase="beside", times=6)
        save_corpus_file(builder.records, str(workspace / "corpus.tsv"))
        return workspace

    def test_writes_pattern_file(self, mining_workspace, capsys):
        ws = mining_workspace
        assert main(base_args(ws, command="mine-patterns")) == 0
        patterns = load_patterns_file(str(ws / "out/run.patterns.txt"))
        assert "beside" in [p.phrase for p in patterns]
        summary = (ws / "out/run.summary.txt").read_text()
        assert "mode: pattern-iter\n" in summary
        assert "iterations: 2\n" in summary
        assert "patterns admitted: 1\n" in summary
        assert "run.patterns.txt" in capsys.readouterr().out

    def test_rejects_non_mining_mode(self, mining_workspace, capsys):
        args = base_args(mining_workspace, command="mine-patterns") + ["--mode", "bf"]
        assert main(args) == 1
        assert "mine-patterns requires mode pattern-iter" in capsys.readouterr().err

    def test_extract_in_pattern_iter_mode_also_mines(self, mining_workspace):
        ws = mining_workspace
        args = base_args(ws) + ["--mode", "pattern-iter"]
        assert main(args) == 0
        assert (ws / "out/run.patterns.txt").exists()


class TestBaselineCommand:
    def test_end_to_end(self, workspace):
        builder = CorpusBuilder()
        builder.add(f"{A} with {B} tonight")
        builder.add(f"{A} with {B} again")
        save_corpus_file(builder.records, str(workspace / "corpus.tsv"))
        assert main(base_args(workspace, command="baseline")) == 0
        graph = read_edge_list_file(str(workspace / "out/run.edges"))
        assert sorted(graph.edges()) == [(A, B, 2)]
        summary = (workspace / "out/run.summary.txt").read_text()
        assert "mode: baseline\n" in summary
        assert "status: complete\n" in summary


class TestMakeCorpus:
    def test_generates_matching_files(self, tmp_path, capsys):
        prefix = str(tmp_path / "c" / "c1")
        args = [
            "make-corpus", "--output-prefix", prefix,
            "--nodes", "8", "--rng-seed", "3",
        ]
        assert main(args) == 0
        out = capsys.readouterr().out
        assert "snippets)" in out and "names)" in out and "edges)" in out
        names = (tmp_path / "c/c1.names.txt").read_text().splitlines()
        assert len(names) == 8
        truth = read_edge_list_file(prefix + ".truth.edges")
        assert truth.edge_count > 0

    def test_generated_corpus_feeds_extract(self, tmp_path):
        prefix = str(tmp_path / "c1")
        assert main(["make-corpus", "--output-prefix", prefix, "--nodes", "6"]) == 0
        names = (tmp_path / "c1.names.txt").read_text().splitlines()
        write_lines(tmp_path / "seeds.txt", [names[0]])
        rc = main([
            "extract",
            "--seeds", str(tmp_path / "seeds.txt"),
            "--catalog", prefix + ".names.txt",
            "--corpus", prefix + ".corpus.tsv",
            "--output-prefix", str(tmp_path / "run"),
        ])
        assert rc == 0
        graph = read_edge_list_file(str(tmp_path / "run.edges"))
        truth = read_edge_list_file(prefix + ".truth.edges")
        assert sorted((a, b) for a, b, _w in graph.edges()) == sorted(
            (a, b) for a, b, _w in truth.edges()
        )

    def test_explicit_edges_file(self, tmp_path):
        edges_path = tmp_path / "truth.edges"
        edges_path.write_text(f"{A}\t{B}\t2\n{B}\t{C}\t3\n", encoding="utf-8")
        prefix = str(tmp_path / "c2")
        args = ["make-corpus", "--output-prefix", prefix, "--edges-file", str(edges_path)]
        assert main(args) == 0
        truth = read_edge_list_file(prefix + ".truth.edges")
        assert sorted(truth.edges()) == [(A, B, 2), (B, C, 3)]
        names = (tmp_path / "c2.names.txt").read_text().splitlines()
        assert names == sorted([A, B, C])

    def test_bad_pattern_weight(self, tmp_path, capsys):
        args = [
            "make-corpus", "--output-prefix", str(tmp_path / "x"),
            "--pattern", "and=0",
        ]
        assert main(args) == 1
        assert "pattern weight must be > 0" in capsys.readouterr().err


class TestAnalyzeCommand:
    @pytest.fixture
    def graph_file(self, tmp_path):
        path = tmp_path / "g.edges"
        path.write_text(f"{A}\t{B}\t3\n{B}\t{C}\t5\n", encoding="utf-8")
        return path

    def test_dist_report_default_prefix(self, graph_file, capsys):
        assert main(["analyze", "--graph", str(graph_file)]) == 0
        out = capsys.readouterr().out
        assert "degree: n=3 mean=1.3333 sd=0.4714 median=1" in out
        assert "weight: n=2 mean=4.0000 sd=1.0000 median=4" in out
        base = str(graph_file)[: -len(".edges")]
        degree_rows = open(base + ".degree_hist.csv").read()
        assert degree_rows == '"degree","count"\n"1","2"\n"2","1"\n'
        weight_rows = open(base + ".weight_hist.csv").read()
        assert weight_rows == '"weight","count"\n"3","1"\n"5","1"\n'

    def test_top_report(self, graph_file, tmp_path, capsys):
        prefix = str(tmp_path / "report")
        args = [
            "analyze", "--graph", str(graph_file),
            "--report", "top", "--top", "1",
            "--output-prefix", prefix,
        ]
        assert main(args) == 0
        out = capsys.readouterr().out
        assert f"{B} -- {C} (5)" in out
        assert open(prefix + ".relations.csv").read() == (
            '"entity_a","entity_b","weight"\n'
            f'"{B}","{C}","5"\n'
        )

    def test_missing_graph(self, tmp_path, capsys):
        assert main(["analyze", "--graph", str(tmp_path / "nope.edges")]) == 1
        assert "cannot read graph:" in capsys.readouterr().err


class TestConfigResolution:
    def test_flag_overrides_config(self, workspace, capsys):
        config = workspace / "run.cfg"
        config.write_text("mode = prio\ntau = 3\n", encoding="utf-8")
        args = base_args(workspace) + ["--config", str(config), "--mode", "bf"]
        assert main(args) == 0
        summary = (workspace / "out/run.summary.txt").read_text()
        assert "mode: bf\n" in summary
        # tau=3 still came from the config: 2-snippet pairs stay out
        assert "edges: 0\n" in summary

    def test_config_applies_without_flag(self, workspace):
        config = workspace / "run.cfg"
        config.write_text("mode = prio\n", encoding="utf-8")
        assert main(base_args(workspace) + ["--config", str(config)]) == 0
        summary = (workspace / "out/run.summary.txt").read_text()
        assert "mode: prio\n" in summary

    def test_unknown_key(self, workspace, capsys):
        config = workspace / "run.cfg"
        config.write_text("bogus = 1\n", encoding="utf-8")
        assert main(base_args(workspace) + ["--config", str(config)]) == 1
        err = capsys.readouterr().err
        assert f"{config}:1: unknown key 'bogus'" in err

    def test_bad_value(self, workspace, capsys):
        config = workspace / "run.cfg"
        config.write_text("tau = many\n", encoding="utf-8")
        assert main(base_args(workspace) + ["--config", str(config)]) == 1
        assert "config tau: bad value 'many'" in capsys.readouterr().err

    def test_missing_equals(self, workspace, capsys):
        config = workspace / "run.cfg"
        config.write_text("tau 3\n", encoding="utf-8")
        assert main(base_args(workspace) + ["--config", str(config)]) == 1
        assert f"{config}:1: expected key=value" in capsys.readouterr().err

    def test_load_config_file_parses_and_trims(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text(
            "# comment\n\n tau = 3 \nmode=prio\nalpha = 0.5\n", encoding="utf-8"
        )
        assert load_config_file(str(config)) == {
            "tau": "3",
            "mode": "prio",
            "alpha": "0.5",
        }

    def test_load_config_file_missing(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read config file"):
            load_config_file(str(tmp_path / "nope.cfg"))


class TestErrorPaths:
    def test_missing_seeds_flag(self, workspace, capsys):
        args = base_args(workspace)
        del args[1:3]
        assert main(args) == 1
        assert "--seeds is required" in capsys.readouterr().err

    def test_missing_output_prefix(self, workspace, capsys):
        args = base_args(workspace)[:-2]
        assert main(args) == 1
        assert "--output-prefix is required" in capsys.readouterr().err

    def test_missing_catalog_file(self, workspace, capsys):
        args = base_args(workspace)
        args[4] = str(workspace / "absent.txt")
        assert main(args) == 1
        assert "cannot read catalog:" in capsys.readouterr().err

    def test_empty_catalog(self, workspace, capsys):
        (workspace / "names.txt").write_text("\n\n", encoding="utf-8")
        assert main(base_args(workspace)) == 1
        assert "catalog is empty:" in capsys.readouterr().err

    def test_empty_seeds_file(self, workspace, capsys):
        write_lines(workspace / "seeds.txt", [])
        assert main(base_args(workspace)) == 1
        assert "seeds file is empty" in capsys.readouterr().err

    def test_seed_not_in_catalog(self, workspace, capsys):
        write_lines(workspace / "seeds.txt", ["Zo Nobody"])
        assert main(base_args(workspace)) == 1
        assert "seed entity not in catalog" in capsys.readouterr().err

    def test_bad_tau_flag(self, workspace, capsys):
        assert main(base_args(workspace) + ["--tau", "0"]) == 1
        assert "tau must be >= 1" in capsys.readouterr().err

    def test_unknown_flag(self, workspace, capsys):
        assert main(base_args(workspace) + ["--frobnicate"]) == 1

    def test_bad_backend_name(self, workspace, capsys):
        config = workspace / "run.cfg"
        config.write_text("backend = tape\n", encoding="utf-8")
        assert main(base_args(workspace) + ["--config", str(config)]) == 1
        assert "backend must be replay or live, not 'tape'" in capsys.readouterr().err


class TestLiveGuards:
    def test_live_backend_needs_flag(self, workspace, capsys):
        assert main(base_args(workspace) + ["--backend", "live"]) == 1
        assert "live backend requires the --live flag" in capsys.readouterr().err

    def test_live_flag_needs_api_key(self, workspace, capsys, monkeypatch):
        monkeypatch.delenv(cli.API_KEY_ENV, raising=False)
        args = base_args(workspace) + ["--backend", "live", "--live"]
        assert main(args) == 1
        assert "SEARCH_API_KEY is not set" in capsys.readouterr().err


class FailingBackend:
    def fetch(self, raw_query, offset, count):
        raise TransportError("socket down")


class TestTransportAbort:
    def test_partial_outputs_and_exit_2(self, workspace, capsys, monkeypatch):
        def sleepless_gateway(backend, cache=None):
            return SearchGateway(FailingBackend(), cache=cache, sleep=lambda _s: None)

        monkeypatch.setattr(cli, "SearchGateway", sleepless_gateway)
        assert main(base_args(workspace)) == 2
        captured = capsys.readouterr()
        assert "run aborted (transport-error); partial outputs retained" in captured.err
        summary = (workspace / "out/run.summary.txt").read_text()
        assert "status: aborted\n" in summary
        assert "stopped: transport-error\n" in summary
        assert (workspace / "out/run.edges").exists()


class TestParsePatternArgs:
    def test_weights_merge_and_escape(self):
        parsed = _parse_pattern_args(["and=2", "y", "and", "\\s"])
        assert parsed == {"and": 3.0, "y": 1.0, " ": 1.0}

    def test_zero_weight_rejected(self):
        with pytest.raises(ConfigError, match="pattern weight must be > 0"):
            _parse_pattern_args(["x=0"])

    def test_empty_phrase_rejected(self):
        with pytest.raises(ConfigError, match="empty pattern"):
            _parse_pattern_args(["=2"])
