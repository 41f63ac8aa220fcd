"""Command line interface: subcommand wiring, exit codes, file handling."""

import pytest

from supplykg import parse_graph
from supplykg.cli import main
from supplykg.schema import nodes_of_kind
from supplykg import vocab as v


def run(*argv):
    return main(list(argv))


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "g.nt"
    assert run("generate", "--preset", "automotive", "--seed", "7", "--out", str(path)) == 0
    return path


# --- generate ---

def test_generate_writes_parseable_topology(graph_file):
    graph = parse_graph(graph_file.read_text())
    assert len(nodes_of_kind(graph, v.SUPPLIER)) == 10
    assert len(nodes_of_kind(graph, v.CUSTOMER)) == 8
    assert len(nodes_of_kind(graph, v.OEM)) == 1


def test_generate_to_stdout(capsys):
    assert run("generate", "--preset", "dairy") == 0
    out = capsys.readouterr().out
    assert ":OEM1 a :OEM .\n" in out


def test_generate_set_overrides(tmp_path, capsys):
    assert run("generate", "--preset", "dairy", "--set", "order_quantity=9") == 0
    assert ' :hasQuantity 9 ' in capsys.readouterr().out


def test_generate_needs_a_source():
    assert run("generate") == 1


def test_generate_rejects_bad_override():
    assert run("generate", "--preset", "dairy", "--set", "nope=1") == 2


def test_generate_from_config_file(tmp_path, capsys):
    cfg = tmp_path / "net.cfg"
    cfg.write_text("preset = dairy\nseed = 3\n")
    assert run("generate", "--config", str(cfg)) == 0
    direct = capsys.readouterr().out
    assert run("generate", "--preset", "dairy", "--seed", "3") == 0
    assert capsys.readouterr().out == direct


# --- simulate ---

def test_simulate_produces_one_row_per_step(graph_file, tmp_path):
    out = tmp_path / "r.csv"
    final = tmp_path / "final.nt"
    code = run(
        "simulate", "--graph", str(graph_file), "--horizon", "178",
        "--out", str(out), "--final-graph", str(final),
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,considered,from_stock,produced,unfulfilled"
    assert len(lines) == 179
    assert "isFulfilled" in final.read_text()


def test_simulate_rejects_zero_horizon(graph_file, tmp_path):
    out = tmp_path / "r.csv"
    assert run("simulate", "--graph", str(graph_file), "--horizon", "0", "--out", str(out)) == 2
    assert not out.exists(), "failed runs must not leave partial files"


def test_simulate_missing_graph(tmp_path):
    assert run("simulate", "--graph", str(tmp_path / "nope.nt"), "--horizon", "5") == 1


# --- query ---

def test_query_select_to_csv(graph_file, tmp_path, capsys):
    q = tmp_path / "q.rq"
    q.write_text("SELECT ?n WHERE { ?n a :OEM . }")
    assert run("query", "--graph", str(graph_file), str(q)) == 0
    assert capsys.readouterr().out == "n\n:OEM1\n"


def test_query_with_parameters(graph_file, tmp_path, capsys):
    q = tmp_path / "q.rq"
    q.write_text("SELECT ?s WHERE { ?s :belongsToTier tier . }")
    assert run("query", "--graph", str(graph_file), str(q), "--param", "tier=:SupplierTier1") == 0
    out = capsys.readouterr().out
    assert ":SupplierNode1.1" in out and ":SupplierNode1.2" in out


def test_query_insert_requires_out(graph_file, tmp_path):
    q = tmp_path / "i.rq"
    q.write_text("INSERT { ?n :hasSCORKPI :X . } WHERE { ?n a :OEM . }")
    assert run("query", "--graph", str(graph_file), str(q)) == 1
    out = tmp_path / "g2.nt"
    assert run("query", "--graph", str(graph_file), str(q), "--out", str(out)) == 0
    assert ":OEM1 :hasSCORKPI :X .\n" in out.read_text()


def test_query_syntax_error(graph_file, tmp_path):
    q = tmp_path / "bad.rq"
    q.write_text("SELECT WHERE banana")
    assert run("query", "--graph", str(graph_file), str(q)) == 2


def test_query_bad_param_value(graph_file, tmp_path):
    q = tmp_path / "q.rq"
    q.write_text("SELECT ?s WHERE { ?s :belongsToTier tier . }")
    assert run("query", "--graph", str(graph_file), str(q), "--param", "tier=<<") == 1
    assert run("query", "--graph", str(graph_file), str(q), "--param", "tier") == 1


# --- report ---

def test_report_csv(graph_file, capsys):
    assert run("report", "--graph", str(graph_file), "--t", "0") == 0
    out = capsys.readouterr().out
    assert out.startswith("metric,subject,value\n")
    assert "average_kpi,Responsiveness," in out


# --- sweep ---

def test_sweep_shipped_scenario_file(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    plot = tmp_path / "sweep.tsv"
    code = run(
        "sweep", "--scenarios", "scenarios/automotive_sweep.cfg",
        "--out", str(out), "--plot", str(plot),
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert [line.split(",")[0] for line in lines] == ["label", "S1", "S2", "S3"]
    assert plot.read_text().startswith("# label\t")


def test_sweep_rejects_sectionless_file(tmp_path):
    bad = tmp_path / "s.cfg"
    bad.write_text("preset = dairy\n")
    assert run("sweep", "--scenarios", str(bad)) == 2


# --- validate ---

def test_validate_clean_graph(graph_file, capsys):
    assert run("validate", "--graph", str(graph_file)) == 0
    assert "0 errors" in capsys.readouterr().err


def test_validate_reports_errors(graph_file, tmp_path, capsys):
    broken = tmp_path / "broken.nt"
    broken.write_text(graph_file.read_text() + ':OEM1 :hasColor "blue" .\n')
    assert run("validate", "--graph", str(broken)) == 2
    captured = capsys.readouterr()
    assert "unknown-predicate" in captured.out
    assert run("validate", "--graph", str(broken), "--allow-unknown") == 0


# --- export ---

def test_export_normalizes_legacy_forms(tmp_path, capsys):
    old = tmp_path / "old.nt"
    old.write_text(':A :hasLeadTime 4 .\n:Inv1 :hasQuantity "10m" .\n')
    assert run("export", "--graph", str(old)) == 0
    out = capsys.readouterr().out
    assert ":A :hasDeliveryTime 4 .\n" in out
    assert ":Inv1 :hasQuantity 10 .\n" in out
    assert "hasLeadTime" not in out


def test_export_is_idempotent(graph_file, tmp_path):
    once = tmp_path / "once.nt"
    twice = tmp_path / "twice.nt"
    assert run("export", "--graph", str(graph_file), "--out", str(once)) == 0
    assert run("export", "--graph", str(once), "--out", str(twice)) == 0
    assert once.read_text() == twice.read_text()


# --- invocation plumbing ---

def test_unknown_subcommand_is_usage_error():
    assert run("frobnicate") == 1


def test_bad_flag_value_is_usage_error(graph_file):
    assert run("simulate", "--graph", str(graph_file), "--horizon", "soon") == 1


def test_help_exits_zero():
    with pytest.raises(SystemExit) as exc:
        run("--help")
    assert exc.value.code == 0


def test_pipeline_is_deterministic(tmp_path):
    outputs = []
    for tag in ("a", "b"):
        g = tmp_path / f"g{tag}.nt"
        r = tmp_path / f"r{tag}.csv"
        f = tmp_path / f"f{tag}.nt"
        k = tmp_path / f"k{tag}.csv"
        assert run("generate", "--preset", "dairy", "--seed", "13", "--out", str(g)) == 0
        assert run("simulate", "--graph", str(g), "--horizon", "60", "--out", str(r), "--final-graph", str(f)) == 0
        assert run("report", "--graph", str(f), "--t", "0", "--out", str(k)) == 0
        outputs.append((g.read_bytes(), r.read_bytes(), f.read_bytes(), k.read_bytes()))
    assert outputs[0] == outputs[1]
