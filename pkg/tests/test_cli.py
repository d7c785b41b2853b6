"""End-to-end runs of the command-line front end through cli.main."""

import networkx as nx
import pytest

from localexpr import cli
from localexpr.structures import complete_graph, cycle_graph


def write_edgelist(path, n, edges):
    lines = [f"{n}"] + [f"{u} {v}" for u, v in edges]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


@pytest.fixture
def k4_file(tmp_path):
    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    return write_edgelist(tmp_path / "k4.edgelist", 4, edges)


@pytest.fixture
def c4_file(tmp_path):
    return write_edgelist(tmp_path / "c4.edgelist", 4,
                          [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def c5_file(tmp_path):
    return write_edgelist(tmp_path / "c5.edgelist", 5,
                          [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])


class TestDecide:
    def test_member_with_certificate_and_stats(self, k4_file, tmp_path,
                                               capsys):
        cert = str(tmp_path / "cert.lx")
        rc = cli.main(["decide", "--expr", "chordal_peo",
                       "--graph", k4_file, "--cert", cert, "--stats"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "result=member" in out
        assert "nodes=" in out and "wall_time=" in out
        # the saved certificate must verify as written
        rc = cli.main(["verify", "--expr", "chordal_peo",
                       "--graph", k4_file, "--cert", cert])
        assert rc == 0
        assert "result=valid" in capsys.readouterr().out

    def test_non_member(self, c5_file, capsys):
        rc = cli.main(["decide", "--expr", "cobipartite_2ec",
                       "--graph", c5_file])
        assert rc == 1
        assert "result=non-member" in capsys.readouterr().out

    def test_budget_exhaustion_is_unknown(self, c5_file, capsys):
        rc = cli.main(["decide", "--expr", "chordal_peo",
                       "--graph", c5_file, "--max-nodes", "1", "--stats"])
        out = capsys.readouterr().out
        assert rc == 2
        assert "result=unknown" in out

    def test_deterministic_flag_repeats_output(self, c4_file, capsys):
        args = ["decide", "--expr", "chordal_peo", "--graph", c4_file,
                "--stats", "--deterministic"]
        cli.main(args)
        first = capsys.readouterr().out
        cli.main(args)
        second = capsys.readouterr().out
        # wall time varies between runs; everything else must not
        strip = lambda s: [l for l in s.splitlines()
                           if not l.startswith("wall_time=")]
        assert strip(first) == strip(second)

    def test_missing_graph_file(self, capsys):
        rc = cli.main(["decide", "--expr", "chordal_peo",
                       "--graph", "/nonexistent/g.edgelist"])
        assert rc == 3
        assert "error:" in capsys.readouterr().err


class TestVerify:
    def test_invalid_certificate(self, c4_file, k4_file, tmp_path, capsys):
        cert = str(tmp_path / "cert.lx")
        cli.main(["decide", "--expr", "chordal_peo", "--graph", k4_file,
                  "--cert", cert])
        capsys.readouterr()
        # a K4 certificate cannot witness C4 membership
        rc = cli.main(["verify", "--expr", "chordal_peo",
                       "--graph", c4_file, "--cert", cert])
        assert rc == 1
        assert "result=invalid" in capsys.readouterr().out


class TestEquiv:
    def test_equivalent(self, capsys):
        rc = cli.main(["equiv",
                       "--f", "!(E(x1, x2) & E(x2, x1))",
                       "--g", "!E(x1, x2) | !E(x2, x1)"])
        assert rc == 0
        assert "result=equivalent" in capsys.readouterr().out

    def test_inequivalent(self, capsys):
        rc = cli.main(["equiv", "--f", "E(x1, x2)", "--g", "E(x2, x1)",
                       "--sig", "digraph"])
        assert rc == 1
        assert "result=inequivalent" in capsys.readouterr().out


class TestEnumerate:
    def test_complete_graphs_up_to_4(self, capsys):
        rc = cli.main(["enumerate", "--expr", "complete_lor",
                       "--max-n", "4", "--all"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "members=4" in out
        lines = [l for l in out.splitlines() if not l.startswith("members=")]
        graphs = [nx.from_graph6_bytes(l.encode()) for l in lines]
        for i, g in enumerate(graphs):
            assert nx.is_isomorphic(g, nx.complete_graph(i + 1))


class TestSynth:
    def test_symmetric_closure_table(self, tmp_path, capsys):
        table = tmp_path / "table.lx"
        table.write_text(
            "signature d { rel E: 2; }\n"
            "structure arc_in over d { vertices 2; E = { (0, 1) }; }\n"
            "structure arc_out over d {\n"
            "  vertices 2; E = { (0, 1) (1, 0) };\n"
            "}\n"
            "structure none_in over d { vertices 2; }\n"
            "structure none_out over d { vertices 2; }\n"
            "structure one_in over d { vertices 1; }\n"
            "structure one_out over d { vertices 1; }\n")
        rc = cli.main(["synth", "--table", str(table)])
        out = capsys.readouterr().out
        assert rc == 0
        assert "definition synthesized" in out
        assert "E(x1, x2) :=" in out
        # the synthesized body must mention both arc directions
        body = [l for l in out.splitlines() if ":=" in l][0]
        assert "E(x1, x2)" in body.split(":=")[1]
        assert "E(x2, x1)" in body.split(":=")[1]

    def test_unpaired_table_rejected(self, tmp_path, capsys):
        table = tmp_path / "bad.lx"
        table.write_text(
            "signature d { rel E: 2; }\n"
            "structure a_in over d { vertices 1; }\n")
        rc = cli.main(["synth", "--table", str(table)])
        assert rc == 3


class TestOtherCommands:
    def test_snp_prints_a_sentence(self, capsys):
        rc = cli.main(["snp", "--expr", "complete_lor"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "exists" in out and "forall" in out

    def test_catalog_lists_entries(self, capsys):
        rc = cli.main(["catalog"])
        out = capsys.readouterr().out
        assert rc == 0
        assert any(line.startswith("chordal_peo\t")
                   for line in out.splitlines())

    def test_bounds_for_complete_graphs(self, capsys):
        rc = cli.main(["bounds", "--expr", "complete_lor", "--max-n", "3"])
        out = capsys.readouterr().out
        assert rc == 0
        # relative to all binary structures: the loop, the non-edge, and
        # the one-way arc are each minimal obstructions
        assert "bounds=3" in out
        assert "vertices 2;" in out

    def test_document_expression_loads(self, tmp_path, k4_file, capsys):
        from importlib.resources import files
        doc = (files("localexpr") / "data" / "complete_lor.lx").read_text()
        path = tmp_path / "e.lx"
        path.write_text(doc)
        rc = cli.main(["decide", "--expr", f"{path}#complete_lor",
                       "--graph", k4_file])
        assert rc == 0
