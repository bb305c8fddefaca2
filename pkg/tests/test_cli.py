"""Tests for the CVGS command line"""

import io
import shutil
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from unittest import mock

from src.CVGS import EXIT_FAIL, EXIT_OK, EXIT_USAGE, graph_to_dot, main
from src.graph_core import graph_from_edges, new_graph, parse_graph, read_graph, write_graph
from src.gaussian_rules import apply_f2_rule
from src.shadow_eval import ScaleConvention
from tests.fixtures import FIVE_MODE_AFTER_LG, five_mode_graph, unit_triangle


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self.temp_dir = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def graph_file(self, g, name="g.cvg") -> str:
        return str(write_graph(g, self.temp_dir / name))

    def run_cli(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(list(argv))
        return code, out.getvalue(), err.getvalue()


class TestApply(CliTestCase):

    def test_five_mode_lg(self):
        target = self.temp_dir / "out.cvg"
        code, _, _ = self.run_cli("apply", "-i", self.graph_file(five_mode_graph()), "-e", "lg 1 1", "-o", str(target))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(read_graph(target), graph_from_edges(5, FIVE_MODE_AFTER_LG))

    def test_empty_script_keeps_graph(self):
        script = self.temp_dir / "ops.txt"
        script.write_text("# nothing to do\n", encoding="utf-8")
        code, out, _ = self.run_cli("apply", "-i", self.graph_file(five_mode_graph()), "-s", str(script))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(parse_graph(out), five_mode_graph())

    def test_f2_twice(self):
        code, out, _ = self.run_cli("apply", "-i", self.graph_file(five_mode_graph()), "-e", "f2 2", "-e", "f2 2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(parse_graph(out), five_mode_graph())

    def test_trace(self):
        trace = self.temp_dir / "trace"
        code, _, _ = self.run_cli("apply", "-i", self.graph_file(five_mode_graph()), "-e", "lg 1 1",
                                  "-e", "scale 2 1/2", "--trace", str(trace))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(sorted(p.name for p in trace.glob("*.cvg")), ["step_000.cvg", "step_001.cvg", "step_002.cvg"])

    def test_script_error_line(self):
        script = self.temp_dir / "ops.txt"
        script.write_text("lg 1 1\nswap 1 2\n", encoding="utf-8")
        code, _, err = self.run_cli("apply", "-i", self.graph_file(five_mode_graph()), "-s", str(script))
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("line 2", err)

    def test_graph_parse_error(self):
        bad = self.temp_dir / "bad.cvg"
        bad.write_text("cvgraph v1\nn 2\ne 1 1 1\n", encoding="utf-8")
        code, _, err = self.run_cli("apply", "-i", str(bad), "-e", "f2 1")
        self.assertEqual(code, EXIT_USAGE)
        self.assertTrue(err.startswith("error: line 3"))

    def test_missing_ops(self):
        code, _, err = self.run_cli("apply", "-i", self.graph_file(five_mode_graph()))
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("-s", err)

    def test_unknown_subcommand(self):
        code, _, _ = self.run_cli("frobnicate")
        self.assertEqual(code, EXIT_USAGE)


class TestStabilizers(CliTestCase):

    def test_single_edge(self):
        code, out, _ = self.run_cli("stabilizers", "-i", self.graph_file(graph_from_edges(2, [(1, 2, 1)])))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out, "G1: X1(1) Z2(1)\nG2: X2(1) Z1(1)\n")

    def test_edgeless_with_xi(self):
        code, out, _ = self.run_cli("stabilizers", "-i", self.graph_file(new_graph(3)), "--xi", "3/2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out, "G1: X1(3/2)\nG2: X2(3/2)\nG3: X3(3/2)\n")

    def test_five_mode(self):
        code, out, _ = self.run_cli("stabilizers", "-i", self.graph_file(five_mode_graph()))
        lines = out.splitlines()
        self.assertEqual(len(lines), 5)
        self.assertEqual(lines[0], "G1: X1(1) Z2(1) Z3(2) Z5(3)")
        self.assertEqual(lines[3], "G4: X4(1) Z3(1) Z5(2)")


class TestVerify(CliTestCase):

    def test_lg_agrees(self):
        code, out, _ = self.run_cli("verify", "-i", self.graph_file(five_mode_graph()), "-e", "lg 1 1", "--pauli-level")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("result: AGREE", out)

    def test_scale_prints_convention(self):
        code, out, _ = self.run_cli("verify", "-i", self.graph_file(five_mode_graph()), "-e", "scale 2 3")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("scale convention:", out)
        self.assertIn("lambda = e^{+r}", out)

    def test_oracle_line_follows_resolved_sign(self):
        flipped = ScaleConvention(exponent_sign=-1, gate_matches_squeezer=False)
        with mock.patch("src.CVGS.resolve_scale_convention", return_value=flipped):
            code, out, _ = self.run_cli("verify", "-i", self.graph_file(five_mode_graph()), "-e", "scale 2 3")
        self.assertEqual(code, EXIT_OK)
        oracle_line = [line for line in out.splitlines() if line.startswith("oracle:")][-1]
        self.assertIn("lambda = e^{-r}", oracle_line)
        self.assertIn("'multiply by e^{+r}'", oracle_line)

    def test_corrupted_rule_exits_nonzero(self):
        with mock.patch("src.gaussian_rules.apply_lg_rule", side_effect=lambda g, a, delta: g):
            code, out, _ = self.run_cli("verify", "-i", self.graph_file(five_mode_graph()), "-e", "lg 1 1")
        self.assertEqual(code, EXIT_FAIL)
        self.assertIn("result: MISMATCH", out)


class TestOrbitAndConnect(CliTestCase):

    def test_orbit_dump(self):
        dump = self.temp_dir / "orbit.txt"
        code, out, _ = self.run_cli("orbit", "-i", self.graph_file(unit_triangle()), "--delta", "1,-1",
                                    "--depth", "2", "-o", str(dump))
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(dump.exists())
        self.assertTrue((self.temp_dir / "orbit.txt.json").exists())
        self.assertIn("nodes=", out)
        first = dump.read_text(encoding="utf-8")
        code, _, _ = self.run_cli("orbit", "-i", self.graph_file(unit_triangle()), "--delta", "1,-1",
                                  "--depth", "2", "-o", str(dump))
        self.assertEqual(dump.read_text(encoding="utf-8"), first)

    def test_connect_to_itself(self):
        seq = self.temp_dir / "seq.txt"
        g = self.graph_file(unit_triangle())
        code, _, _ = self.run_cli("connect", "-a", g, "-b", g, "-o", str(seq))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(seq.read_text(encoding="utf-8"), "")

    def test_connect_f2(self):
        g1 = graph_from_edges(3, [(1, 2, 1), (2, 3, 2)])
        code, out, _ = self.run_cli("connect", "-a", self.graph_file(g1, "a.cvg"),
                                    "-b", self.graph_file(apply_f2_rule(g1, 2), "b.cvg"), "--f2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out, "f2 2\n")

    def test_connect_not_found(self):
        code, _, err = self.run_cli("connect", "-a", self.graph_file(graph_from_edges(2, [(1, 2, 1)]), "a.cvg"),
                                    "-b", self.graph_file(graph_from_edges(2, [(1, 2, 2)]), "b.cvg"))
        self.assertEqual(code, EXIT_FAIL)
        self.assertIn("not a proof", err)

    def test_connect_vertex_mismatch(self):
        code, _, err = self.run_cli("connect", "-a", self.graph_file(new_graph(2), "a.cvg"),
                                    "-b", self.graph_file(new_graph(3), "b.cvg"))
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("mismatch", err)


class TestExportDot(CliTestCase):

    def test_single_edge_label(self):
        code, out, _ = self.run_cli("export-dot", "-i", self.graph_file(graph_from_edges(2, [(1, 2, "3/4")])))
        self.assertEqual(code, EXIT_OK)
        self.assertIn('1 -- 2 [label="3/4"]', out)

    def test_edgeless(self):
        self.assertEqual(graph_to_dot(new_graph(3)), "graph G {\n  1;\n  2;\n  3;\n}\n")

    def test_five_mode_topology(self):
        dot = graph_to_dot(five_mode_graph())
        edges = [line.strip() for line in dot.splitlines() if "--" in line]
        self.assertEqual(edges, [
            '1 -- 2 [label="1"];', '1 -- 3 [label="2"];', '1 -- 5 [label="3"];',
            '2 -- 5 [label="1"];', '3 -- 4 [label="1"];', '4 -- 5 [label="2"];',
        ])


if __name__ == "__main__":
    unittest.main()
