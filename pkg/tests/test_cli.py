"""
Tests for the command-line entry point and its exit codes.
"""

import json

from app.catalog import ACYCLIC_TRIANGLE, DIJOIN_SHOWCASE, PARKING_SHOWCASE
from app.cli import EXIT_INPUT_ERROR, EXIT_OK, main


class TestInstanceCommands:
    def test_interior_text(self, digraph_file, capsys):
        path = digraph_file("showcase.txt", DIJOIN_SHOWCASE)
        assert main(["interior", str(path)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "interior_polynomial: [1, 3, 4]" in out

    def test_interior_json(self, digraph_file, capsys):
        path = digraph_file("triangle.txt", ACYCLIC_TRIANGLE)
        assert main(["interior", str(path), "--json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["command"] == "interior"
        assert payload["values"]["interior_polynomial"] == [1, 1]

    def test_parking_with_root(self, digraph_file, capsys):
        path = digraph_file("parking.txt", PARKING_SHOWCASE)
        assert main(["parking", str(path), "--root", "0", "--json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["values"]["parking_enumerator"] == [1, 2, 1]

    def test_greedoid_with_order(self, digraph_file, capsys):
        path = digraph_file("triangle.txt", ACYCLIC_TRIANGLE)
        assert main(["greedoid", str(path), "--root", "0", "--order", "2,1,0", "--json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["values"]["order"] == [2, 1, 0]

    def test_verify_passes(self, digraph_file):
        path = digraph_file("triangle.txt", ACYCLIC_TRIANGLE)
        assert main(["verify", str(path)]) == EXIT_OK

    def test_verify_single_vertex_with_loop(self, write_instance, capsys):
        path = write_instance("loop.txt", "digraph 1 1\n0 0\n")
        assert main(["verify", str(path)]) == EXIT_OK
        assert "interior_polynomial: [1]" in capsys.readouterr().out


class TestInputErrors:
    """Malformed input exits with code 2 and a message on stderr."""

    def test_parse_error(self, write_instance, capsys):
        path = write_instance("bad.txt", "digraph 2 1\n0 x\n")
        assert main(["interior", str(path)]) == EXIT_INPUT_ERROR
        err = capsys.readouterr().err
        assert "PARSE_ERROR" in err
        assert "line 2, column 3" in err

    def test_missing_file(self, tmp_path):
        assert main(["interior", str(tmp_path / "absent.txt")]) == EXIT_INPUT_ERROR

    def test_disconnected(self, write_instance, capsys):
        path = write_instance("split.txt", "digraph 3 1\n0 1\n")
        assert main(["interior", str(path)]) == EXIT_INPUT_ERROR
        assert "DISCONNECTED_INPUT" in capsys.readouterr().err

    def test_order_must_be_permutation(self, digraph_file):
        path = digraph_file("triangle.txt", ACYCLIC_TRIANGLE)
        assert main(["greedoid", str(path), "--root", "0", "--order", "0,1"]) == EXIT_INPUT_ERROR

    def test_order_must_be_integers(self, digraph_file):
        path = digraph_file("triangle.txt", ACYCLIC_TRIANGLE)
        assert main(["greedoid", str(path), "--root", "0", "--order", "a,b,c"]) == EXIT_INPUT_ERROR

    def test_budget_guard(self, digraph_file, capsys):
        path = digraph_file("showcase.txt", DIJOIN_SHOWCASE)
        assert main(["dijoin", str(path), "--max-edges", "4"]) == EXIT_INPUT_ERROR
        assert "TOO_LARGE" in capsys.readouterr().err


class TestUtilityCommands:
    def test_render_is_canonical(self, write_instance, capsys):
        path = write_instance("commented.txt", "# triangle\ndigraph 3 3\n0 1  # first\n1 2\n\n0 2\n")
        assert main(["render", str(path)]) == EXIT_OK
        assert capsys.readouterr().out == "digraph 3 3\n0 1\n1 2\n0 2\n"

    def test_store_then_list(self, new_db, digraph_file, capsys):
        path = digraph_file("triangle.txt", ACYCLIC_TRIANGLE)
        assert main(["interior", str(path), "--store"]) == EXIT_OK
        capsys.readouterr()
        assert main(["runs"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 1
        assert "\tinterior\tdigraph\t" in lines[0]

    def test_batch_verify(self, tmp_path, digraph_file, capsys):
        digraph_file("a.txt", ACYCLIC_TRIANGLE)
        digraph_file("b.txt", PARKING_SHOWCASE)
        assert main(["verify", str(tmp_path)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "== a.txt" in out
        assert "== b.txt" in out

    def test_batch_reports_worst_exit_code(self, tmp_path, digraph_file, write_instance, capsys):
        digraph_file("a.txt", ACYCLIC_TRIANGLE)
        write_instance("b.txt", "digraph 2 1\n0 7\n")
        assert main(["verify", str(tmp_path)]) == EXIT_INPUT_ERROR
        assert "b.txt: [RANGE_ERROR]" in capsys.readouterr().out

    def test_sweep(self, capsys):
        assert main(["sweep", "interior", "--limit", "3", "--json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["values"]["instances"] == 3
