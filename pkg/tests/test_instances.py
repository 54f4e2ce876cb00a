"""
Tests for the text instance format.
"""

import pytest

from app.catalog import ACYCLIC_TRIANGLE
from app.errors import InputError
from app.instances import (
    InstanceKind,
    digest,
    digraph_instance,
    matrix_instance,
    parse_instance,
    render,
)


class TestParsing:
    def test_digraph(self):
        instance = parse_instance("digraph 3 3\n0 1\n1 2\n0 2\n")
        assert instance.kind == InstanceKind.DIGRAPH
        assert instance.digraph == ACYCLIC_TRIANGLE

    def test_comments_and_blank_lines_are_ignored(self):
        text = "# acyclic triangle\n\ndigraph 3 3  # header\n0 1\n\n1 2\n0 2 # long edge\n"
        assert parse_instance(text).digraph == ACYCLIC_TRIANGLE

    def test_ugraph(self):
        instance = parse_instance("UGRAPH 2 2\n0 1\n1 0\n")
        assert instance.kind == InstanceKind.UGRAPH
        assert instance.ugraph is not None
        assert instance.ugraph.m == 2

    def test_matrix(self):
        instance = parse_instance("matrix 2 3\n1 0 -1\n0 1 1\n")
        assert instance.matrix == ((1, 0, -1), (0, 1, 1))
        assert instance.columns == 3

    def test_crlf_line_endings(self):
        assert parse_instance("digraph 3 3\r\n0 1\r\n1 2\r\n0 2\r\n").digraph == ACYCLIC_TRIANGLE


class TestErrors:
    """Malformed input is reported with its position."""

    def test_bad_token_position(self):
        with pytest.raises(InputError) as info:
            parse_instance("digraph 2 1\n0 x\n")
        assert info.value.code == "PARSE_ERROR"
        assert (info.value.line, info.value.column) == (2, 3)
        assert "line 2, column 3" in str(info.value)

    def test_vertex_out_of_range(self):
        with pytest.raises(InputError) as info:
            parse_instance("digraph 2 1\n0 5\n")
        assert info.value.code == "RANGE_ERROR"
        assert info.value.column == 3

    def test_missing_records(self):
        with pytest.raises(InputError) as info:
            parse_instance("digraph 2 2\n0 1\n")
        assert info.value.line == 1

    def test_extra_records(self):
        with pytest.raises(InputError) as info:
            parse_instance("digraph 2 1\n0 1\n1 0\n")
        assert info.value.line == 3

    def test_unknown_kind(self):
        with pytest.raises(InputError):
            parse_instance("hypergraph 2 1\n0 1\n")

    def test_empty(self):
        with pytest.raises(InputError):
            parse_instance("# nothing here\n")

    def test_graph_needs_a_vertex(self):
        with pytest.raises(InputError) as info:
            parse_instance("digraph 0 0\n")
        assert info.value.code == "RANGE_ERROR"

    def test_ragged_matrix(self):
        with pytest.raises(InputError) as info:
            parse_instance("matrix 2 2\n1 0\n0\n")
        assert info.value.line == 3


class TestRendering:
    def test_canonical_text(self):
        assert render(digraph_instance(ACYCLIC_TRIANGLE)) == "digraph 3 3\n0 1\n1 2\n0 2\n"

    def test_comments_do_not_change_digest(self):
        plain = parse_instance("digraph 3 3\n0 1\n1 2\n0 2\n")
        commented = parse_instance("# same graph\ndigraph 3 3\n0 1 # a\n1 2\n0 2\n")
        assert digest(plain) == digest(commented)

    def test_digest_depends_on_edge_order(self):
        reordered = parse_instance("digraph 3 3\n0 2\n0 1\n1 2\n")
        assert digest(reordered) != digest(digraph_instance(ACYCLIC_TRIANGLE))

    def test_matrix_render(self):
        assert render(matrix_instance(((1, -1),), 2)) == "matrix 1 2\n1 -1\n"
