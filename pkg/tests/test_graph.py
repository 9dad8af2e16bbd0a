import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corescope.errors import (
    BinaryFormatError,
    EdgeListParseError,
    TruncatedFileError,
    VersionMismatchError,
)
from corescope.graph import (
    degree_histogram,
    from_edges,
    ingest_edge_list,
    load_binary,
    save_binary,
)

from conftest import er_graph


def write_lines(tmp_path, lines, name="edges.txt"):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return path


class TestIngest:
    def test_dedup_self_loop_symmetry(self, tmp_path):
        path = write_lines(tmp_path, ["1 2", "2 1", "1 1", "1 2"])
        g = ingest_edge_list(path)
        assert (g.n, g.m) == (2, 1)
        assert list(g.neighbors_of(0)) == [1]
        assert list(g.neighbors_of(1)) == [0]

    def test_one_direction_gets_reverse(self, tmp_path):
        g = ingest_edge_list(write_lines(tmp_path, ["5 9"]))
        assert (g.n, g.m) == (2, 1)
        assert g.degree(0) == g.degree(1) == 1
        assert list(g.id_map) == [5, 9]

    def test_random_file_against_pair_set_oracle(self, tmp_path):
        rng = np.random.default_rng(7)
        pairs = rng.integers(0, 120, size=(7000, 2))
        lines = [f"{a} {b}" for a, b in pairs]
        # duplicate ~30% of lines reversed
        for a, b in pairs[rng.random(len(pairs)) < 0.3]:
            lines.append(f"{b} {a}")
        g = ingest_edge_list(write_lines(tmp_path, lines))
        oracle = {(min(a, b), max(a, b)) for a, b in pairs if a != b}
        assert g.m == len(oracle)

    def test_comments_and_blank_lines_skipped(self, tmp_path):
        g = ingest_edge_list(write_lines(tmp_path, ["# header", "", "3 4"]))
        assert (g.n, g.m) == (2, 1)

    def test_empty_file_yields_empty_graph(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("")
        g = ingest_edge_list(path)
        assert (g.n, g.m) == (0, 0)

    def test_parse_error_reports_line_and_token(self, tmp_path):
        path = write_lines(tmp_path, ["1 2", "2 3", "4 x"])
        with pytest.raises(EdgeListParseError) as exc:
            ingest_edge_list(path)
        assert exc.value.line_no == 3
        assert "x" in str(exc.value)

    def test_adjacency_format(self, tmp_path):
        path = write_lines(tmp_path, ["1: 2,3", "4:"])
        g = ingest_edge_list(path, format="adj")
        assert (g.n, g.m) == (4, 2)
        # isolated node 4 retained with degree 0
        assert g.degree(g.dense_index(4)) == 0

    def test_adjacency_parse_error(self, tmp_path):
        path = write_lines(tmp_path, ["1: 2", "oops"])
        with pytest.raises(EdgeListParseError) as exc:
            ingest_edge_list(path, format="adj")
        assert exc.value.line_no == 2

    def test_unknown_format_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            ingest_edge_list(write_lines(tmp_path, ["1 2"]), format="csv")

    def test_line_permutation_gives_identical_graph(self, tmp_path):
        lines = ["1 2", "2 3", "3 1", "9 1", "4 4", "2 1"]
        g1 = ingest_edge_list(write_lines(tmp_path, lines, "a.txt"))
        g2 = ingest_edge_list(write_lines(tmp_path, lines[::-1], "b.txt"))
        assert g1 == g2


class TestGraphStructure:
    def test_degree_complete_graph(self):
        g = from_edges([(i, j) for i in range(5) for j in range(i + 1, 5)])
        assert all(g.degree(i) == 4 for i in range(5))

    def test_degree_empty_graph(self):
        g = from_edges([], extra_ids=[0, 1, 2])
        assert (g.n, g.m) == (3, 0)
        assert all(g.degree(i) == 0 for i in range(3))

    def test_degree_out_of_range(self):
        g = from_edges([(0, 1)])
        with pytest.raises(IndexError):
            g.degree(2)

    def test_handshake_lemma(self):
        g = er_graph(200, 0.05, seed=3)
        assert int(g.degrees().sum()) == 2 * g.m

    def test_invariants_full_scan(self):
        g = er_graph(80, 0.1, seed=11)
        assert g.offsets[0] == 0 and g.offsets[-1] == 2 * g.m
        assert (np.diff(g.offsets) >= 0).all()
        for i in range(g.n):
            nbrs = g.neighbors_of(i)
            assert (np.diff(nbrs) > 0).all()  # sorted, no duplicates
            assert i not in nbrs
            for j in nbrs:
                assert i in g.neighbors_of(int(j))

    def test_id_map_round_trip(self):
        g = from_edges([(100, 7), (7, 55), (200, 100)])
        for ext in [7, 55, 100, 200]:
            assert g.id_map[g.dense_index(ext)] == ext


class TestDegreeHistogram:
    def test_star(self):
        g = from_edges([(0, i) for i in range(1, 6)])
        assert degree_histogram(g) == {1: 5, 5: 1}

    def test_cycle(self):
        g = from_edges([(i, (i + 1) % 6) for i in range(6)])
        assert degree_histogram(g) == {2: 6}

    def test_counts_sum_to_n(self):
        g = er_graph(500, 0.02, seed=5)
        hist = degree_histogram(g)
        assert sum(hist.values()) == g.n
        recount = {}
        for i in range(g.n):
            recount[g.degree(i)] = recount.get(g.degree(i), 0) + 1
        assert hist == recount


class TestBinaryRoundTrip:
    def test_k4_round_trip(self, tmp_path):
        g = from_edges([(i, j) for i in range(4) for j in range(i + 1, 4)])
        save_binary(g, tmp_path / "g.bin")
        assert load_binary(tmp_path / "g.bin") == g

    def test_second_save_is_byte_identical(self, tmp_path):
        g = er_graph(1000, 0.01, seed=1)
        save_binary(g, tmp_path / "a.bin")
        save_binary(load_binary(tmp_path / "a.bin"), tmp_path / "b.bin")
        assert (tmp_path / "a.bin").read_bytes() == (tmp_path / "b.bin").read_bytes()

    def test_truncated_file_is_distinct_error(self, tmp_path):
        g = er_graph(50, 0.1, seed=2)
        save_binary(g, tmp_path / "g.bin")
        data = (tmp_path / "g.bin").read_bytes()
        (tmp_path / "cut.bin").write_bytes(data[: len(data) // 2])
        with pytest.raises(TruncatedFileError):
            load_binary(tmp_path / "cut.bin")

    def test_version_mismatch_is_distinct_error(self, tmp_path):
        g = from_edges([(0, 1)])
        save_binary(g, tmp_path / "g.bin")
        data = bytearray((tmp_path / "g.bin").read_bytes())
        data[3] = ord("9")  # CLG9
        (tmp_path / "v9.bin").write_bytes(bytes(data))
        with pytest.raises(VersionMismatchError):
            load_binary(tmp_path / "v9.bin")

    def test_foreign_file_rejected(self, tmp_path):
        (tmp_path / "junk.bin").write_bytes(b"PNG\x00" + b"\x00" * 64)
        with pytest.raises(BinaryFormatError):
            load_binary(tmp_path / "junk.bin")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 40), st.integers(0, 40)), max_size=120))
def test_canonicalization_properties(edges):
    g = from_edges(edges)
    assert (np.diff(g.id_map) > 0).all()
    assert int(g.degrees().sum()) == 2 * g.m
    seen = {(min(a, b), max(a, b)) for a, b in edges if a != b}
    assert g.m == len(seen)
    for i in range(g.n):
        nbrs = g.neighbors_of(i)
        assert i not in nbrs
        assert (np.diff(nbrs) > 0).all()
