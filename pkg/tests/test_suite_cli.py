import os

import pytest

from openbook import rules
from openbook.cli import main
from openbook.report import parse_comparison_tsv
from openbook.suite import SuiteError, parse_epd_suite


class TestEpdSuite:
    def test_initial_position_with_id(self):
        entries = parse_epd_suite(
            ['rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - id "26";'])
        assert len(entries) == 1
        assert entries[0].position_id == "26"
        assert entries[0].position == rules.initial_position()
        assert entries[0].side_to_move == "w"

    def test_missing_id_auto_assigned(self):
        entries = parse_epd_suite(["4k3/8/8/8/8/8/8/4K3 w - -"])
        assert entries[0].position_id == "pos1"

    def test_other_opcodes_ignored(self):
        entries = parse_epd_suite(
            ['4k3/8/8/8/8/8/8/4K3 w - - bm Kd2; id "x"; c0 "note";'])
        assert entries[0].position_id == "x"

    def test_empty_file_rejected(self):
        with pytest.raises(SuiteError, match="empty"):
            parse_epd_suite([])

    def test_malformed_line_reports_number(self):
        with pytest.raises(SuiteError, match="line 2"):
            parse_epd_suite(["4k3/8/8/8/8/8/8/4K3 w - -", "not a position"])

    def test_duplicate_ids_rejected(self):
        with pytest.raises(SuiteError, match="duplicate"):
            parse_epd_suite(['4k3/8/8/8/8/8/8/4K3 w - - id "a";',
                             '4k3/8/8/8/8/8/8/4K3 b - - id "a";'])

    def test_sample_suite_loads(self, sample_epd_path):
        entries = parse_epd_suite(sample_epd_path)
        assert entries[0].position_id == "26"
        assert len(entries) >= 2


@pytest.fixture()
def built_books(tmp_path, pb_mini_path, comp_mini_path):
    book1 = str(tmp_path / "pb.book")
    book2 = str(tmp_path / "comp.book")
    assert main(["build", "--pgn", pb_mini_path, "--depth", "4",
                 "--out", book1, "--source", "pb-mini"]) == 0
    assert main(["build", "--pgn", comp_mini_path, "--depth", "4",
                 "--out", book2, "--source", "comp-mini"]) == 0
    return book1, book2


class TestCliBuild:
    def test_build_prints_numerics(self, built_books, capsys):
        capsys.readouterr()
        from openbook.book import load_book
        book = load_book(built_books[0])
        assert book.games == 49
        assert book.position_count == 3
        assert book.depth == 4

    def test_unreadable_path_is_data_error(self, tmp_path, capsys):
        code = main(["build", "--pgn", str(tmp_path / "missing.pgn"),
                     "--out", str(tmp_path / "o.book")])
        assert code == 2
        assert "missing.pgn" in capsys.readouterr().err

    def test_empty_pgn_gives_empty_book(self, tmp_path):
        empty = tmp_path / "empty.pgn"
        empty.write_text("")
        out = tmp_path / "o.book"
        assert main(["build", "--pgn", str(empty), "--out", str(out)]) == 0
        from openbook.book import load_book
        assert load_book(str(out)).games == 0

    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["build", "--out", "x.book"])  # --pgn missing
        assert err.value.code == 1


class TestCliQuery:
    def test_query_matches_hand_tally(self, built_books, capsys):
        assert main(["query", "--book", built_books[0],
                     "--fen", rules.START_FEN]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "rank\tsan\tgames\tscore%"
        first = lines[1].split("\t")
        assert first[:3] == ["1", "e4", "9"]
        assert len(lines) == 11

    def test_unbooked_position_prints_header_only(self, built_books, capsys):
        assert main(["query", "--book", built_books[0],
                     "--fen", "4k3/8/8/8/8/8/8/4K3 w - - 0 1"]) == 0
        assert capsys.readouterr().out.strip() == "rank\tsan\tgames\tscore%"

    def test_malformed_fen_is_data_error(self, built_books, capsys):
        assert main(["query", "--book", built_books[0], "--fen", "garbage"]) == 2

    def test_epd_input(self, built_books, capsys):
        assert main(["query", "--book", built_books[0],
                     "--epd", 'rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - id "26";']) == 0
        assert "e4" in capsys.readouterr().out


class TestCliCompare:
    def run_compare(self, built_books, suite3_path, tmp_path, extra=()):
        out_dir = str(tmp_path / "report")
        code = main(["compare", "--book1", built_books[0], "--book2", built_books[1],
                     "--suite", suite3_path, "--min-games", "1",
                     "--bootstrap", "1000", "--seed", "5", "--out", out_dir,
                     *extra])
        assert code == 0
        return out_dir

    def test_outputs_written(self, built_books, suite3_path, tmp_path):
        out_dir = self.run_compare(built_books, suite3_path, tmp_path)
        for name in ("comparison.tsv", "expected_score.tsv", "report.md"):
            assert os.path.exists(os.path.join(out_dir, name))

    def test_byte_reproducible(self, built_books, suite3_path, tmp_path):
        first = self.run_compare(built_books, suite3_path, tmp_path / "a")
        second = self.run_compare(built_books, suite3_path, tmp_path / "b")
        for name in ("comparison.tsv", "expected_score.tsv", "report.md"):
            with open(os.path.join(first, name), "rb") as fa, \
                    open(os.path.join(second, name), "rb") as fb:
                assert fa.read() == fb.read()

    def test_self_comparison_rows_and_undefined_correlation(
            self, built_books, suite3_path, tmp_path, capsys):
        out_dir = str(tmp_path / "self")
        assert main(["compare", "--book1", built_books[0], "--book2", built_books[0],
                     "--suite", suite3_path, "--min-games", "1",
                     "--bootstrap", "1000", "--seed", "1", "--out", out_dir]) == 0
        with open(os.path.join(out_dir, "comparison.tsv")) as handle:
            rows, _ = parse_comparison_tsv(handle.read())
        assert all(r.m_measure == 1.0 and r.jsd == 1.0 and r.overlap == 1.0
                   for r in rows)
        with open(os.path.join(out_dir, "comparison.tsv")) as handle:
            text = handle.read()
        assert "pearson_full=undefined" in text

    def test_partially_undefined_row_succeeds(self, built_books, tmp_path):
        suite_file = tmp_path / "suite.epd"
        suite_file.write_text(
            'rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - id "26";\n'
            '4k3/8/8/8/8/8/8/4K3 w - - id "unbooked";\n')
        out_dir = str(tmp_path / "report")
        assert main(["compare", "--book1", built_books[0], "--book2", built_books[1],
                     "--suite", str(suite_file), "--min-games", "1",
                     "--bootstrap", "1000", "--seed", "1", "--out", out_dir]) == 0
        with open(os.path.join(out_dir, "comparison.tsv")) as handle:
            rows, metadata = parse_comparison_tsv(handle.read())
        unbooked = [r for r in rows if r.position_id == "unbooked"][0]
        assert unbooked.m_measure is None and unbooked.jsd is None
        assert metadata["undefined_cells"] != "0"

    def test_tsv_self_consistency_round_trip(self, built_books, suite3_path, tmp_path):
        out_dir = self.run_compare(built_books, suite3_path, tmp_path,
                                   extra=("--precision", "full"))
        with open(os.path.join(out_dir, "comparison.tsv")) as handle:
            text = handle.read()
        rows, metadata = parse_comparison_tsv(text)
        from openbook.stats import summarize
        summary = summarize(rows)
        avg_line = [l for l in text.splitlines() if l.startswith("Avg")][0]
        cells = avg_line.split("\t")[1:]
        for cell, column in zip(cells, ("m_measure", "max_m", "jsd", "overlap")):
            assert float(cell) == pytest.approx(summary[column][0], abs=1e-12)


class TestCliPlot:
    def test_plot_from_report(self, built_books, suite3_path, tmp_path, capsys):
        out_dir = str(tmp_path / "report")
        main(["compare", "--book1", built_books[0], "--book2", built_books[1],
              "--suite", suite3_path, "--min-games", "1", "--bootstrap", "1000",
              "--seed", "1", "--out", out_dir])
        svg_path = str(tmp_path / "scatter.svg")
        assert main(["plot", "--report", os.path.join(out_dir, "comparison.tsv"),
                     "--out", svg_path, "--mark", "26"]) == 0
        with open(svg_path) as handle:
            svg = handle.read()
        assert svg.startswith("<svg")
        assert svg.count("<circle") == 3
        assert 'fill="red"' in svg  # marked point

    def test_plot_without_defined_pairs_is_data_error(self, tmp_path, capsys):
        report_path = tmp_path / "empty.tsv"
        report_path.write_text("pos\tm_measure\tmax_m\tjsd\toverlap\n"
                               "x\tundefined\tundefined\tundefined\tundefined\n")
        assert main(["plot", "--report", str(report_path),
                     "--out", str(tmp_path / "o.svg")]) == 2
