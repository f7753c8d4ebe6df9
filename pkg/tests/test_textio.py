import numpy as np
import pytest

from perron_roots.rjcf import ComplexPairBlock, RealEigenBlock
from perron_roots.textio import (
    ParseError,
    dump_report,
    format_factorization,
    format_matrix,
    load_report,
    matrix_entry,
    matrix_from_entry,
    parse_factorization,
    parse_matrix,
    parse_scalar,
)


class TestScalars:
    @pytest.mark.parametrize("tok,val", [("1/2", 0.5), ("-3/4", -0.75), ("2.5", 2.5), ("1e-3", 1e-3), ("7", 7.0)])
    def test_parse(self, tok, val):
        assert parse_scalar(tok) == val

    @pytest.mark.parametrize("tok", ["1/0", "a/b", "nan", "inf", "x"])
    def test_reject(self, tok):
        with pytest.raises(ValueError):
            parse_scalar(tok)


class TestMatrixFormat:
    def test_comments_and_rationals(self):
        m = parse_matrix("# header\n2 2\n1/2 1/2\n# mid\n0.25 0.75\n")
        np.testing.assert_array_equal(m, [[0.5, 0.5], [0.25, 0.75]])

    def test_row_length_mismatch_reports_line(self):
        with pytest.raises(ParseError) as exc:
            parse_matrix("2 2\n1 2\n3\n", path="m.txt")
        assert exc.value.line == 3
        assert "m.txt:3" in str(exc.value)

    def test_bad_entry_reports_column(self):
        with pytest.raises(ParseError) as exc:
            parse_matrix("1 2\n1   zz\n")
        assert (exc.value.line, exc.value.column) == (2, 5)

    def test_missing_rows(self):
        with pytest.raises(ParseError):
            parse_matrix("3 1\n1\n2\n")

    def test_trailing_content(self):
        with pytest.raises(ParseError):
            parse_matrix("1 1\n1\n2\n")

    def test_round_trip_is_exact(self, rng):
        m = rng.standard_normal((4, 3)) * 1e3
        np.testing.assert_array_equal(parse_matrix(format_matrix(m)), m)


class TestFactorizationFormat:
    def test_round_trip(self):
        R = np.eye(5)
        blocks = [RealEigenBlock(10.0, 1), ComplexPairBlock(1 + 1j, 2)]
        R2, blocks2 = parse_factorization(format_factorization(R, blocks))
        np.testing.assert_array_equal(R2, R)
        assert blocks2 == blocks

    def test_bad_descriptor(self):
        with pytest.raises(ParseError):
            parse_factorization("1 1\n1\nreal 2\n")

    def test_missing_descriptors(self):
        with pytest.raises(ParseError):
            parse_factorization("1 1\n1\n")

    def test_data_file(self, data_dir):
        R, blocks = parse_factorization((data_dir / "m9_factorization.txt").read_text())
        assert R.shape == (9, 9)
        assert blocks == [RealEigenBlock(20.0, 1), ComplexPairBlock(1 + 1j, 2), ComplexPairBlock(1 + 1j, 2)]


class TestReports:
    def test_schema_first_and_round_trip(self, rng):
        m = rng.standard_normal((3, 3))
        text = dump_report({"command": "x", "matrix": matrix_entry(m)})
        assert text.startswith("schema: 1\n")
        back = matrix_from_entry(load_report(text)["matrix"])
        np.testing.assert_allclose(back, m, rtol=0, atol=1e-15)
        np.testing.assert_array_equal(back, m)

    def test_display_precision(self):
        e = matrix_entry(np.array([[1.23456, -1e-17]]))
        assert e["display"] == ["1.2346 0.0000"]

    def test_complex_entry(self):
        m = np.array([[1 + 2j, 0.5j]])
        np.testing.assert_array_equal(matrix_from_entry(load_report(dump_report({"m": matrix_entry(m)}))["m"]), m)
