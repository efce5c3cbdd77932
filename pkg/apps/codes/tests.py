from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from rest_framework.test import APIClient
from scipy import sparse

from sp_recon.exceptions import (
    AlistParseError,
    ConfigError,
    ConstructionError,
    DimensionError,
    RankDeficientError,
)
from sp_recon.utils.rng import make_rng
from .alist import load_alist, write_alist
from .bits import BitString
from .construction import generate_gallager
from .ldpc import ParityCheckCode, gf2_rank, syndrome
from .models import RegisteredCode
from .sources import parse_gallager_spec, resolve_codes

# H = [[1, 1, 0], [0, 1, 1]]
SMALL_ALIST = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n"


def small_code():
    return ParityCheckCode(3, [[0, 1], [1, 2]])


class BitStringTests(SimpleTestCase):
    def test_packs_across_word_boundaries(self):
        bits = [1, 0, 1] * 43  # 129 bits, three words
        s = BitString.from_array(bits)
        self.assertEqual(len(s), 129)
        self.assertEqual(s.words.size, 3)
        self.assertEqual(s.to_array().tolist(), bits)
        self.assertEqual(s.weight(), 86)

    def test_xor_requires_equal_lengths(self):
        with self.assertRaises(DimensionError):
            BitString.zeros(5) ^ BitString.zeros(6)

    def test_from_str_and_indexing(self):
        s = BitString.from_str("0110")
        self.assertEqual([s[i] for i in range(4)], [0, 1, 1, 0])
        self.assertEqual(str(s), "0110")
        self.assertEqual(s.hamming_distance(BitString.from_str("1111")), 2)


class SyndromeTests(SimpleTestCase):
    def test_zero_vector_has_zero_syndrome(self):
        self.assertEqual(str(syndrome(small_code(), BitString.from_str("000"))), "00")

    def test_hand_computed_syndrome(self):
        self.assertEqual(str(syndrome(small_code(), BitString.from_str("101"))), "11")

    def test_codeword_has_zero_syndrome(self):
        self.assertEqual(str(syndrome(small_code(), BitString.from_str("111"))), "00")

    def test_length_mismatch(self):
        with self.assertRaises(DimensionError):
            syndrome(small_code(), BitString.from_str("10"))

    def test_syndrome_is_linear(self):
        code = generate_gallager(120, 3, 6, seed=7)
        rng = make_rng(11)
        for _ in range(1000):
            a = BitString.random(code.n, rng)
            b = BitString.random(code.n, rng)
            self.assertEqual(syndrome(code, a ^ b), syndrome(code, a) ^ syndrome(code, b))

    def test_sparse_views_agree(self):
        code = generate_gallager(60, 3, 6, seed=3)
        self.assertTrue(sparse.issparse(code.H))
        by_column = code.H.tocsc()
        for i in range(code.n):
            self.assertEqual(code.column(i).tolist(), sorted(by_column[:, i].indices.tolist()))
        self.assertEqual(code.edge_count, code.H.nnz)

    def test_matches_dense_product(self):
        code = generate_gallager(60, 3, 6, seed=3)
        x = BitString.random(code.n, make_rng(5))
        dense = (code.to_dense().astype(int) @ x.to_array().astype(int)) % 2
        self.assertEqual(syndrome(code, x).to_array().tolist(), dense.tolist())


class AlistTests(SimpleTestCase):
    def test_loads_hand_written_matrix(self):
        code = load_alist(SMALL_ALIST)
        self.assertEqual((code.n, code.m_rows, code.k), (3, 2, 1))
        self.assertEqual(code.identifier, small_code().identifier)

    def test_bytes_input(self):
        self.assertEqual(load_alist(SMALL_ALIST.encode("ascii")).n, 3)

    def test_empty_stream(self):
        with self.assertRaises(AlistParseError) as ctx:
            load_alist("")
        self.assertEqual(ctx.exception.line, 1)

    def test_zero_index_inside_degree(self):
        broken = SMALL_ALIST.replace("1 2\n2 3\n", "1 0\n2 3\n")
        with self.assertRaises(AlistParseError) as ctx:
            load_alist(broken)
        self.assertEqual(ctx.exception.line, 8)

    def test_degree_sums_must_agree(self):
        with self.assertRaises(AlistParseError):
            load_alist(SMALL_ALIST.replace("1 2 1\n", "1 2 2\n"))

    def test_rows_must_match_columns(self):
        with self.assertRaises(AlistParseError):
            load_alist(SMALL_ALIST.replace("2 3\n", "1 3\n"))

    def test_trailing_content(self):
        with self.assertRaises(AlistParseError):
            load_alist(SMALL_ALIST + "1 2\n")

    def test_hand_written_alist_is_reproduced_exactly(self):
        self.assertEqual(write_alist(load_alist(SMALL_ALIST)), SMALL_ALIST)

    def test_invalid_dimensions_name_the_header_line(self):
        square = "2 2\n1 1\n1 1\n1 1\n1\n2\n1\n2\n"
        with self.assertRaises(AlistParseError) as ctx:
            load_alist(square)
        self.assertEqual(ctx.exception.line, 1)

    def test_written_alist_reloads_to_the_same_matrix(self):
        code = generate_gallager(96, 3, 6, seed=1)
        again = load_alist(write_alist(code), check_rank=False)
        self.assertEqual(again.identifier, code.identifier)
        self.assertTrue(write_alist(code).endswith("\n"))


class GallagerTests(SimpleTestCase):
    def test_degree_bookkeeping(self):
        for seed in range(5):
            code = generate_gallager(6, 2, 3, seed=seed)
            self.assertEqual(code.m_rows, 4)
            self.assertEqual(set(code.col_degrees.tolist()), {2})
            self.assertEqual(set(code.row_degrees.tolist()), {3})

    def test_rate_of_desk_scale_code(self):
        code = generate_gallager(2000, 3, 6, seed=1)
        self.assertEqual(code.m_rows, 1000)
        self.assertEqual(float(code.R0), 0.5)

    def test_deterministic_in_seed(self):
        a = generate_gallager(240, 3, 6, seed=42)
        b = generate_gallager(240, 3, 6, seed=42)
        c = generate_gallager(240, 3, 6, seed=43)
        self.assertEqual(a.identifier, b.identifier)
        self.assertNotEqual(a.identifier, c.identifier)

    def test_rejects_impossible_degrees(self):
        with self.assertRaises(ConstructionError):
            generate_gallager(7, 3, 6, seed=0)
        with self.assertRaises(ConstructionError):
            generate_gallager(12, 1, 6, seed=0)

    def test_even_column_weight_is_rank_deficient(self):
        code = generate_gallager(6, 2, 3, seed=0)
        self.assertLess(gf2_rank(code), code.m_rows)
        with self.assertRaises(RankDeficientError):
            load_alist(write_alist(code))

    def test_small_code_is_full_rank(self):
        self.assertEqual(gf2_rank(small_code()), 2)


class SourceTests(SimpleTestCase):
    def test_generator_spec(self):
        self.assertEqual(
            parse_gallager_spec("gallager:n=2000,col=3,row=6,seed=1"),
            {"n": 2000, "col": 3, "row": 6, "seed": 1},
        )
        with self.assertRaises(ConfigError):
            parse_gallager_spec("gallager:n=2000,col=3")

    def test_family(self):
        codes = resolve_codes("gallager:n=120,col=3,row=6,seed=1; gallager:n=120,col=3,row=4,seed=1")
        self.assertEqual([c.m_rows for c in codes], [60, 90])

    def test_missing_alist_file(self):
        with self.assertRaises(ConfigError):
            resolve_codes("/nonexistent/code.alist")


class AlistCheckCommandTests(TestCase):
    def test_registers_code_and_serves_it(self):
        out = StringIO()
        call_command(
            "alist_check", "gallager:n=120,col=3,row=6,seed=1",
            "--skip-rank-check", "--register", stdout=out,
        )
        self.assertIn("n=120 m_rows=60 k=60", out.getvalue())
        record = RegisteredCode.objects.get()
        self.assertEqual(record.k, 60)
        self.assertEqual(record.to_code().identifier, record.identifier)

        client = APIClient()
        response = client.get("/api/codes/")
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()["data"][0]["identifier"], record.identifier)

        raw = client.get(f"/api/codes/{record.pk}/alist/")
        self.assertEqual(raw.content.decode("ascii"), record.alist)

    def test_rank_deficient_code_fails(self):
        with self.assertRaises(CommandError):
            call_command("alist_check", "gallager:n=6,col=2,row=3,seed=0", stdout=StringIO())
