import json

import numpy as np
import pytest
from conftest import typed_family_realigned, typed_family_state, random_density
from hypothesis import given, settings
from hypothesis import strategies as st

from posmoments.bipartite import (
    BipartiteState,
    bell_state,
    dumps_state,
    load_state,
    maximally_mixed,
    paper_ppt_family,
    partial_transpose,
    product_state,
    random_separable,
    realign,
    save_state,
    werner_state,
)
from posmoments.errors import DomainError, ValidationError
from posmoments.linalg import singular_values


def random_mixed(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return m / np.trace(m).real


class TestStateInvariants:
    def test_rejects_bad_trace(self):
        with pytest.raises(ValidationError, match="trace"):
            BipartiteState(2, 2, 0.9 * np.eye(4) / 4)

    def test_rejects_non_psd(self):
        with pytest.raises(ValidationError, match="positive semi-definite"):
            BipartiteState(1, 2, np.diag([1.5, -0.5]))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValidationError, match="dimA"):
            BipartiteState(2, 3, np.eye(4) / 4)

    def test_symmetrizes_rounding_asymmetry(self):
        m = np.eye(4, dtype=complex) / 4
        m[0, 1] = 1e-12
        s = BipartiteState(2, 2, m)
        assert s.mat[0, 1] == s.mat[1, 0] == 5e-13

    def test_matrix_is_read_only(self):
        s = maximally_mixed(2, 2)
        with pytest.raises(ValueError):
            s.mat[0, 0] = 1.0


class TestPartialTranspose:
    def test_product_state(self, rng):
        ra, rb = random_mixed(2, rng), random_mixed(3, rng)
        s = product_state(ra, rb)
        np.testing.assert_allclose(partial_transpose(s), np.kron(ra, rb.T), atol=1e-15)
        assert np.linalg.eigvalsh(partial_transpose(s)).min() > -1e-12

    def test_bell_spectrum(self):
        ev = np.linalg.eigvalsh(partial_transpose(bell_state()))
        np.testing.assert_allclose(ev, [-0.5, 0.5, 0.5, 0.5], atol=1e-15)

    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 5.0])
    def test_family_is_ppt(self, a):
        assert np.linalg.eigvalsh(partial_transpose(paper_ppt_family(a))).min() >= -1e-10

    def test_blockwise_transpose(self, rng):
        s = random_density(2, 3, rng)
        pt = partial_transpose(s)
        for i in range(2):
            for j in range(2):
                np.testing.assert_array_equal(pt[3 * i : 3 * i + 3, 3 * j : 3 * j + 3], s.mat[3 * i : 3 * i + 3, 3 * j : 3 * j + 3].T)

    def test_matches_index_definition(self, rng):
        s = random_density(3, 2, rng)
        pt = partial_transpose(s)
        for m in range(3):
            for mu in range(2):
                for n in range(3):
                    for nu in range(2):
                        assert pt[m * 2 + mu, n * 2 + nu] == s.mat[m * 2 + nu, n * 2 + mu]

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), dims=st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)]))
    def test_involution_and_norms(self, seed, dims):
        s = random_density(*dims, np.random.default_rng(seed))
        pt = partial_transpose(s)
        back = pt.reshape(s.dimA, s.dimB, s.dimA, s.dimB).transpose(0, 3, 2, 1).reshape(s.dim, s.dim)
        np.testing.assert_array_equal(back, s.mat)
        assert abs(np.trace(pt) - 1) < 1e-12
        assert abs(np.linalg.norm(pt) - np.linalg.norm(s.mat)) < 1e-12
        # p_2 identity
        assert abs(np.trace(pt @ pt).real - np.trace(s.mat @ s.mat).real) < 1e-12


class TestRealign:
    @pytest.mark.parametrize("a", [0.5, 1.0, 2.7])
    def test_typed_matrix(self, a):
        np.testing.assert_allclose(realign(paper_ppt_family(a)), typed_family_realigned(a), atol=1e-16)

    def test_family_first_row(self):
        a = 1.3
        row = realign(paper_ppt_family(a))[0]
        np.testing.assert_allclose(row, np.array([1, 0, 0, 0, a, 0, 0, 0, 2]) / (3 * (3 + a)), atol=1e-16)

    def test_maximally_mixed(self):
        r = realign(maximally_mixed(2, 2))
        # every block is I/4 or 0: only rows (0,0) and (1,1) are nonzero, both vec(I)/4
        expected = np.zeros((4, 4))
        expected[0] = expected[3] = [0.25, 0, 0, 0.25]
        np.testing.assert_allclose(r, expected, atol=0)
        sv = singular_values(r)
        np.testing.assert_allclose(sv, [0.5, 0, 0, 0], atol=1e-15)
        assert sv.sum() <= 1

    def test_pure_product_trace_norm(self):
        e0 = np.diag([1.0, 0.0])
        assert abs(singular_values(realign(product_state(e0, e0))).sum() - 1) < 1e-12

    def test_rectangular_shape(self, rng):
        s = random_density(2, 3, rng)
        assert realign(s).shape == (4, 9)
        assert realign(random_density(3, 2, rng)).shape == (9, 4)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), dims=st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)]))
    def test_frobenius_preserved(self, seed, dims):
        s = random_density(*dims, np.random.default_rng(seed))
        assert abs(np.linalg.norm(realign(s)) - np.linalg.norm(s.mat)) < 1e-12

    def test_product_structure(self, rng):
        ra, rb = random_mixed(3, rng), random_mixed(2, rng)
        r = realign(product_state(ra, rb))
        np.testing.assert_allclose(r, np.outer(ra.reshape(-1), rb.reshape(-1)), atol=1e-15)
        sv = singular_values(r)
        assert np.all(sv[1:] < 1e-12)
        assert abs(sv.sum() - np.linalg.norm(ra) * np.linalg.norm(rb)) < 1e-10


class TestFamily:
    def test_typed_entries_at_one(self):
        m = paper_ppt_family(1.0).mat
        assert m[0, 0] == pytest.approx(1 / 12, abs=1e-16)
        assert m[1, 1] == pytest.approx(1 / 12, abs=1e-16)
        assert m[2, 2] == pytest.approx(2 / 12, abs=1e-16)

    @pytest.mark.parametrize("a", [0.5, 0.8, 1.0, 3.0])
    def test_matches_typed_matrix(self, a):
        np.testing.assert_allclose(paper_ppt_family(a).mat, typed_family_state(a), atol=1e-16)

    def test_normalized(self):
        assert abs(np.trace(paper_ppt_family(0.5).mat) - 1) < 1e-12

    def test_ppt_at_two(self):
        assert np.linalg.eigvalsh(partial_transpose(paper_ppt_family(2.0))).min() >= -1e-10

    def test_ppt_on_grid(self):
        for a in np.linspace(0.5, 5, 46):
            assert np.linalg.eigvalsh(partial_transpose(paper_ppt_family(a))).min() >= -1e-10

    @pytest.mark.parametrize("a", [0.49, 0.0, -1.0, float("nan")])
    def test_domain(self, a):
        with pytest.raises(DomainError):
            paper_ppt_family(a)


class TestWerner:
    def test_p0_maximally_mixed(self):
        np.testing.assert_allclose(werner_state(0.0).mat, np.eye(4) / 4, atol=0)

    def test_p1_pure_singlet(self):
        s = werner_state(1.0)
        assert abs(s.purity() - 1) < 1e-12
        singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
        np.testing.assert_allclose(s.mat, np.outer(singlet, singlet), atol=1e-15)

    @pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.5, 0.9, 1.0])
    def test_partial_transpose_determinant(self, p):
        pt = partial_transpose(werner_state(p))
        ev = np.linalg.eigvalsh(pt)
        np.testing.assert_allclose(sorted(ev), sorted([(1 + p) / 4] * 3 + [(1 - 3 * p) / 4]), atol=1e-15)
        assert np.linalg.det(pt).real == pytest.approx(((1 + p) / 4) ** 3 * (1 - 3 * p) / 4, abs=1e-15)

    def test_sign_flip_at_one_third(self):
        det = lambda p: np.linalg.det(partial_transpose(werner_state(p))).real  # noqa: E731
        assert det(1 / 3 - 1e-6) > 0 > det(1 / 3 + 1e-6)

    @pytest.mark.parametrize("p", [-0.1, 1.1])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            werner_state(p)


class TestRandomSeparable:
    def test_single_term_is_pure(self):
        assert abs(random_separable(3, 3, 1, 5).purity() - 1) < 1e-12

    def test_deterministic(self):
        a = random_separable(2, 3, 4, 7)
        b = random_separable(2, 3, 4, 7)
        np.testing.assert_array_equal(a.mat, b.mat)

    def test_seed_changes_state(self):
        assert not np.array_equal(random_separable(2, 2, 3, 1).mat, random_separable(2, 2, 3, 2).mat)

    def test_terms_validated(self):
        with pytest.raises(DomainError):
            random_separable(2, 2, 0, 0)

    def test_partial_transpose_involution(self):
        s = random_separable(2, 3, 3, 11)
        once = BipartiteState(2, 3, partial_transpose(s))
        np.testing.assert_array_equal(partial_transpose(once), s.mat)

    def test_is_ppt(self):
        for seed in range(20):
            s = random_separable(3, 3, 5, seed)
            assert np.linalg.eigvalsh(partial_transpose(s)).min() > -1e-12


class TestStateFiles:
    def test_round_trip(self, tmp_path):
        s = paper_ppt_family(1.0)
        save_state(s, tmp_path / "s.json")
        back = load_state(tmp_path / "s.json")
        assert (back.dimA, back.dimB) == (3, 3)
        np.testing.assert_array_equal(back.mat, s.mat)

    def test_round_trip_complex(self, tmp_path, rng):
        s = random_density(2, 3, rng)
        save_state(s, tmp_path / "s.json")
        np.testing.assert_array_equal(load_state(tmp_path / "s.json").mat, s.mat)

    def test_writes_17_digits(self):
        text = dumps_state(paper_ppt_family(1.0))
        assert "0.083333333333333329" in text

    def test_field_names(self):
        doc = json.loads(dumps_state(bell_state()))
        assert set(doc) == {"dimA", "dimB", "matrix"}
        assert doc["matrix"][0][0] == pytest.approx([0.5, 0.0], abs=1e-15)

    def _write(self, path, dimA, dimB, mat):
        doc = {"dimA": dimA, "dimB": dimB, "matrix": [[[z.real, z.imag] for z in row] for row in np.asarray(mat, dtype=complex)]}
        path.write_text(json.dumps(doc))
        return path

    def test_bad_trace_named(self, tmp_path):
        p = self._write(tmp_path / "t.json", 2, 2, 0.9 * np.eye(4) / 4)
        with pytest.raises(ValidationError, match="trace"):
            load_state(p)

    def test_non_hermitian_names_pair(self, tmp_path):
        m = np.eye(4, dtype=complex) / 4
        m[1, 2] = 0.1
        p = self._write(tmp_path / "h.json", 2, 2, m)
        with pytest.raises(ValidationError, match=r"\(1, 2\).*\(2, 1\)|\(2, 1\).*\(1, 2\)"):
            load_state(p)

    def test_dimension_mismatch(self, tmp_path):
        p = self._write(tmp_path / "d.json", 3, 3, np.eye(4) / 4)
        with pytest.raises(ValidationError, match="dimA"):
            load_state(p)

    def test_malformed_json_reports_line(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{\n  "dimA": 2,\n  "dimB": 2\n  "matrix": []\n}')
        with pytest.raises(ValidationError, match="line 4"):
            load_state(p)

    @pytest.mark.parametrize(
        "doc, needle",
        [
            ({"dimB": 2, "matrix": [[[1, 0]]]}, "dimA"),
            ({"dimA": 1, "dimB": 1}, "matrix"),
            ({"dimA": 1, "dimB": 1, "matrix": [[1.0]]}, r"\[re, im\]"),
            ({"dimA": 1, "dimB": 2, "matrix": [[[1, 0], [0, 0]], [[0, 0]]]}, "row 1"),
            ({"dimA": True, "dimB": 1, "matrix": [[[1, 0]]]}, "dimA"),
        ],
    )
    def test_structural_errors(self, tmp_path, doc, needle):
        p = tmp_path / "x.json"
        p.write_text(json.dumps(doc))
        with pytest.raises(ValidationError, match=needle):
            load_state(p)
