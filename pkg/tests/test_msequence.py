from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import adj
from ttk import gallery
from ttk.galaxy import build_star
from ttk.iso import contains_induced
from ttk.msequence import (
    DigraphEmbedding,
    EmbeddingCert,
    Inconclusive,
    MSequence,
    MSequenceError,
    ProductEmbedding,
    ProperDigraph,
    SequentialEmbedding,
    StrongPairCert,
    cell_searcher,
    combine_product_embedding,
    default_c2,
    default_lambda0,
    eh_epsilon,
    eh_epsilon_terms,
    embed_digraph,
    fit_lambda,
    flip_edge,
    is_strong,
    match_family,
    plant_gadgets,
    random_msequence,
    residual,
    sequential_embed,
    strengthen,
    tr_upper_bound,
    validate_msequence,
    verify_digraph_embedding,
    verify_embedding,
    verify_sequential,
    verify_strong_pair,
    verify_well_embedding,
)
from ttk.product import ShapeVector
from ttk.tournament import Tournament, from_backward_edges, tr_exact

ZEROS3 = ShapeVector((0, 0, 0), ())
MIXED = ShapeVector((0, 1, 0), (2,))


def _density_oracle(chi: MSequence, i: int, j: int) -> Fraction:
    a = adj(chi.host)
    Si, Sj = chi.cells[i], chi.cells[j]
    return Fraction(sum(a[x][y] for x in Si for y in Sj), len(Si) * len(Sj))


class TestGenerator:
    def test_lambda_zero_all_forward(self):
        chi = random_msequence(MIXED, 5, None, 0, seed=1)
        assert validate_msequence(chi).ok
        long = chi.long_form()
        for i in range(len(long)):
            for j in range(i + 1, len(long)):
                assert all(chi.host.edge(x, y) for x in long[i] for y in long[j])

    def test_deterministic(self):
        a = random_msequence(MIXED, 6, None, Fraction(1, 6), seed=9, hubs=1)
        b = random_msequence(MIXED, 6, None, Fraction(1, 6), seed=9, hubs=1)
        assert a.host.out == b.host.out and a == b

    @pytest.mark.parametrize("seed", range(100))
    def test_validates_by_construction(self, seed):
        rng = random.Random(seed)
        m = rng.randint(1, 5)
        v = tuple(rng.randint(0, 1) for _ in range(m))
        shape = ShapeVector(v, tuple(rng.randint(1, 3) for _ in range(sum(v))))
        chi = random_msequence(shape, rng.randint(3, 8), None, Fraction(1, 8), seed)
        rep = validate_msequence(chi)
        assert rep.ok, rep.lines()
        for i in range(m):
            for j in range(i + 1, m):
                assert _density_oracle(chi, i, j) >= Fraction(7, 8)

    def test_declared_c_and_lambda(self):
        passed = 0
        for seed in range(20):
            chi = random_msequence(ZEROS3, 8, Fraction(1, 10), Fraction(1, 8), seed)
            passed += validate_msequence(chi).ok
        assert passed == 20

    def test_infeasible_c(self):
        with pytest.raises(MSequenceError):
            random_msequence(ZEROS3, 4, Fraction(1, 2), 0, seed=0)


class TestValidate:
    def test_flip_between_zero_cells(self):
        chi = random_msequence(ZEROS3, 4, None, 0, seed=2)
        x, y = min(chi.cells[0]), min(chi.cells[2])
        rep = validate_msequence(flip_edge(chi, x, y))
        assert rep.structural == []
        assert len(rep.violations) == 1 and "S1,S3" in rep.violations[0]

    def test_structural_overlap(self):
        chi = random_msequence(ZEROS3, 3, None, 0, seed=0)
        bad = MSequence.from_blocks(chi.host, ZEROS3, [[[0, 1, 2]], [[2, 3, 4]], [[6, 7, 8]]],
                                    Fraction(1, 9), 0)
        rep = validate_msequence(bad)
        assert rep.structural and not rep.ok

    def test_non_transitive_one_cell(self):
        host = from_backward_edges(6, [(0, 2)])
        shape = ShapeVector((1, 0), (1,))
        chi = MSequence.from_blocks(host, shape, [[[0, 1, 2]], [[3, 4, 5]]], Fraction(1, 6), 1)
        assert any("transitive" in v for v in validate_msequence(chi).lines())

    def test_tr_upper_bound_is_an_upper_bound(self):
        rng = random.Random(4)
        for seed in range(10):
            chi = random_msequence(ShapeVector((0, 1, 0, 0, 0, 0, 0), (2,)), 6, None,
                                   Fraction(1, 6), seed, hubs=1)
            value, kind = tr_upper_bound(chi.host, chi.cells, chi.shape)
            assert kind == "upper" and value >= tr_exact(chi.host)[0]
        del rng


class TestStrong:
    def test_lambda_zero_is_strong(self):
        assert is_strong(random_msequence(MIXED, 5, None, 0, seed=3)) == []

    def test_half_reversed_vertex_reported(self):
        chi = random_msequence(ZEROS3, 6, None, 0, seed=4)
        v = min(chi.cells[0])
        for y in sorted(chi.cells[1])[:3]:
            chi = flip_edge(chi, v, y)
        bad = is_strong(chi, Fraction(1, 3))
        assert bad == [(v, 2, "forward")] or (v, 2, "forward") in bad
        assert all(entry[0] == v or entry[2] == "backward" for entry in bad)

    def test_strengthen_lambda_zero_is_identity(self):
        chi = random_msequence(MIXED, 5, None, 0, seed=5)
        res = strengthen(chi)
        assert res.sequence.long_form() == chi.long_form() and sum(res.removed) == 0

    def test_strengthen_parameters(self):
        chi = random_msequence(ShapeVector((0, 0), ()), 20, None, Fraction(1, 20), seed=0, hubs=1)
        res = strengthen(chi)
        k = chi.shape.k
        assert res.C == 2 * k
        assert res.lam_hat == chi.lam / chi.c ** 2
        assert res.c_new == chi.c * (1 - Fraction(k, res.C))
        assert res.lam_new == res.C * res.lam_hat / (1 - Fraction(k, res.C))

    def test_strengthen_removes_hub(self):
        removed = 0
        for seed in range(10):
            chi = random_msequence(ShapeVector((0, 0), ()), 20, None, Fraction(1, 20), seed, hubs=1)
            res = strengthen(chi)
            removed += sum(res.removed)
            floor = 1 - res.C * res.lam_hat
            for v in res.sequence.cells[0]:
                assert Fraction(sum(chi.host.edge(v, y) for y in chi.cells[1]), 20) >= floor
        assert removed > 0

    def test_strengthen_rejects_invalid(self):
        chi = random_msequence(ZEROS3, 4, None, 0, seed=2)
        with pytest.raises(MSequenceError):
            strengthen(flip_edge(chi, min(chi.cells[0]), min(chi.cells[1])))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000))
    def test_strengthen_contract(self, seed):
        rng = random.Random(seed)
        m = rng.randint(1, 4)
        v = tuple(rng.randint(0, 1) for _ in range(m))
        shape = ShapeVector(v, tuple(rng.randint(1, 2) for _ in range(sum(v))))
        cs = rng.randint(4, 10)
        lam = Fraction(rng.randint(0, 2), cs)
        chi = random_msequence(shape, cs, None, lam, seed, hubs=rng.randint(0, lam.numerator))
        res = strengthen(chi)
        assert is_strong(res.sequence, res.lam_new) == []
        assert all(2 * len(b) >= len(a) for a, b in zip(chi.long_form(), res.sequence.long_form()))


class TestStrongPair:
    def _host(self):
        return Tournament.transitive(6)

    def test_complete_halves(self):
        cert = StrongPairCert(frozenset({0, 1, 2}), frozenset({3, 4, 5}), "A->B", Fraction(1, 2), "bulk")
        assert verify_strong_pair(cert, self._host())

    def test_one_reversed_edge(self):
        host = from_backward_edges(6, [(2, 3)])
        cert = StrongPairCert(frozenset({0, 1, 2}), frozenset({3, 4, 5}), "A->B", Fraction(1, 2), "bulk")
        assert not verify_strong_pair(cert, host)

    def test_transitive_mode(self):
        host = Tournament.transitive(4)
        cert = StrongPairCert(frozenset({0, 1}), frozenset({2, 3}), "A->B", Fraction(1, 2), "transitive")
        assert verify_strong_pair(cert, host)
        big = StrongPairCert(frozenset({0, 1}), frozenset({2, 3}), "A->B", Fraction(3, 4), "transitive")
        assert not verify_strong_pair(big, host)

    def test_wrong_direction_and_overlap(self):
        host = self._host()
        assert not verify_strong_pair(
            StrongPairCert(frozenset({0, 1, 2}), frozenset({3, 4, 5}), "B->A", Fraction(1, 2), "bulk"), host)
        assert not verify_strong_pair(
            StrongPairCert(frozenset({0, 1, 2}), frozenset({2, 4, 5}), "A->B", Fraction(1, 3), "bulk"), host)


class TestWellEmbedding:
    def test_lambda_zero_any_embedding(self):
        chi = random_msequence(ShapeVector((0, 0, 0, 0), ()), 4, None, 0, seed=6)
        H = Tournament.transitive(2)
        cert = EmbeddingCert(H, (min(chi.cells[0]), min(chi.cells[2])), (1, 3))
        assert verify_embedding(cert, chi)
        assert verify_well_embedding(cert, chi, 0)

    def test_wrong_cell(self):
        chi = random_msequence(ZEROS3, 4, None, 0, seed=6)
        cert = EmbeddingCert(Tournament.transitive(2), (min(chi.cells[0]), min(chi.cells[2])), (1, 2))
        assert not verify_embedding(cert, chi)
        assert not verify_well_embedding(cert, chi, 1)

    def test_margin_after_strengthen(self):
        # C * lambda <= 1/(2k) for k = 3: lambda <= 1/36
        shape = ShapeVector((0, 1, 0), (1,))
        lam = Fraction(1, 36)
        for seed in range(30):
            chi = random_msequence(shape, 40, None, lam, seed, hubs=1)
            res = strengthen(chi)
            assert res.C * lam <= Fraction(1, 2 * shape.k)
            out = embed_digraph(ProperDigraph.from_cells([(1, 3)]), res.sequence)
            assert isinstance(out, DigraphEmbedding)
            cert = out.as_cert(chi.host)
            assert verify_well_embedding(cert, res.sequence, res.C * lam)


class TestDigraphEmbedding:
    def test_single_backward_pair(self):
        D = ProperDigraph.from_cells([(2, 1)])
        chi = plant_gadgets(ShapeVector((0, 0), ()), [D], 5, seed=0)
        out = embed_digraph(D, chi)
        assert isinstance(out, DigraphEmbedding) and verify_digraph_embedding(out, chi)
        assert chi.host.edge(out.vertices[1], out.vertices[0])

    def test_first_gadget_on_thirteen_cells(self):
        D = gallery.rp_gadgets()[0]
        assert D.phi == (1, 3, 5, 9)
        chi = plant_gadgets(gallery.RP_SHAPE, [D], 4, seed=3)
        assert chi.shape.k == 13
        out = embed_digraph(D, strengthen(chi).sequence)
        assert isinstance(out, DigraphEmbedding) and verify_digraph_embedding(out, chi)

    def test_complete_cells_give_strong_pair(self):
        # no edge of the first gadget planted between cells 5 and 1: cell 1 is complete to cell 5
        gadgets = gallery.rp_gadgets()
        chi = plant_gadgets(gallery.RP_SHAPE, gadgets, 4, seed=1, complete=(0, 0))
        out = embed_digraph(gadgets[0], strengthen(chi).sequence)
        assert isinstance(out, StrongPairCert)
        assert verify_strong_pair(out, chi.host, chi.tr_value)
        long = chi.long_form()
        assert {out.A, out.B} <= {frozenset(long[0]), frozenset(long[4])} or (
            out.A <= long[0] | long[4] and out.B <= long[0] | long[4])

    def test_non_forest_uses_search(self):
        D = ProperDigraph.from_cells([(3, 1), (3, 2), (2, 1), (1, 3)][:3])
        chi = plant_gadgets(ShapeVector((0, 0, 0), ()), [D], 4, seed=0)
        out = embed_digraph(D, chi)
        assert isinstance(out, (DigraphEmbedding, Inconclusive))
        if isinstance(out, DigraphEmbedding):
            assert verify_digraph_embedding(out, chi)

    def test_cycle_without_witness_is_inconclusive(self):
        D = ProperDigraph.from_cells([(2, 1), (3, 2), (3, 1)])
        chi = random_msequence(ZEROS3, 3, None, 0, seed=0)
        out = embed_digraph(D, chi)
        assert isinstance(out, Inconclusive) and "no placement" in out.reason

    def test_phi_validation(self):
        with pytest.raises(MSequenceError):
            ProperDigraph((1, 1), ((0, 1),))
        chi = random_msequence(ZEROS3, 3, None, 0, seed=0)
        with pytest.raises(MSequenceError):
            embed_digraph(ProperDigraph.from_cells([(9, 1)]), chi)


class TestSequential:
    def test_single_gadget_matches_embed_digraph(self):
        D = gallery.rp_gadgets()[1]
        chi = plant_gadgets(gallery.RP_SHAPE, [D], 4, seed=2)
        seq = sequential_embed([D], chi)
        direct = embed_digraph(D, strengthen(chi).sequence)
        assert isinstance(seq, SequentialEmbedding) and isinstance(direct, DigraphEmbedding)
        assert seq.vertices == (direct.vertices,)

    @pytest.mark.parametrize("seed", range(5))
    def test_right_gadgets_induce_first_member(self, seed):
        gadgets = gallery.rp_gadgets()
        chi = plant_gadgets(gallery.RP_SHAPE, gadgets, 4, seed)
        out = sequential_embed(gadgets, chi)
        assert isinstance(out, SequentialEmbedding) and verify_sequential(out, chi)
        hit = match_family(out.by_cell(), chi.host, gallery.rp_family())
        assert hit is not None and hit[0] == 0
        member = gallery.rp_family()[0]
        assert hit[1].cells == member.index
        assert contains_induced(member.tournament, chi.host) is not None
        assert verify_embedding(hit[1], chi)

    @pytest.mark.parametrize("seed", range(5))
    def test_alpha_gadgets_induce_a_member(self, seed):
        gadgets = gallery.alpha_gadgets()
        chi = plant_gadgets(gallery.ALPHA_SHAPE, gadgets, 4, seed)
        out = sequential_embed(gadgets, chi)
        assert isinstance(out, SequentialEmbedding) and verify_sequential(out, chi)
        hit = match_family(out.by_cell(), chi.host, gallery.alpha_family())
        assert hit is not None and verify_embedding(hit[1], chi)

    def test_overlapping_gadgets_rejected(self):
        gadgets = gallery.rp_gadgets()
        chi = plant_gadgets(gallery.RP_SHAPE, gadgets, 4, 0)
        with pytest.raises(MSequenceError):
            sequential_embed([gadgets[0], gadgets[0]], chi)

    def test_residual_keeps_forward_vertices(self):
        chi = random_msequence(ZEROS3, 6, None, Fraction(1, 6), seed=3)
        v = min(chi.cells[1])
        res = residual(chi, [(v, 2)])
        assert res.cells[1] == chi.cells[1]
        assert all(chi.host.edge(x, v) for x in res.cells[0])
        assert all(chi.host.edge(v, x) for x in res.cells[2])
        assert res.c == chi.c / 2 and res.lam == 4 * chi.lam


class TestProductCombiner:
    def _chi(self, seed: int, lam=0):
        return random_msequence(ShapeVector((0,) * 6, ()), 6, None, lam, seed)

    def test_empty_second_factor(self):
        chi = self._chi(0)
        star = build_star(1, "left")
        e1 = cell_searcher(star, (1, 2))(chi)
        assert isinstance(e1, Inconclusive)  # lambda 0 has no backward edge at all
        H = Tournament.transitive(2)
        e1 = cell_searcher(H, (1, 2))(chi)
        out = combine_product_embedding(chi, e1, cell_searcher(H, (3, 4)), H2=Tournament(0, ()))
        assert isinstance(out, ProductEmbedding) and out.cert == e1

    def test_two_left_stars(self):
        star = build_star(1, "left")
        D1 = ProperDigraph.from_cells([(2, 1)])
        D2 = ProperDigraph.from_cells([(5, 4)])
        chi = plant_gadgets(ShapeVector((0,) * 6, ()), [D1, D2], 12, seed=4)
        e1 = cell_searcher(star, (1, 2))(chi)
        assert isinstance(e1, EmbeddingCert)
        k = chi.shape.k
        if not verify_well_embedding(e1, chi, Fraction(1, 2 * k)):
            pytest.skip("planted matching puts no well-embedded witness at this seed")
        out = combine_product_embedding(chi, e1, cell_searcher(star, (4, 5)), H2=star, g=(4, 5))
        assert isinstance(out, ProductEmbedding)
        assert verify_embedding(out.cert, chi)
        assert contains_induced(out.cert.target, chi.host) is not None
        assert out.cert.target.n == 4

    def test_rejects_badly_embedded_first_factor(self):
        chi = self._chi(1)
        e1 = EmbeddingCert(Tournament.transitive(2), (min(chi.cells[0]), min(chi.cells[1])), (1, 3))
        with pytest.raises(MSequenceError):
            combine_product_embedding(chi, e1, cell_searcher(Tournament.transitive(1), (4,)))

    @pytest.mark.parametrize("seed", range(100))
    def test_residuals_at_least_half(self, seed):
        rng = random.Random(seed)
        k = rng.randint(2, 6)
        lam = Fraction(1, 4 * k * k)
        chi = random_msequence(ShapeVector((0,) * k, ()), 4 * k, None, lam, seed)
        cells = tuple(sorted(rng.sample(range(1, k + 1), rng.randint(1, min(2, k - 1)))))
        H = Tournament.transitive(len(cells))
        e1 = cell_searcher(H, cells)(chi)
        if not isinstance(e1, EmbeddingCert) or not verify_well_embedding(e1, chi, Fraction(1, 2 * k)):
            return
        out = combine_product_embedding(chi, e1, lambda res: Inconclusive("stop"))
        assert isinstance(out, Inconclusive)
        placed = list(zip(e1.vertices, e1.cells))
        res = residual(chi, placed)
        for i, (old, new) in enumerate(zip(chi.long_form(), res.long_form()), start=1):
            if i not in cells:
                assert 2 * len(new) >= len(old)


class TestEpsilon:
    def test_examples(self):
        assert eh_epsilon(2, Fraction(1, 2)) == 1
        assert eh_epsilon(16, Fraction(1, 2)) == 0.25

    @given(st.integers(2, 10_000), st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100)))
    def test_terms_and_range(self, N, c2):
        a, b, c = eh_epsilon_terms(N, c2)
        x = float(c2)
        assert a == pytest.approx(1 / math.log2(N))
        assert b == pytest.approx(math.log(1 - x, x))
        assert c == pytest.approx(math.log(0.5, x))
        assert 0 < eh_epsilon(N, c2) <= 1
        assert eh_epsilon(N + 1, c2) <= eh_epsilon(N, c2)

    def test_default_constants(self):
        assert default_lambda0(Fraction(1, 2), 3) == Fraction(1, 288)
        assert default_c2(Fraction(1, 2)) == Fraction(1, 8)
        with pytest.raises(ValueError):
            default_lambda0(1, 0)

    @pytest.mark.parametrize("N,c2", [(1, Fraction(1, 2)), (4, 0), (4, 1)])
    def test_domain(self, N, c2):
        with pytest.raises(ValueError):
            eh_epsilon(N, c2)


def test_fit_lambda_matches_worst_pair():
    chi = random_msequence(ZEROS3, 5, None, Fraction(1, 5), seed=8)
    worst = max(1 - _density_oracle(chi, i, j) for i in range(3) for j in range(i + 1, 3))
    assert fit_lambda(chi.host, chi.cells) == worst <= Fraction(1, 5)
