from __future__ import annotations

import pytest

from oracles import galaxy_oracle, iso_oracle, prime_oracle, tr_oracle
from ttk import gallery
from ttk.formats import dump_trn, parse_trn
from ttk.galaxy import CapabilityError, build_star, find_galaxy_ordering
from ttk.iso import are_isomorphic, canonical_form, contains_induced
from ttk.tournament import Tournament, complement


class TestBuilds:
    def test_c5_regular(self):
        T = gallery.build_named("c5").tournament
        assert list(T.scores()) == [2] * 5
        assert all(T.edge(i, (i + 1) % 5) and T.edge(i, (i + 2) % 5) for i in range(5))

    def test_c5_chain_sizes(self):
        assert gallery.build_named("c5_chain", t=2).tournament.n == 11
        for t in (1, 2, 3):
            assert gallery.c5_chain(t).n == 2 * t + 7

    def test_h_d(self):
        T = gallery.build_named("h_d").tournament
        assert T.n == 6 and prime_oracle(T) and not galaxy_oracle(T) and tr_oracle(T) == 3

    def test_exceptional_six(self):
        for T in (gallery.h_a(), gallery.h_b()):
            assert T.n == 6 and prime_oracle(T) and not galaxy_oracle(T)
        assert not iso_oracle(gallery.h_a(), gallery.h_d())

    def test_unknown_name(self):
        with pytest.raises(gallery.GalleryError):
            gallery.build_named("h_z")

    @pytest.mark.parametrize("name", gallery.NAMES)
    def test_deterministic_and_round_trips(self, name):
        a, b = gallery.build_named(name), gallery.build_named(name)
        assert a == b
        text = dump_trn(a.tournament)
        T, order = parse_trn(text)
        assert T == a.tournament and dump_trn(T, order) == text

    @pytest.mark.parametrize("G,s", [(build_star(2, "left"), 1), (build_star(3, "left"), 1),
                                     (build_star(2, "right"), 3), (Tournament.transitive(3), 2)])
    def test_left_is_complement_of_right(self, G, s):
        right = gallery.build_named("right_pseudogalaxy", G=G, s=s).tournament
        left = gallery.build_named("left_pseudogalaxy", G=G, s=s).tournament
        assert left == complement(right)

    def test_cochain_is_complement_of_chain(self):
        for t in (1, 2):
            assert gallery.c5_cochain(t) == complement(gallery.c5_chain(t).tournament)

    def test_right_pseudogalaxy_matches_head_product(self):
        G = build_star(2, "left")
        P = gallery.right_pseudogalaxy(G, 1)
        assert P.n == gallery.h_l_right(1).n + G.n

    def test_bad_split_rejected(self):
        # a star centred left of the cut with a leaf right of it crosses any cut at 1
        G = build_star(2, "left")
        with pytest.raises(gallery.GalleryError):
            gallery.right_pseudogalaxy(G, 0)

    def test_non_galaxy_rejected(self):
        with pytest.raises(gallery.GalleryError):
            gallery.right_pseudogalaxy(gallery.c5(), 1)


class TestFamilies:
    def test_gadget_cells_fit_shapes(self):
        for gadgets, shape in ((gallery.rp_gadgets(), gallery.RP_SHAPE),
                               (gallery.alpha_gadgets(), gallery.ALPHA_SHAPE)):
            for D in gadgets:
                assert max(D.phi) <= shape.k

    def test_families_nonempty_and_indexed_by_cells(self):
        for fam, shape in ((gallery.rp_family(), gallery.RP_SHAPE),
                           (gallery.alpha_family(), gallery.ALPHA_SHAPE)):
            assert fam
            for member in fam:
                assert all(1 <= i <= shape.k for i in member.index)

    def test_first_right_member_contains_head_pattern(self):
        member = gallery.rp_family()[0].tournament
        assert contains_induced(gallery.cycle3(), member) is not None


class TestClaims:
    def test_claim_a_reports_two_offenders(self):
        rep = gallery.verify_claim("a")
        assert rep.verdict == "refuted"
        offending = [e for e in rep.evidence if e.startswith("offending")]
        assert len(offending) == 2
        # the offenders are the complements of the two named exceptions
        forms = {canonical_form(complement(gallery.h_a())).hex, canonical_form(complement(gallery.h_b())).hex}
        assert {e.split()[1] for e in offending} == forms
        assert len([e for e in rep.evidence if e.startswith("class")]) == 56

    def test_claim_b_rechecked(self):
        assert gallery.verify_claim("b").verdict == "confirmed"
        cases = gallery.product_identity_cases()
        assert cases and all(case.by_name and case.isomorphic for case in cases)

    def test_claim_b_two_leaf_star_example(self):
        G = build_star(2, "left")
        right = gallery.right_pseudogalaxy(G, 1)
        assert find_galaxy_ordering(G) is not None
        assert right.tournament == gallery.right_pseudogalaxy(G, 1, (0, 1, 2)).tournament

    def test_claim_c_lists_discrepancies(self):
        rep = gallery.verify_claim("c")
        assert rep.verdict == "refuted"
        assert any("literal discrepancy" in e for e in rep.evidence)

    def test_claim_d_rechecked(self):
        assert gallery.verify_claim("d").verdict == "confirmed"
        for t in (1, 2, 3):
            assert contains_induced(gallery.c5(), gallery.c5_chain(t).tournament) is not None
        assert contains_induced(gallery.h_a(), gallery.c5_chain(1).tournament) is not None

    def test_claim_e_rechecked(self):
        assert gallery.verify_claim("e").verdict == "confirmed"
        G = build_star(3, "left")
        assert are_isomorphic(complement(gallery.right_pseudogalaxy(G, 1).tournament),
                              gallery.left_pseudogalaxy(G, 1)) is not None

    def test_claim_f_rechecked(self):
        assert gallery.verify_claim("f").verdict == "confirmed"

    def test_claim_lines(self):
        rep = gallery.verify_claim("f")
        assert rep.line("x/claim-f.txt") == "CLAIM f confirmed x/claim-f.txt"
        assert rep.text().startswith("claim f: confirmed\n")

    def test_unknown_claim(self):
        with pytest.raises(gallery.GalleryError):
            gallery.verify_claim("z")


class TestEpsilon:
    def test_triangle_free_is_transitive(self):
        rep = gallery.epsilon_experiment(gallery.cycle3(), [4, 8, 16], 3, seed=0)
        assert not rep.failures
        assert all(t == n for n, t in rep.samples)
        assert rep.slope == pytest.approx(1.0, abs=0.01)

    def test_floor_bound(self):
        rep = gallery.epsilon_experiment(gallery.c5(), [6, 10, 14], 2, seed=1)
        assert all(t >= gallery.floor_bound(n) for n, t in rep.samples)
        assert gallery.floor_bound(8) == 4 == 8 .bit_length()

    def test_deterministic(self):
        a = gallery.epsilon_experiment(gallery.c5(), [6, 9], 3, seed=5)
        b = gallery.epsilon_experiment(gallery.c5(), [6, 9], 3, seed=5)
        assert a.samples == b.samples and a.slope == b.slope

    def test_capability(self):
        with pytest.raises(CapabilityError):
            gallery.epsilon_experiment(gallery.c5(), [41], 1, seed=0)
        with pytest.raises(CapabilityError):
            gallery.epsilon_experiment(Tournament.transitive(8), [5], 1, seed=0)

    def test_report_is_labelled_exploratory(self):
        rep = gallery.epsilon_experiment(gallery.cycle3(), [3, 5], 1, seed=0)
        assert rep.lines()[0].startswith("exploratory")
