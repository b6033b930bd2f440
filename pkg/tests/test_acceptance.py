"""Acceptance criteria, one test each. Every test prints a PASS/FAIL line."""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

import pytest

from oracles import class_reps, galaxy_oracle, iso_oracle, prime_oracle, random_tournament, tr_oracle
from ttk import gallery
from ttk.decomposition import is_prime
from ttk.galaxy import find_galaxy_ordering
from ttk.iso import canonical_form, contains_induced, enumerate_up_to_iso
from ttk.msequence import (
    DigraphEmbedding,
    Inconclusive,
    SequentialEmbedding,
    StrongPairCert,
    embed_digraph,
    is_strong,
    plant_gadgets,
    random_msequence,
    sequential_embed,
    strengthen,
    validate_msequence,
    verify_digraph_embedding,
    verify_sequential,
    verify_strong_pair,
)
from ttk.product import ShapeVector
from ttk.tournament import Tournament, backward_graph, complement, density, tr_exact


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail
    return emit


def _is_embedding(H, T, emb) -> bool:
    return emb is not None and len(set(emb.values())) == H.n and all(
        T.edge(emb[a], emb[b]) == H.edge(a, b) for a in range(H.n) for b in range(H.n) if a != b)


def test_criterion_1_catalog_counts(report):
    start = time.perf_counter()
    counts = [len(enumerate_up_to_iso(n)) for n in range(1, 7)]
    elapsed = time.perf_counter() - start
    oracle_ok = all(sorted(canonical_form(R) for R in class_reps(n)) == enumerate_up_to_iso(n)
                    for n in range(1, 6))
    ok = counts == [1, 1, 2, 4, 12, 56] and oracle_ok and elapsed < 10
    report(1, ok, f"counts {counts}, oracle match n<=5 {oracle_ok}, {elapsed:.2f}s")


def test_criterion_2_six_vertex_classification(report):
    start = time.perf_counter()
    rep = gallery.verify_claim("a")
    elapsed = time.perf_counter() - start
    offending = [e.split()[1] for e in rep.evidence if e.startswith("offending")]
    # independent re-check of each offender
    for code in offending:
        T = next(f for f in enumerate_up_to_iso(6) if f.hex == code).decode()
        assert prime_oracle(T) and not galaxy_oracle(T)
        assert not any(iso_oracle(T, X) for X in (gallery.h_a(), gallery.h_b(), gallery.h_d()))
    ok = rep.verdict == "confirmed" and elapsed < 60
    report(2, ok, f"verdict {rep.verdict} in {elapsed:.2f}s; offending forms {offending or 'none'}")


def test_criterion_3_product_identities(report):
    cases = gallery.product_identity_cases(max_n=4)
    galaxies = {c.galaxy for c in cases}
    kinds = {c.kind for c in cases}
    bad = [c for c in cases if not c.by_name]
    ok = len(galaxies) >= 5 and kinds == {"right", "alpha"} and not bad
    report(3, ok, f"{len(cases)} labeled identities over {len(galaxies)} galaxies, {len(bad)} unequal")


def test_criterion_4_named_values(report):
    C5, HD = gallery.c5(), gallery.h_d()
    checks = {
        "tr(C5)=3": tr_exact(C5)[0] == 3 == tr_oracle(C5),
        "tr(H_D)=3": tr_exact(HD)[0] == 3 == tr_oracle(HD),
        "C5 prime": is_prime(C5) and prime_oracle(C5),
        "H_D prime": is_prime(HD) and prime_oracle(HD),
        "C5 not galaxy": find_galaxy_ordering(C5) is None and not galaxy_oracle(C5),
        "H_D not galaxy": find_galaxy_ordering(HD) is None and not galaxy_oracle(HD),
        "complement(C5) ~ C5": canonical_form(complement(C5)) == canonical_form(C5)
        and iso_oracle(complement(C5), C5),
    }
    failed = [k for k, v in checks.items() if not v]
    report(4, not failed, f"{len(checks) - len(failed)}/{len(checks)} named values agree with oracles")


def test_criterion_5_containments(report):
    targets = [(f"C5 in c5_chain({t})", gallery.c5(), gallery.c5_chain(t).tournament) for t in (1, 2, 3)]
    targets.append(("H_a in c5_chain(1)", gallery.h_a(), gallery.c5_chain(1).tournament))
    targets.append(("H_b in right pseudogalaxy",
                    gallery.h_b(), gallery.right_pseudogalaxy(Tournament.transitive(1), 1).tournament))
    failed = [name for name, H, T in targets if not _is_embedding(H, T, contains_induced(H, T))]
    report(5, not failed, f"{len(targets) - len(failed)}/{len(targets)} embedding certificates verified")


def test_criterion_6_density_inequality(report):
    rng = random.Random(6)
    violations = 0
    for _ in range(10_000):
        n = rng.randint(2, 12)
        T = random_tournament(n, rng)
        verts = list(range(n))
        rng.shuffle(verts)
        cut = rng.randint(1, n - 1)
        X, Y = verts[:cut], verts[cut:]
        X1 = rng.sample(X, rng.randint(1, len(X)))
        Y1 = rng.sample(Y, rng.randint(1, len(Y)))
        c1 = Fraction(rng.randint(1, len(X1)), len(X))
        c2 = Fraction(rng.randint(1, len(Y1)), len(Y))
        lam = 1 - density(T, X, Y) + Fraction(rng.randint(0, 3), 10)
        if density(T, X1, Y1) < 1 - lam / (c1 * c2):
            violations += 1
    report(6, violations == 0, f"10000 exact instances, {violations} violations")


def _strengthen_instance(seed: int):
    rng = random.Random(seed)
    if seed % 3 == 0:
        # a single hub vertex against the next cell forces the filter to act
        return random_msequence(ShapeVector((0, 0), ()), 20, None, Fraction(1, 20), seed, hubs=1)
    m = rng.randint(1, 6)
    v = tuple(rng.randint(0, 1) for _ in range(m))
    eta = tuple(rng.randint(1, 2) for _ in range(sum(v)))
    cs = rng.randint(4, 10)
    lam = Fraction(rng.randint(0, 2), cs)
    hubs = rng.randint(0, lam.numerator) if lam else 0
    return random_msequence(ShapeVector(v, eta), cs, None, lam, seed, hubs=hubs)


def test_criterion_7_strengthen_contract(report):
    failures, filtered = [], 0
    for seed in range(100):
        chi = _strengthen_instance(seed)
        assert chi.shape.m <= 6 and validate_msequence(chi).ok
        res = strengthen(chi)
        filtered += sum(res.removed) > 0
        if is_strong(res.sequence, res.lam_new):
            failures.append(f"seed {seed}: not strong")
        if any(2 * len(b) < len(a) for a, b in zip(chi.long_form(), res.sequence.long_form())):
            failures.append(f"seed {seed}: cell shrank by more than half")
    report(7, not failures, f"100 seeds, {filtered} with vertices filtered, {len(failures)} failures")


def test_criterion_8_dichotomy_soundness(report):
    failures, inconclusive, counts = [], 0, {"embedding": 0, "strong-pair": 0}
    for run in range(200):
        shape, gadgets = ((gallery.RP_SHAPE, gallery.rp_gadgets()) if run % 2 == 0
                          else (gallery.ALPHA_SHAPE, gallery.alpha_gadgets()))
        edges = [(g, e) for g, D in enumerate(gadgets) for e in range(len(D.edges))]
        complete = edges[(run // 4) % len(edges)] if (run // 2) % 2 else None
        chi = plant_gadgets(shape, gadgets, 4 + run % 3, run, complete)
        if run % 8 < 4:
            D = gadgets[complete[0]] if complete else gadgets[0]
            out = embed_digraph(D, strengthen(chi).sequence)
            witness_ok = isinstance(out, DigraphEmbedding) and verify_digraph_embedding(out, chi)
        else:
            out = sequential_embed(gadgets, chi)
            witness_ok = isinstance(out, SequentialEmbedding) and verify_sequential(out, chi)
        inconclusive += isinstance(out, Inconclusive)
        if complete is None:
            ok = witness_ok
            counts["embedding"] += ok
        else:
            ok = isinstance(out, StrongPairCert) and verify_strong_pair(out, chi.host, chi.tr_value)
            counts["strong-pair"] += ok
        if not ok:
            failures.append(f"run {run}: {type(out).__name__}")
    ok = not failures and inconclusive == 0
    report(8, ok, f"200 runs: {counts['embedding']} verified embeddings, "
                  f"{counts['strong-pair']} verified strong pairs, {inconclusive} inconclusive")


def test_criterion_9_mirror_complement(report):
    rng = random.Random(9)
    checked = mismatches = 0
    for n in range(1, 7):
        for form in enumerate_up_to_iso(n):
            T = form.decode()
            for _ in range(10):
                order = list(range(n))
                rng.shuffle(order)
                lhs = backward_graph(complement(T), order[::-1]).pairs
                mismatches += lhs != backward_graph(T, order).mirror()
                checked += 1
    report(9, mismatches == 0, f"{checked} class orderings, {mismatches} mismatches")


def test_criterion_10_epsilon_sanity(report):
    ns = [4, 8, 12, 16, 24, 32, 40]
    tri = gallery.epsilon_experiment(gallery.cycle3(), ns, 3, seed=10)
    again = gallery.epsilon_experiment(gallery.cycle3(), ns, 3, seed=10)
    c5 = gallery.epsilon_experiment(gallery.c5(), [6, 10, 16, 24], 3, seed=10)
    samples = tri.samples + c5.samples
    floor_ok = all(t >= math.floor(math.log2(n)) + 1 for n, t in samples)
    slope_ok = tri.slope is not None and abs(tri.slope - 1.0) <= 0.01
    det = tri.samples == again.samples and tri.slope == again.slope
    ok = slope_ok and floor_ok and det and not tri.failures
    report(10, ok, f"triangle slope {tri.slope:.4f}, floor bound on {len(samples)} samples {floor_ok}, "
                   f"deterministic {det}")
