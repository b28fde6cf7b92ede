"""Acceptance criteria, one test per criterion at its stated tolerance.

Each test registers a pass/fail line that the terminal summary prints.
"""

import math
import time

import numpy as np

from helpers import duplicated_binomial, form_grid, random_family, random_form, random_group
from torific import forms
from torific.classify import classify
from torific.expfam import fisher_metric, log_partition
from torific.forms import lattice_factor, model_metric
from torific.hessian import curvature_arrays
from torific.kahlerfn import (basis_for, candidate_periods, gram_rank, interior_samples,
                              lattice_invariance_residual, sample_pairs, separates_points,
                              verify_basis)
from torific.reduce import (binomial, binomial_equiv, check_psi_identity, equivalent,
                            negative_binomial, poisson, reduce)
from torific.spaceform import (deck_residual, equivariance_residual, hopf_closed_form,
                               hopf_pullback, pullback_residual, tangent_grid)

TIME_BUDGET = 10.0


def test_criterion_1_binomial_curvature(record):
    start = time.perf_counter()
    grid = np.linspace(-8, 8, 101)
    worst = 0.0
    for p in range(1, 21):
        S = curvature_arrays(fisher_metric(binomial(p)), grid)[3]
        worst = max(worst, float(np.max(np.abs(S + 1.0 / p))))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < TIME_BUDGET
    record(1, ok, f"max |S + 1/p| = {worst:.2e} (< 1e-9), p = 1..20, {elapsed:.2f}s")
    assert ok


def test_criterion_2_builtin_classification(record):
    start = time.perf_counter()
    errors = []
    for n in range(1, 11):
        r = classify(binomial(n))
        errors += [r.c - 1 / n, r.form.a - 0.25, r.form.b, r.phi[0] - 0.5, r.phi[1]]
        assert r.form.tag == forms.COSH_SQ
    r = classify(poisson())
    assert r.form.tag == forms.EXP
    errors += [r.c, r.form.a - 1, r.form.b, r.phi[0] - 1, r.phi[1]]
    for n in (1, 2, 5):
        r = classify(negative_binomial(n))
        assert r.form.tag == forms.SINH_SQ and r.form.eps in (1, -1)
        errors += [r.c + 1 / n, r.form.a - 0.25, r.form.b, abs(r.phi[0]) - 0.5, r.phi[1]]
    worst = float(np.max(np.abs(errors)))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < TIME_BUDGET
    record(2, ok, f"max parameter error {worst:.2e} (< 1e-8) over binomial 1..10, "
                  f"poisson, negative_binomial 1,2,5, {elapsed:.2f}s")
    assert ok


def test_criterion_3_reduction_psi_identity(rng, record):
    start = time.perf_counter()
    grid = np.linspace(-5, 5, 21)
    worst = 0.0
    for _ in range(100):
        fam = random_family(rng, max_atoms=8, scale=3.0, force_duplicates=True)
        red = reduce(fam).base
        assert len(red) < len(fam)
        worst = max(worst, float(np.max(np.abs(log_partition(fam, grid) - log_partition(red, grid)))))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-10 and elapsed < TIME_BUDGET
    record(3, ok, f"max |psi - psi_red| = {worst:.2e} (< 1e-10) over 100 families, {elapsed:.2f}s")
    assert ok


def test_criterion_4_equivalence_round_trip(rng, record):
    start = time.perf_counter()
    grid = np.linspace(-3, 3, 21)
    worst, missing = 0.0, 0
    for _ in range(100):
        base = random_family(rng, max_atoms=8)
        g = random_group(rng)
        witness = equivalent(g.apply(base), base)
        if witness is None:
            missing += 1
            continue
        worst = max(worst, check_psi_identity(g.apply(base), base, witness, grid))
    elapsed = time.perf_counter() - start
    ok = missing == 0 and worst < 1e-9 and elapsed < TIME_BUDGET
    record(4, ok, f"{100 - missing}/100 witnesses, max psi residual {worst:.2e} (< 1e-9), "
                  f"{elapsed:.2f}s")
    assert ok


def test_criterion_5_pullback_isometry(record):
    start = time.perf_counter()
    pull = deck = equiv = 0.0
    for c in (-2.0, -1.0, 0.0, 0.5, 1.0, 4.0):
        grid = tangent_grid(c, 20)
        pull = max(pull, pullback_residual(c, model_metric(c), grid))
        deck = max(deck, deck_residual(c, range(-3, 4), grid))
        for t in (0.1, 0.25, 0.7):
            equiv = max(equiv, max(equivariance_residual(c, t, z) for z in grid))
    elapsed = time.perf_counter() - start
    ok = pull < 1e-8 and deck < 1e-12 and equiv < 1e-12 and elapsed < TIME_BUDGET
    record(5, ok, f"pullback {pull:.2e} (< 1e-8), deck {deck:.2e}, equivariance {equiv:.2e} "
                  f"(< 1e-12), {elapsed:.2f}s")
    assert ok


def test_criterion_6_hopf_identity(rng, record):
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        z, u, v = rng.uniform(-4, 4, 3) + 1j * rng.uniform(-4, 4, 3)
        worst = max(worst, abs(hopf_pullback(z, u, v) - hopf_closed_form(z, u, v)))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-10 and elapsed < TIME_BUDGET
    record(6, ok, f"max identity residual {worst:.2e} (< 1e-10) over 1000 samples, {elapsed:.2f}s")
    assert ok


def test_criterion_7_kahler_bases(rng, record):
    start = time.perf_counter()
    worst, ranks = 0.0, {}
    for tag in forms.TAGS:
        form = random_form(rng, tag)
        m = form.metric()
        samples = interior_samples(form, 100, rng)
        for literal in (False, True):
            basis = basis_for(form, literal=literal)
            worst = max(worst, verify_basis(basis, m, samples))
            ranks[tag, literal] = gram_rank(basis, samples)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and set(ranks.values()) == {4} and elapsed < TIME_BUDGET
    record(7, ok, f"max PDE residual {worst:.2e} (< 1e-8), Gram ranks "
                  f"{sorted(set(ranks.values()))} (want 4) over six rows, {elapsed:.2f}s")
    assert ok


def test_criterion_8_toricity_trichotomy(rng, record):
    start = time.perf_counter()
    correct, separated, lattice, period = 0, True, 0.0, 0.0
    trials = 0
    for i in range(100):
        tag = forms.TAGS[i % len(forms.TAGS)]
        form = random_form(rng, tag)
        result = classify(form.metric(), grid=form_grid(form))
        trials += 1
        if not (result.constant and result.form.tag == tag):
            continue
        correct += 1
        basis = basis_for(result.form)
        if tag in forms.TORIC_TAGS:
            samples = interior_samples(result.form, 100, rng)
            T = basis.fiber_period
            lattice = max(lattice, lattice_invariance_residual(basis, T, samples))
            period = max(period, abs(abs(result.phi[0]) * T - 2 * math.pi * lattice_factor(result.c)))
        else:
            pairs = sample_pairs(result.form, 100, rng, candidate_periods(basis))
            separated &= separates_points(basis, pairs)
    elapsed = time.perf_counter() - start
    ok = (correct == trials and separated and lattice < 1e-12 and period < 1e-10
          and elapsed < TIME_BUDGET)
    record(8, ok, f"{correct}/{trials} tags correct, non-toric separate points: {separated}, "
                  f"lattice residual {lattice:.2e} (< 1e-12), period error {period:.2e} "
                  f"(< 1e-10), {elapsed:.2f}s")
    assert ok


def test_criterion_9_binomial_consistency(rng, record):
    start = time.perf_counter()
    wrong_p, worst = 0, 0.0
    for _ in range(50):
        p = int(rng.integers(1, 11))
        fam = duplicated_binomial(rng, p)
        found = binomial_equiv(fam)
        if found is None or found[0] != p:
            wrong_p += 1
        r = classify(fam)
        worst = max(worst, abs(r.c - 1 / p) if r.constant else math.inf)
    elapsed = time.perf_counter() - start
    ok = wrong_p == 0 and worst < 1e-9 and elapsed < TIME_BUDGET
    record(9, ok, f"{50 - wrong_p}/50 p recovered, max |c - 1/p| = {worst:.2e} (< 1e-9), "
                  f"{elapsed:.2f}s")
    assert ok
