"""Random generators shared by the property and acceptance tests."""


import numpy as np

from torific import forms
from torific.expfam import FiniteExpFam
from torific.forms import CanonicalForm
from torific.reduce import GroupElement, binomial


def random_family(rng, max_atoms=9, scale=3.0, force_duplicates=False):
    n = int(rng.integers(3 if force_duplicates else 2, max_atoms + 1))
    C = rng.uniform(-scale, scale, n)
    if force_duplicates:
        distinct = rng.uniform(-scale, scale, int(rng.integers(2, n)))
        F = rng.choice(distinct, n)
        F[:distinct.size] = distinct
    else:
        F = rng.uniform(-scale, scale, n)
    return FiniteExpFam.from_tables(C, F)


def random_group(rng, a_range=(0.1, 10.0), spread=3.0):
    a = rng.uniform(*a_range) * rng.choice([-1.0, 1.0])
    b, c, d = rng.uniform(-spread, spread, 3)
    return GroupElement(a, b, c, d)


def duplicated_binomial(rng, p, a_range=(0.5, 2.0)):
    """G-image of B(p) with some atoms split into several equal-F atoms."""
    base = binomial(p)
    C, F = [], []
    for ck, fk in zip(base.C, base.F):
        parts = int(rng.integers(1, 4))
        w = rng.dirichlet(np.ones(parts))
        C.extend(ck + np.log(w))
        F.extend([fk] * parts)
    perm = rng.permutation(len(F))
    fam = FiniteExpFam.from_tables(np.array(C)[perm], np.array(F)[perm])
    g = random_group(rng, a_range, spread=2.0)
    return g.apply(fam)


def random_form(rng, tag):
    a = rng.uniform(0.2, 4.0)
    b = rng.uniform(-1.0, 1.0)
    lam = rng.uniform(0.2, 4.0)
    if tag == forms.EXP:
        return CanonicalForm(tag, 0.0, a * rng.choice([-1.0, 1.0]), b)
    if tag == forms.CONST:
        return CanonicalForm(tag, 0.0, 0.0, b)
    if tag == forms.COSH_SQ:
        return CanonicalForm(tag, -lam, a, b)
    if tag == forms.SINH_SQ:
        return CanonicalForm(tag, lam, a, b, int(rng.choice([-1, 1])))
    if tag == forms.INV_SQ:
        return CanonicalForm(tag, lam, 0.0, b)
    return CanonicalForm(tag, lam, a, b)


def form_grid(form, count=101):
    return form.natural_domain().grid(-8.0, 8.0, count)
