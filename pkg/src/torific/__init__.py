"""Classify one-dimensional dually flat manifolds by Hessian sectional curvature
and certify the complex space forms that torify them."""

from .classify import Classification, classify, metric_of
from .curves import Interval, MetricCurve, PotentialCurve
from .expfam import AnalyticFamily, FiniteExpFam, FiniteSampleSpace
from .forms import CanonicalForm, model_form, model_metric
from .reduce import (GroupElement, binomial, binomial_equiv, categorical2, equivalent,
                     model, negative_binomial, poisson)

__all__ = [
    "AnalyticFamily", "CanonicalForm", "Classification", "FiniteExpFam",
    "FiniteSampleSpace", "GroupElement", "Interval", "MetricCurve", "PotentialCurve",
    "binomial", "binomial_equiv", "categorical2", "classify", "equivalent",
    "metric_of", "model", "model_form", "model_metric", "negative_binomial",
    "poisson",
]
