"""``torific`` command line: classify, verify, reduce, equiv.

Exit status: 0 success, 2 unreadable input, 3 numerical failure,
4 a certification residual exceeded its tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kahlerfn, spaceform
from .classify import classify, metric_of
from .curves import MetricCurve
from .errors import NumericalError, SpecError, TorificError
from .expfam import FiniteExpFam
from .forms import lattice_factor, model_metric
from .io import family_document, load_family, parse_builtin_flag, parse_metric_flag
from .reduce import binomial_equiv, check_psi_identity, equivalent, reduce

EXIT_OK, EXIT_PARSE, EXIT_NUMERIC, EXIT_CERT = 0, 2, 3, 4
CSV_COLUMNS = ("check", "c", "param", "max_residual", "tolerance", "pass")
DECK_TOL = EQUIVARIANCE_TOL = LATTICE_TOL = 1e-12
PERIOD_TOL = 1e-10


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    grid: tuple = (-8.0, 8.0, 101)
    tol_constancy: float = 1e-7
    tol_fit: float = 1e-6
    tol_pde: float = 1e-8
    tol_pullback: float = 1e-8
    format: str = "text"
    seed: int = 0
    target_c: Optional[float] = None
    metric_c: Optional[float] = None

    def __post_init__(self):
        lo, hi, n = self.grid
        if n < 11:
            raise SpecError("grid needs at least 11 points", "--grid")
        if not lo < hi:
            raise SpecError("grid needs LO < HI", "--grid")
        for name in ("tol_constancy", "tol_fit", "tol_pde", "tol_pullback"):
            if not getattr(self, name) > 0:
                raise SpecError("tolerance must be positive", "--" + name.replace("_", "-"))


def _parse_grid(text: str):
    try:
        lo, hi, n = text.split(":")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI:N, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torific", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("classify", "verify", "reduce", "equiv"):
        p = sub.add_parser(name)
        p.add_argument("files", nargs="*", help="family spec JSON files")
        p.add_argument("--builtin", action="append", default=[], metavar="NAME[:PARAM]")
        p.add_argument("--metric", action="append", default=[], metavar="FORM[:k=v,...]")
        p.add_argument("--grid", type=_parse_grid, default=(-8.0, 8.0, 101), metavar="LO:HI:N")
        p.add_argument("--tol-constancy", type=float, default=1e-7)
        p.add_argument("--tol-fit", type=float, default=1e-6)
        p.add_argument("--tol-pde", type=float, default=1e-8)
        p.add_argument("--tol-pullback", type=float, default=1e-8)
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--seed", type=int, default=0)
        if name == "verify":
            p.add_argument("--c", dest="target_c", type=float,
                           help="certify F(C) directly against a model metric")
            p.add_argument("--metric-c", type=float,
                           help="model metric paired with --c (defaults to --c)")
    return parser


# -- input handling ----------------------------------------------------------

def _gather_inputs(args):
    items = []
    for path in args.files:
        items.append((path, lambda path=path: load_family(path)))
    for text in args.builtin:
        items.append((f"builtin:{text}", lambda text=text: parse_builtin_flag(text)))
    for text in args.metric:
        items.append((f"metric:{text}", lambda text=text: parse_metric_flag(text)))
    return items


def _grid_for(m: MetricCurve, cfg: RunConfig):
    return m.domain.grid(*cfg.grid)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


# -- classify ----------------------------------------------------------------

def classification_record(name, obj, cfg: RunConfig, rng) -> dict:
    m = metric_of(obj)
    grid = _grid_for(m, cfg)
    r = classify(m, grid, cfg.tol_constancy, cfg.tol_fit)
    rec = {"input": name, "constant": r.constant, "lambda": r.lam,
           "max_S_deviation": r.max_S_deviation, "c": r.c,
           "form": r.form.tag if r.form else None,
           "a": r.form.a if r.form else None, "b": r.form.b if r.form else None,
           "eps": r.form.eps if r.form and r.form.tag == "SINH_SQ" else None,
           "phi_alpha": r.phi[0] if r.phi else None,
           "phi_beta": r.phi[1] if r.phi else None,
           "toric": r.toric, "K": r.K, "separates_points": None, "binomial_p": None}
    if r.form is not None:
        basis = kahlerfn.basis_for(r.form)
        pairs = kahlerfn.sample_pairs(r.form, 64, rng, kahlerfn.candidate_periods(basis))
        rec["separates_points"] = kahlerfn.separates_points(basis, pairs)
    if isinstance(obj, FiniteExpFam):
        hit = binomial_equiv(obj)
        rec["binomial_p"] = hit[0] if hit else None
    return rec


def _write_records(records, fmt, out):
    if fmt == "json":
        out.write(json.dumps(records, indent=2) + "\n")
    elif fmt == "csv":
        keys = list(records[0]) if records else []
        w = csv.writer(out, lineterminator="\n")
        w.writerow(keys)
        for rec in records:
            w.writerow([_fmt(rec.get(k)) for k in keys])
    else:
        for i, rec in enumerate(records):
            if i:
                out.write("\n")
            for k, v in rec.items():
                out.write(f"{k}: {_fmt(v)}\n")


def cmd_classify(cfg: RunConfig, out) -> int:
    rng = np.random.default_rng(cfg.seed)
    records, status = [], EXIT_OK
    for name, load in cfg.inputs:
        try:
            records.append(classification_record(name, load(), cfg, rng))
        except SpecError as exc:
            records.append({"input": name, "error": str(exc)})
            status = max(status, EXIT_PARSE)
        except (NumericalError, TorificError) as exc:
            records.append({"input": name, "error": f"{type(exc).__name__}: {exc}"})
            status = max(status, EXIT_NUMERIC)
    _write_records(records, cfg.format, out)
    return status


# -- verify ------------------------------------------------------------------

def _row(check, c, param, residual, tol):
    return {"check": check, "c": c, "param": param, "max_residual": residual,
            "tolerance": tol, "pass": bool(residual < tol)}


def _space_form_rows(c: float, cfg: RunConfig):
    grid = spaceform.tangent_grid(c)
    rows = [_row("model_pullback", c, "grid=20x20",
                 spaceform.pullback_residual(c, model_metric(c), grid), cfg.tol_pullback),
            _row("deck", c, "k=-3..3", spaceform.deck_residual(c, range(-3, 4), grid), DECK_TOL)]
    for t in (0.1, 0.25, 0.7):
        res = max(spaceform.equivariance_residual(c, t, z) for z in grid)
        rows.append(_row("equivariance", c, f"t={t}", res, EQUIVARIANCE_TOL))
    return rows


def verification_rows(obj, cfg: RunConfig, rng) -> list[dict]:
    m = metric_of(obj)
    grid = _grid_for(m, cfg)
    r = classify(m, grid, cfg.tol_constancy, cfg.tol_fit)
    if not r.toric:
        tag = r.form.tag if r.form else "non-constant"
        return [{"check": "toric", "c": r.c, "param": f"form={tag}", "max_residual": math.inf,
                 "tolerance": 0.0, "pass": False}]
    c, form, alpha = r.c, r.form, r.phi[0]
    # tangent grid of the input: 20 base points spanning the classification grid
    base = np.linspace(grid.min(), grid.max(), 20)
    tgrid = (base[:, None] + 1j * np.linspace(-math.pi, math.pi, 20)[None, :]).ravel()
    rows = [_row("pullback", c, "grid=20x20",
                 spaceform.pullback_residual(c, m, tgrid, r.phi), cfg.tol_pullback)]
    rows += _space_form_rows(c, cfg)
    basis = kahlerfn.basis_for(form)
    samples = kahlerfn.interior_samples(form, 100, rng)
    samples = samples[m.domain.contains(samples[:, 0])]
    for i, name, r1, r2 in kahlerfn.residual_table(basis, m, samples):
        rows.append(_row("kahler_pde", c, f"{form.tag} f{i}={name}", max(r1, r2), cfg.tol_pde))
    T = basis.fiber_period
    rows.append(_row("lattice_invariance", c, f"T={T!r}",
                     kahlerfn.lattice_invariance_residual(basis, T, samples), LATTICE_TOL))
    rows.append(_row("period_transport", c, f"alpha={alpha!r}",
                     abs(abs(alpha) * T - 2 * math.pi * lattice_factor(c)), PERIOD_TOL))
    return rows


def cmd_verify(cfg: RunConfig, out) -> int:
    rng = np.random.default_rng(cfg.seed)
    rows, status = [], EXIT_OK
    if cfg.target_c is not None:
        mc = cfg.target_c if cfg.metric_c is None else cfg.metric_c
        c = cfg.target_c
        res = spaceform.pullback_residual(c, model_metric(mc), spaceform.tangent_grid(min(c, mc)))
        rows.append(_row("pullback", c, f"metric_c={mc!r}", res, cfg.tol_pullback))
        rows += _space_form_rows(c, cfg)[1:]
    for name, load in cfg.inputs:
        try:
            rows += [dict(r, input=name) for r in verification_rows(load(), cfg, rng)]
        except SpecError as exc:
            sys.stderr.write(f"{name}: {exc}\n")
            status = max(status, EXIT_PARSE)
        except TorificError as exc:
            sys.stderr.write(f"{name}: {type(exc).__name__}: {exc}\n")
            status = max(status, EXIT_NUMERIC)
    if status == EXIT_OK and not all(r["pass"] for r in rows):
        status = EXIT_CERT
    _write_rows(rows, cfg.format, out)
    return status


def _write_rows(rows, fmt, out):
    if fmt == "json":
        out.write(json.dumps([{k: r.get(k) for k in CSV_COLUMNS} for r in rows], indent=2) + "\n")
        return
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow([_fmt(r[k]) for k in CSV_COLUMNS])
        return
    for r in rows:
        verdict = "PASS" if r["pass"] else "FAIL"
        out.write(f"{verdict} {r['check']:<20} c={r['c']!r:<12} {r['param']:<28} "
                  f"residual={r['max_residual']:.3e} tol={r['tolerance']:.1e}\n")


# -- reduce / equiv ----------------------------------------------------------

def _finite(name, load):
    fam = load()
    if not isinstance(fam, FiniteExpFam):
        raise SpecError("reduce/equiv accept finite families only", name)
    return fam


def cmd_reduce(cfg: RunConfig, out) -> int:
    docs = []
    try:
        for name, load in cfg.inputs:
            docs.append(family_document(reduce(_finite(name, load)).base))
    except SpecError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_PARSE
    except TorificError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC
    payload = docs[0] if len(docs) == 1 else docs
    out.write(json.dumps(payload, indent=None if cfg.format == "csv" else 2) + "\n")
    return EXIT_OK


def cmd_equiv(cfg: RunConfig, out) -> int:
    if len(cfg.inputs) != 2:
        sys.stderr.write("equiv needs exactly two inputs\n")
        return EXIT_PARSE
    try:
        f1, f2 = (_finite(name, load) for name, load in cfg.inputs)
    except SpecError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_PARSE
    g = equivalent(f1, f2)
    rec = {"equivalent": g is not None}
    if g is not None:
        lo, hi, _ = cfg.grid
        rec.update(a=g.a, b=g.b, c=g.c, d=g.d,
                   psi_residual=check_psi_identity(f1, f2, g, np.linspace(lo, hi, 21)))
    if cfg.format == "json":
        out.write(json.dumps(rec, indent=2) + "\n")
    elif cfg.format == "csv":
        _write_records([rec], "csv", out)
    elif g is None:
        out.write("not equivalent\n")
    else:
        out.write(f"a={g.a!r} b={g.b!r} c={g.c!r} d={g.d!r} "
                  f"psi_residual={rec['psi_residual']:.3e}\n")
    return EXIT_OK


COMMANDS = {"classify": cmd_classify, "verify": cmd_verify,
            "reduce": cmd_reduce, "equiv": cmd_equiv}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, _gather_inputs(args), args.grid, args.tol_constancy,
                        args.tol_fit, args.tol_pde, args.tol_pullback, args.format, args.seed,
                        getattr(args, "target_c", None), getattr(args, "metric_c", None))
    except SpecError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_PARSE
    if not cfg.inputs and cfg.target_c is None:
        sys.stderr.write("no inputs given\n")
        return EXIT_PARSE
    return COMMANDS[cfg.command](cfg, out)


def run(argv) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout."""
    buf = io.StringIO()
    return main(argv, buf), buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
