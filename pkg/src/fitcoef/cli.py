"""Command-line front end.

Commands: fit, fitness, sweep, intertwine, copula-study, agreement, gof.
Reports are written as deterministic JSON (stdout or --out); experiment
commands additionally write a flat CSV table next to the report.  Exit
codes: 0 success, 1 computation error (the error class is named on
stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import copula, datasets, experiments, gof, models, npde, report
from .errors import FitcoefError, InvalidParameter, ParseError
from .fitness import FitnessConfig, fitness_coefficient, mixture_loglik
from .kernels import (
    EPANECHNIKOV,
    FIXED,
    GAUSSIAN,
    SILVERMAN_NORMAL,
    SILVERMAN_ROBUST,
    BandwidthRule,
    select_bandwidth,
)
from .npde import KERNEL_AT_ZERO, NPConfig, RepairDensity, Sample


def read_csv(path) -> Sample:
    """Parse a 1- or 2-column numeric CSV, optionally with one header row."""
    rows: list[list[float]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        ncols = None
        for lineno, row in enumerate(reader, start=1):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            if ncols is None:
                ncols = len(row)
                if ncols not in (1, 2):
                    raise ParseError(f"expected 1 or 2 columns, found {ncols}", lineno)
            elif len(row) != ncols:
                raise ParseError(f"expected {ncols} columns, found {len(row)}", lineno)
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                if lineno == 1:
                    continue  # a single header row is allowed
                bad = next(i for i, cell in enumerate(row, start=1) if not _is_number(cell))
                raise ParseError(f"non-numeric value {row[bad - 1]!r}", lineno, bad) from None
    if not rows:
        raise ParseError("no numeric rows found", 1)
    arr = np.asarray(rows, dtype=float)
    return Sample(arr[:, 0] if arr.shape[1] == 1 else arr)


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def _load_data(spec: str) -> Sample:
    if spec.startswith("builtin:"):
        try:
            return Sample(datasets.load_builtin(spec.split(":", 1)[1]))
        except KeyError as exc:
            raise InvalidParameter(str(exc)) from None
    return read_csv(spec)


_MODEL_ALIASES = {
    "gumbel": "gumbel",
    "normal": "normal",
    "normal-mean": "normal_mean",
    "normal-scale": "normal_scale",
    "exponential": "exponential",
    "weibull": "weibull",
}


def _parse_bandwidth(text: str, data: np.ndarray) -> tuple[float, str]:
    """Grammar: silverman | silverman-normal | fixed:<value> | fixed:<c>sd."""
    if text == "silverman":
        return select_bandwidth(BandwidthRule(SILVERMAN_ROBUST), data), text
    if text == "silverman-normal":
        return select_bandwidth(BandwidthRule(SILVERMAN_NORMAL), data), text
    if text.startswith("fixed:"):
        value = text.split(":", 1)[1]
        if value.endswith("sd"):
            frac = float(value[:-2])
            if frac <= 0:
                raise InvalidParameter("bandwidth fraction must be positive")
            return frac * float(np.std(data, ddof=1)), text
        return select_bandwidth(BandwidthRule(FIXED, float(value)), data), text
    raise InvalidParameter(
        f"bad bandwidth {text!r}; use silverman | silverman-normal | fixed:<value> | fixed:<c>sd"
    )


def _parse_q(text: str) -> RepairDensity:
    """Grammar: student-t:<nu>,<mu>,<sigma> | kernel-at-zero."""
    if text == "kernel-at-zero":
        return RepairDensity(kind=KERNEL_AT_ZERO)
    if text.startswith("student-t:"):
        parts = text.split(":", 1)[1].split(",")
        if len(parts) != 3:
            raise InvalidParameter("student-t repair density takes nu,mu,sigma")
        return RepairDensity(nu=int(parts[0]), mu=float(parts[1]), sigma=float(parts[2]))
    raise InvalidParameter(f"bad repair density {text!r}")


def _parse_delta(text: str, n: int) -> float:
    if text == "1/n":
        return 1.0 / n
    value = float(text)
    if value < 0:
        raise InvalidParameter("delta must be non-negative")
    return value


def _np_config_from_args(args, sample: Sample) -> NPConfig:
    data = sample.rows if sample.dim == 1 else sample.rows[:, 0]
    h, _ = _parse_bandwidth(args.bandwidth, data)
    return NPConfig(
        h=h,
        kernel=args.kernel,
        delta=_parse_delta(args.delta, sample.n),
        q=_parse_q(args.q),
    )


def _emit(doc: dict, args, table: list[dict] | None = None) -> None:
    if args.out:
        report.dump(doc, args.out)
        if table is not None:
            report.write_table(table, _table_path(args.out))
    else:
        sys.stdout.write(report.dumps(doc))


def _table_path(out: str) -> str:
    return (out[:-5] if out.endswith(".json") else out) + ".table.csv"


def _add_common_np_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kernel", choices=[GAUSSIAN, EPANECHNIKOV], default=GAUSSIAN)
    p.add_argument("--bandwidth", default="silverman")
    p.add_argument("--delta", default="1/n")
    p.add_argument("--q", default="student-t:3,0,100")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fitcoef",
        description="Fitness-coefficient density estimation and model-quality assessment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="maximum likelihood fit of a parametric family")
    p_fit.add_argument("--data", required=True, help="CSV path or builtin:<name>")
    p_fit.add_argument("--model", required=True, choices=sorted(_MODEL_ALIASES))
    p_fit.add_argument("--out")

    p_fitness = sub.add_parser("fitness", help="fitness or OS coefficient on one sample")
    p_fitness.add_argument("--data", required=True)
    p_fitness.add_argument("--model", required=True, choices=sorted(_MODEL_ALIASES))
    p_fitness.add_argument("--coefficient", choices=["lr", "os"], default="lr")
    _add_common_np_flags(p_fitness)
    p_fitness.add_argument("--no-per-point", action="store_true")
    p_fitness.add_argument("--out")

    p_sweep = sub.add_parser("sweep", help="coefficients as a function of the bandwidth")
    p_sweep.add_argument("--data")
    p_sweep.add_argument("--model", required=True, choices=sorted(_MODEL_ALIASES))
    p_sweep.add_argument("--h-grid", default="0.05:1.5:30", help="lo:hi:count, fractions of the sample sd")
    p_sweep.add_argument("--generate", choices=sorted(_MODEL_ALIASES), help="generator family (instead of --data)")
    p_sweep.add_argument("--gen-theta", help="comma-separated generator parameters")
    p_sweep.add_argument("--gen-moments", help="mean,sd matched by the generator (gumbel/normal)")
    p_sweep.add_argument("--n", type=int, default=400, help="generated sample size")
    p_sweep.add_argument("--seed", type=int)
    p_sweep.add_argument("--kernel", choices=[GAUSSIAN, EPANECHNIKOV], default=GAUSSIAN)
    p_sweep.add_argument("--out")

    p_inter = sub.add_parser("intertwine", help="error curves while truth slides through the model")
    p_inter.add_argument("--setting", type=int, choices=[1, 2], default=1)
    p_inter.add_argument("--n", type=int, default=400)
    p_inter.add_argument("--reps", type=int, default=100)
    p_inter.add_argument("--t-points", type=int, default=21)
    p_inter.add_argument("--t-max", type=float, default=0.5)
    p_inter.add_argument("--seed", type=int, required=True)
    p_inter.add_argument("--threads", type=int, default=1)
    p_inter.add_argument("--out")

    p_cop = sub.add_parser("copula-study", help="bivariate semiparametric estimation study")
    p_cop.add_argument("--n-list", default="200", help="comma-separated sample sizes")
    p_cop.add_argument("--reps", type=int, default=50)
    p_cop.add_argument("--seed", type=int, required=True)
    p_cop.add_argument("--convention", choices=[copula.N_PLUS_1, copula.N_CONVENTION], default=copula.N_PLUS_1)
    p_cop.add_argument("--threads", type=int, default=1)
    p_cop.add_argument("--out")

    p_agree = sub.add_parser("agreement", help="fitness coefficient versus bootstrap p-values")
    p_agree.add_argument("--reps", type=int, default=100)
    p_agree.add_argument("--n", type=int, default=409)
    p_agree.add_argument("--B", type=int, default=199)
    p_agree.add_argument("--seed", type=int, required=True)
    p_agree.add_argument("--threads", type=int, default=1)
    p_agree.add_argument("--out")

    p_gof = sub.add_parser("gof", help="Cramer-von Mises parametric-bootstrap test")
    p_gof.add_argument("--data", required=True)
    p_gof.add_argument("--model", required=True, choices=sorted(_MODEL_ALIASES))
    p_gof.add_argument("--B", type=int, default=199)
    p_gof.add_argument("--seed", type=int, required=True)
    p_gof.add_argument("--threads", type=int, default=1)
    p_gof.add_argument("--out")

    return parser


def _cmd_fit(args) -> None:
    sample = _load_data(args.data)
    family = _MODEL_ALIASES[args.model]
    theta = models.fit_mle(family, sample)
    doc = report.make_report(
        "fit",
        {"family": family, "data": args.data},
        None,
        {
            "theta": theta,
            "param_names": list(models.param_names(family)),
            "loglik": models.log_likelihood(family, theta, sample.rows),
            "n": sample.n,
        },
    )
    _emit(doc, args)


def _cmd_fitness(args) -> None:
    sample = _load_data(args.data)
    family = _MODEL_ALIASES[args.model]
    np_cfg = _np_config_from_args(args, sample)
    cfg = FitnessConfig(family=family, np_config=np_cfg, coefficient=args.coefficient)
    res = fitness_coefficient(sample, cfg)
    per_point = None
    if not args.no_per_point:
        per_point = {
            "param_values": res.param_values,
            "nonparam_values": res.nonparam_values,
        }
    doc = report.make_report(
        "fitness",
        {
            "family": family,
            "coefficient": args.coefficient,
            "kernel": np_cfg.kernel,
            "bandwidth": args.bandwidth,
            "delta": np_cfg.delta,
            "q": args.q,
            "data": args.data,
        },
        None,
        {
            "alpha": res.alpha,
            "at_boundary": res.at_boundary,
            "theta": res.theta,
            "param_names": list(models.param_names(family)),
            "h": res.h,
            "loglik_at_alpha": res.loglik_at_alpha,
            "loglik_parametric": mixture_loglik(1.0, res.param_values, res.nonparam_values),
            "loglik_nonparametric": mixture_loglik(0.0, res.param_values, res.nonparam_values),
            "n": sample.n,
        },
        per_point=per_point,
    )
    _emit(doc, args)


def _cmd_sweep(args) -> None:
    parts = args.h_grid.split(":")
    if len(parts) != 3:
        raise InvalidParameter("--h-grid takes lo:hi:count")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    fractions = tuple(np.linspace(lo, hi, count).round(12))
    family = _MODEL_ALIASES[args.model]

    if args.generate is not None:
        if args.seed is None:
            raise InvalidParameter("generated sweeps need --seed")
        gen_family = _MODEL_ALIASES[args.generate]
        if args.gen_moments:
            mean, sd = (float(v) for v in args.gen_moments.split(","))
            gtheta = models.params_from_moments(gen_family, mean, sd)
        elif args.gen_theta:
            gtheta = np.array([float(v) for v in args.gen_theta.split(",")])
        else:
            raise InvalidParameter("--generate needs --gen-theta or --gen-moments")
        spec = experiments.SweepSpec(
            h_fractions=fractions,
            family=family,
            generator=(gen_family, tuple(gtheta), args.n),
            seed=args.seed,
            kernel=args.kernel,
        )
    elif args.data is not None:
        sample = _load_data(args.data)
        if sample.dim != 1:
            raise InvalidParameter("sweep takes a 1-D sample")
        spec = experiments.SweepSpec(
            h_fractions=fractions,
            family=family,
            data=tuple(sample.rows),
            seed=args.seed,
            kernel=args.kernel,
        )
    else:
        raise InvalidParameter("sweep needs --data or --generate")
    out = experiments.bandwidth_sweep(spec)
    _emit(out["report"], args, out["table"])


def _cmd_intertwine(args) -> None:
    spec = experiments.IntertwineSpec(
        setting=args.setting,
        t_values=tuple(np.linspace(-args.t_max, args.t_max, args.t_points).round(12)),
        n=args.n,
        reps=args.reps,
        seed=args.seed,
        threads=args.threads,
    )
    out = experiments.intertwine_study(spec)
    _emit(out["report"], args, out["table"])


def _cmd_copula_study(args) -> None:
    n_values = tuple(int(v) for v in args.n_list.split(","))
    spec = experiments.CopulaStudySpec(
        n_values=n_values,
        reps=args.reps,
        seed=args.seed,
        convention=args.convention,
        threads=args.threads,
    )
    out = experiments.copula_study(spec)
    _emit(out["report"], args, out["table"])


def _cmd_agreement(args) -> None:
    spec = experiments.AgreementSpec(
        reps=args.reps, n=args.n, B=args.B, seed=args.seed, threads=args.threads
    )
    out = experiments.agreement_study(spec)
    _emit(out["report"], args, out["table"])


def _cmd_gof(args) -> None:
    sample = _load_data(args.data)
    family = _MODEL_ALIASES[args.model]
    rep = gof.bootstrap_pvalue(sample, family, args.B, args.seed, threads=args.threads)
    doc = report.make_report(
        "gof",
        {"family": family, "B": args.B, "data": args.data},
        args.seed,
        {
            "statistic": rep.statistic,
            "p_value": rep.p_value,
            "bootstrap_reps": rep.bootstrap_reps,
            "theta": rep.theta,
            "param_names": list(models.param_names(family)),
        },
    )
    _emit(doc, args)


_DISPATCH = {
    "fit": _cmd_fit,
    "fitness": _cmd_fitness,
    "sweep": _cmd_sweep,
    "intertwine": _cmd_intertwine,
    "copula-study": _cmd_copula_study,
    "agreement": _cmd_agreement,
    "gof": _cmd_gof,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _DISPATCH[args.command](args)
    except ParseError as exc:
        where = f"line {exc.line}" + (f", column {exc.column}" if exc.column else "")
        print(f"error: ParseError ({where}): {exc}", file=sys.stderr)
        return 1
    except FitcoefError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
