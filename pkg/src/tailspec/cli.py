"""Command-line interface.

Subcommands: ``gen`` (draw and store a matrix), ``spectrum`` (exact sparse
statistics of a stored matrix), ``bounds`` (closed-form calculators),
``rip`` / ``kls`` (the two composite bound front ends), ``verify``
(Monte Carlo experiments) and ``report`` (CSV + figure suites).

Results print as ``key=value`` lines with 12 significant digits; column
supports print 1-based, e.g. ``support={1,3}``.  Exit codes: 0 success,
2 validation or domain error (also argparse errors), 3 resource cap
exceeded.

Any subcommand accepts ``--config FILE`` with ``key=value`` lines
(``#`` comments allowed).  Config entries behave as if typed at the
position of the ``--config`` flag, so later command-line flags override
them; ``key=true`` turns into ``--key``, ``key=false`` into ``--no-key``.
"""

from __future__ import annotations

import argparse
import csv
import sys

from . import bounds as bounds_mod
from . import harness, report
from .speclab import (
    ConvergenceError,
    ResourceCapError,
    column_norm_max,
    covariance_deviation_S,
    exact_Ak,
    exact_Bk_sq,
    exact_delta_m,
    exact_Qk,
    generate_matrix,
    load_matrix,
    save_matrix,
)
from .tailmodels import (
    GENERATOR_ID,
    concentration_tail_bound,
    gamma_function,
    inverse_tail_truncated_pareto,
    model_record,
    moment_p_truncated_pareto,
    parse_model_record,
    rosenthal_bracket,
    rosenthal_mq,
    second_moment,
)

__all__ = ["main"]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _emit(pairs) -> list[tuple[str, str]]:
    rendered = [(key, _fmt(value)) for key, value in pairs]
    for key, value in rendered:
        print(f"{key}={value}")
    return rendered


def _support_str(support) -> str:
    return "{" + ",".join(str(i + 1) for i in support) + "}"


def _parse_index_set(text: str) -> list[int]:
    indices = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        value = int(token)
        if value < 1:
            raise ValueError("column indices are 1-based")
        indices.append(value - 1)
    return indices


def _require(args: argparse.Namespace, dest: str, flag: str):
    value = getattr(args, dest)
    if value is None:
        raise ValueError(f"missing required flag {flag}")
    return value


def _write_rows_csv(path: str, rows: list[dict]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# Config merging


def _config_tokens(path: str) -> list[str]:
    tokens: list[str] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        key = key.strip().replace("_", "-")
        value = value.strip()
        if not key:
            raise ValueError(f"{path}:{lineno}: empty key")
        if value == "true":
            tokens.append(f"--{key}")
        elif value == "false":
            tokens.append(f"--no-{key}")
        else:
            tokens.extend([f"--{key}", value])
    return tokens


def _merge_config(argv: list[str]) -> list[str]:
    merged: list[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token == "--config":
            if i + 1 >= len(argv):
                raise ValueError("--config requires a file path")
            merged.extend(_config_tokens(argv[i + 1]))
            i += 2
        elif token.startswith("--config="):
            merged.extend(_config_tokens(token.partition("=")[2]))
            i += 1
        else:
            merged.append(token)
            i += 1
    return merged


# ---------------------------------------------------------------------------
# Subcommand handlers


def _cmd_gen(args: argparse.Namespace) -> int:
    model = parse_model_record(args.model)
    matrix = generate_matrix(model, args.n, args.N, args.seed)
    save_matrix(matrix, args.out)
    _emit(
        [
            ("wrote", args.out),
            ("n", matrix.n),
            ("N", matrix.N),
            ("master_seed", args.seed),
            ("generator_id", matrix.generator_id),
            ("model", model_record(model)),
        ]
    )
    return 0


def _cmd_spectrum(args: argparse.Namespace) -> int:
    matrix = load_matrix(args.matrix)
    pairs: list[tuple[str, object]] = [("matrix", args.matrix), ("stat", args.stat)]
    if args.stat == "ak":
        res = exact_Ak(matrix, _require(args, "k", "--k"))
        pairs += [("k", args.k), ("value", res.value), ("support", _support_str(res.support)), ("exact", res.exact)]
    elif args.stat == "bksq":
        res = exact_Bk_sq(matrix, _require(args, "k", "--k"))
        pairs += [("k", args.k), ("value", res.value), ("support", _support_str(res.support)), ("exact", res.exact)]
    elif args.stat == "deltam":
        res = exact_delta_m(matrix, _require(args, "m", "--m"), normalize=args.normalize)
        pairs += [
            ("m", args.m),
            ("normalize", args.normalize),
            ("value", res.value),
            ("support", _support_str(res.support)),
            ("rip_violated", res.rip_violated),
            ("exact", res.exact),
        ]
    elif args.stat == "qk":
        index_set = _parse_index_set(_require(args, "iset", "--iset"))
        res = exact_Qk(matrix, index_set, _require(args, "k", "--k"))
        pairs += [
            ("k", args.k),
            ("iset", _support_str(index_set)),
            ("value", res.value),
            ("support", _support_str(res.support)),
            ("exact", res.exact),
        ]
    elif args.stat == "m":
        pairs.append(("value", column_norm_max(matrix)))
    else:  # s
        pairs.append(("value", covariance_deviation_S(matrix)))
    if matrix.model is not None:
        pairs.append(("model", model_record(matrix.model)))
    if matrix.master_seed is not None:
        pairs.append(("master_seed", matrix.master_seed))
    pairs.append(("generator_id", matrix.generator_id))
    _emit(pairs)
    return 0


def _case1_params(args: argparse.Namespace) -> bounds_mod.Case1Params:
    return bounds_mod.Case1Params(
        p=_require(args, "p", "--p"),
        sigma=_require(args, "sigma", "--sigma"),
        lambda_par=_require(args, "lambda_par", "--lambda"),
        vartheta=args.vartheta,
        t=_require(args, "t", "--t"),
        k=_require(args, "k", "--k"),
        N=_require(args, "N", "--N"),
    )


def _case2_params(args: argparse.Namespace) -> bounds_mod.Case2Params:
    return bounds_mod.Case2Params(
        alpha=_require(args, "alpha", "--alpha"),
        lambda_par=_require(args, "lambda_par", "--lambda"),
        vartheta=args.vartheta,
        t=_require(args, "t", "--t"),
        k=_require(args, "k", "--k"),
        N=_require(args, "N", "--N"),
        c_abs=args.c_abs,
    )


def _cmd_bounds(args: argparse.Namespace) -> int:
    name = args.name
    out: list[tuple[str, object]]
    if name == "c1":
        out = [("value", bounds_mod.c1_sigma_lambda_p(
            _require(args, "sigma", "--sigma"), _require(args, "lambda_par", "--lambda"),
            _require(args, "p", "--p")))]
    elif name == "c2":
        out = [("value", bounds_mod.c2_sigma_lambda(
            _require(args, "sigma", "--sigma"), _require(args, "lambda_par", "--lambda")))]
    elif name == "c3":
        out = [("value", bounds_mod.c3_sigma_lambda_p(
            _require(args, "sigma", "--sigma"), _require(args, "lambda_par", "--lambda"),
            _require(args, "p", "--p")))]
    elif name == "c2bilinear":
        out = [("value", bounds_mod.c2_bilinear(
            _require(args, "sigma", "--sigma"), _require(args, "lambda_par", "--lambda"),
            _require(args, "p", "--p")))]
    elif name == "m1beta-poly":
        res = bounds_mod.m1_beta_case1(_case1_params(args))
        out = [("m1", res.m1), ("beta", res.beta)]
    elif name == "m1beta-exp":
        res = bounds_mod.m1_beta_case2(_case2_params(args))
        out = [("m1", res.m1), ("beta", res.beta)]
    elif name == "akbk":
        res = bounds_mod.ak_bk_upper(
            _require(args, "M", "--M"), _require(args, "M1", "--M1"),
            _require(args, "t", "--t"), _require(args, "beta", "--beta"),
            _require(args, "cphi", "--cphi"))
        out = [("a_bound", res.a_bound), ("bsq_bound", res.bsq_bound)]
    elif name == "qk-poly":
        res = bounds_mod.qk_bound_case1(
            _case1_params(args), _require(args, "M", "--M"), _require(args, "Ak", "--Ak"))
        out = [("bound", res.bound), ("prob_floor", res.prob_floor), ("prob_floor_raw", res.prob_floor_raw)]
    elif name == "qk-exp":
        res = bounds_mod.qk_bound_case2(
            _case2_params(args), _require(args, "M", "--M"), _require(args, "Ak", "--Ak"))
        out = [("bound", res.bound), ("prob_floor", res.prob_floor), ("prob_floor_raw", res.prob_floor_raw)]
    elif name == "sandwich":
        lower, upper = bounds_mod.rip_delta_sandwich(
            _require(args, "bmsq", "--bmsq"), _require(args, "coldev", "--coldev"),
            _require(args, "n", "--n"))
        out = [("lower", lower), ("upper", upper)]
    elif name == "klsdecomp":
        out = [("value", bounds_mod.kls_decomposition_bound(
            _require(args, "A", "--A"), _require(args, "Z", "--Z"),
            _require(args, "n", "--n"), _require(args, "cphi", "--cphi")))]
    elif name == "cphipoly":
        out = [("value", bounds_mod.kls_cphi_polynomial(
            _require(args, "p", "--p"), _require(args, "N", "--N"), args.vartheta))]
    elif name == "cphiexp":
        out = [("value", bounds_mod.kls_cphi_exponential(
            _require(args, "alpha", "--alpha"), _require(args, "N", "--N"), args.vartheta))]
    elif name == "klsc":
        out = [("value", bounds_mod.kls_c_p_eps(
            _require(args, "p", "--p"), _require(args, "eps", "--eps")))]
    elif name == "desym":
        out = [("value", bounds_mod.desymmetrization_threshold(
            _require(args, "q", "--q"), _require(args, "N", "--N")))]
    elif name == "orderstats":
        out = [("value", bounds_mod.order_stats_bound(
            _require(args, "q", "--q"), _require(args, "s", "--s"),
            _require(args, "k", "--k"), _require(args, "N", "--N")))]
    elif name == "lower-tp":
        out = [("value", bounds_mod.lower_threshold_trunc_pareto(
            _require(args, "p", "--p"), _require(args, "m", "--m"), _require(args, "N", "--N")))]
    elif name == "lower-pareto":
        out = [("value", bounds_mod.lower_threshold_pareto(
            _require(args, "q", "--q"), _require(args, "m", "--m"), _require(args, "N", "--N")))]
    elif name == "lower-weibull":
        out = [("value", bounds_mod.lower_threshold_weibull(
            _require(args, "alpha", "--alpha"), _require(args, "m", "--m"), _require(args, "N", "--N")))]
    elif name == "ripcap":
        out = [("value", bounds_mod.rip_sharpness_cap(
            _require(args, "t", "--t"), _require(args, "n", "--n")))]
    elif name == "bintail":
        out = [("value", bounds_mod.binomial_tail(
            _require(args, "N", "--N"), _require(args, "v", "--v"), _require(args, "m", "--m")))]
    elif name == "binmedian":
        out = [("value", bounds_mod.binomial_median_check(
            _require(args, "N", "--N"), _require(args, "v", "--v"), _require(args, "m", "--m")))]
    elif name == "gamma":
        out = [("value", gamma_function(_require(args, "x", "--x")))]
    elif name == "momentp":
        out = [("value", moment_p_truncated_pareto(
            _require(args, "p", "--p"), _require(args, "lambda_par", "--lambda")))]
    elif name == "invtail":
        out = [("value", inverse_tail_truncated_pareto(
            _require(args, "p", "--p"), _require(args, "lambda_par", "--lambda"),
            _require(args, "v", "--v")))]
    elif name == "secondmoment":
        out = [("value", second_moment(parse_model_record(_require(args, "model", "--model"))))]
    elif name == "rosenthal":
        coeffs = [float(tok) for tok in _require(args, "a", "--a").split(",") if tok.strip()]
        q = _require(args, "q", "--q")
        n2, nq = _require(args, "norm2", "--norm2"), _require(args, "normq", "--normq")
        low, high = rosenthal_bracket(q, coeffs, n2, nq, args.c_abs)
        out = [("mq", rosenthal_mq(q, coeffs, n2, nq)), ("low", low), ("high", high)]
    elif name == "ctail":
        out = [("value", concentration_tail_bound(
            _require(args, "p", "--p"), _require(args, "t", "--t"),
            _require(args, "moment_p", "--moment-p"),
            _require(args, "n", "--n"), _require(args, "N", "--N"), args.c_abs))]
    else:
        raise ValueError(f"unknown bound name {name!r}")
    _emit(out)
    return 0


def _cmd_rip(args: argparse.Namespace) -> int:
    params = bounds_mod.RipParams(
        regime=args.regime,
        theta=_require(args, "theta", "--theta"),
        n=_require(args, "n", "--n"),
        N=_require(args, "N", "--N"),
        eps=args.eps,
        p=args.p,
        alpha=args.alpha,
        vartheta=args.vartheta,
        c_abs=args.c_abs,
        C_abs=args.C_abs,
    )
    res = bounds_mod.rip_sparsity(params)
    _emit(
        [
            ("regime", args.regime),
            ("m", res.m),
            ("beta", res.beta),
            ("window_low", res.window_low),
            ("window_high", res.window_high),
            ("in_window", res.in_window),
        ]
    )
    return 0


def _cmd_kls(args: argparse.Namespace) -> int:
    variant = args.variant
    n = _require(args, "n", "--n")
    N = _require(args, "N", "--N")
    M = _require(args, "M", "--M")
    if variant == "mid":
        res = bounds_mod.kls_bound_mid_p(
            _require(args, "p", "--p"), _require(args, "eps", "--eps"), n, N, M, args.C_abs)
        out = [("bound", res.bound), ("prob_floor", res.prob_floor), ("prob_floor_raw", res.prob_floor_raw)]
    elif variant == "high":
        res = bounds_mod.kls_bound_high_p(_require(args, "p", "--p"), n, N, M, args.C_abs)
        out = [("bound", res.bound), ("p0", res.p0), ("p0_raw", res.p0_raw)]
    else:  # exp
        res = bounds_mod.kls_bound_exponential(_require(args, "alpha", "--alpha"), n, N, M, args.C_abs)
        out = [("bound", res.bound), ("p0", res.p0), ("p0_raw", res.p0_raw), ("in_window", res.in_window)]
    _emit(out)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    experiment = args.experiment
    rows: list[dict] = []
    if experiment == "lower":
        res = harness.verify_lower_bound(
            _require(args, "construction", "--construction"), _require(args, "shape", "--shape"),
            _require(args, "m", "--m"), _require(args, "n", "--n"), _require(args, "N", "--N"),
            args.trials, args.seed)
        pairs = [
            ("construction", args.construction),
            ("model", model_record(res.model)),
            ("threshold", res.threshold),
            ("frequency", res.frequency),
            ("freq_se", res.freq_se),
            ("trials", res.trials),
            ("master_seed", args.seed),
            ("generator_id", GENERATOR_ID),
        ]
        rows = [dict(_emit(pairs))]
    elif experiment == "orderstats":
        res = harness.verify_order_stats(
            _require(args, "q", "--q"), _require(args, "s", "--s"),
            _require(args, "k", "--k"), _require(args, "N", "--N"), args.trials, args.seed)
        pairs = [
            ("violations", res.violations),
            ("bound", res.bound),
            ("fail_allowance", res.fail_allowance),
            ("trials", res.trials),
            ("master_seed", args.seed),
            ("generator_id", GENERATOR_ID),
        ]
        rows = [dict(_emit(pairs))]
    elif experiment == "desym":
        zmodel = args.zmodel or "uniform01"
        if zmodel == "uniform01":
            zspec = harness.z_uniform01()
        else:
            zspec = harness.z_abs_pareto(_require(args, "q_tail", "--q-tail"))
        res = harness.verify_desymmetrization(
            zspec, _require(args, "q", "--q"), _require(args, "N", "--N"), args.trials, args.seed)
        pairs = [
            ("zmodel", zspec.record()),
            ("threshold", res.threshold),
            ("frequency", res.frequency),
            ("freq_se", res.freq_se),
            ("trials", res.trials),
            ("master_seed", args.seed),
            ("generator_id", GENERATOR_ID),
        ]
        rows = [dict(_emit(pairs))]
    elif experiment == "binmed":
        v_values = [float(tok) for tok in args.v_list.split(",") if tok.strip()]
        grid = []
        for N in range(args.N_min, args.N_max + 1):
            for v in v_values:
                for m in range(1, N + 1):
                    if bounds_mod.binomial_median_check(N, v, m):
                        grid.append((N, v, m))
        results = harness.verify_binomial_median(grid)
        exceptions = sum(1 for r in results if not r.ok)
        _emit([("points", len(results)), ("exceptions", exceptions)])
        rows = [
            {"N": r.N, "v": _fmt(r.v), "m": r.m, "applies": _fmt(r.applies),
             "tail": repr(r.tail), "ok": _fmt(r.ok)}
            for r in results
        ]
    elif experiment == "coupon":
        from .tailmodels import coupon_basis

        spec = harness.ExperimentSpec(
            statistic="s", n=_require(args, "n", "--n"), N=_require(args, "N", "--N"),
            trials=args.trials, master_seed=args.seed, model=coupon_basis(), threshold=1.0)
        summary = harness.run_experiment(spec)
        pairs = [
            ("threshold", summary.threshold),
            ("frequency", summary.frequency),
            ("freq_se", summary.freq_se),
            ("median", summary.median),
            ("trials", summary.spec.trials),
            ("spec", summary.spec.record()),
        ]
        rows = [dict(_emit(pairs))]
    else:  # klsscaling
        model = parse_model_record(_require(args, "model", "--model"))
        n_values = [int(tok) for tok in _require(args, "N_list", "--N-list").split(",") if tok.strip()]
        res = harness.kls_scaling_experiment(
            model, _require(args, "n", "--n"), n_values, args.trials, args.seed)
        pairs: list[tuple[str, object]] = [("model", model_record(model)), ("n", res.n)]
        for big_n, median in zip(res.N_values, res.medians):
            pairs.append((f"median_N{big_n}", median))
        pairs += [
            ("slope", res.slope),
            ("intercept", res.intercept),
            ("trials", args.trials),
            ("master_seed", args.seed),
            ("generator_id", GENERATOR_ID),
        ]
        _emit(pairs)
        rows = [
            {"model": model_record(model), "n": res.n, "N": big_n, "median_S": repr(median),
             "slope": repr(res.slope), "intercept": repr(res.intercept),
             "trials": args.trials, "master_seed": args.seed, "generator_id": GENERATOR_ID}
            for big_n, median in zip(res.N_values, res.medians)
        ]
    if args.csv:
        _write_rows_csv(args.csv, rows)
        print(f"wrote={args.csv}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    paths = report.run_report(
        args.out,
        suite=args.suite,
        master_seed=args.seed,
        lower_trials=args.lower_trials,
        kls_trials=args.kls_trials,
        coupon_trials=args.coupon_trials,
    )
    for path in paths:
        print(f"wrote={path}")
    return 0


# ---------------------------------------------------------------------------
# Parser


def _add_common_bound_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sigma", type=float)
    parser.add_argument("--lambda", dest="lambda_par", type=float)
    parser.add_argument("--p", type=float)
    parser.add_argument("--q", type=float)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--vartheta", type=float, default=1.0)
    parser.add_argument("--t", type=float)
    parser.add_argument("--k", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--n", type=int)
    parser.add_argument("--N", type=int)
    parser.add_argument("--eps", type=float)
    parser.add_argument("--theta", type=float)
    parser.add_argument("--c-abs", dest="c_abs", type=float, default=1.0)
    parser.add_argument("--C-abs", dest="C_abs", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailspec",
        description="Exact sparse spectral statistics, bound calculators and Monte Carlo "
        "experiments for heavy-tailed random matrices.",
        epilog="All subcommands accept --config FILE with key=value lines; command-line "
        "flags placed after --config override the file.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="draw a matrix from a column model and store it")
    p_gen.add_argument("--model", required=True, help='model record, e.g. "kind=pareto q=4.0"')
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--N", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=_cmd_gen)

    p_spec = sub.add_parser("spectrum", help="exact sparse statistics of a stored matrix")
    p_spec.add_argument("--matrix", required=True)
    p_spec.add_argument("--stat", required=True, choices=["ak", "bksq", "deltam", "qk", "m", "s"])
    p_spec.add_argument("--k", type=int)
    p_spec.add_argument("--m", type=int)
    p_spec.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=True)
    p_spec.add_argument("--iset", help="1-based column indices, e.g. 1,3")
    p_spec.set_defaults(func=_cmd_spectrum)

    p_bounds = sub.add_parser("bounds", help="closed-form bound calculators")
    p_bounds.add_argument(
        "--name",
        required=True,
        choices=[
            "c1", "c2", "c3", "c2bilinear", "m1beta-poly", "m1beta-exp", "akbk",
            "qk-poly", "qk-exp", "sandwich", "klsdecomp", "cphipoly", "cphiexp", "klsc",
            "desym", "orderstats", "lower-tp", "lower-pareto", "lower-weibull",
            "ripcap", "bintail", "binmedian", "gamma", "momentp", "invtail",
            "secondmoment", "rosenthal", "ctail",
        ],
    )
    _add_common_bound_flags(p_bounds)
    p_bounds.add_argument("--M", type=float)
    p_bounds.add_argument("--M1", type=float)
    p_bounds.add_argument("--Ak", type=float)
    p_bounds.add_argument("--beta", type=float)
    p_bounds.add_argument("--cphi", type=float)
    p_bounds.add_argument("--s", type=float)
    p_bounds.add_argument("--v", type=float)
    p_bounds.add_argument("--x", type=float)
    p_bounds.add_argument("--bmsq", type=float)
    p_bounds.add_argument("--coldev", type=float)
    p_bounds.add_argument("--A", type=float)
    p_bounds.add_argument("--Z", type=float)
    p_bounds.add_argument("--a", help="comma-separated coefficients")
    p_bounds.add_argument("--norm2", type=float)
    p_bounds.add_argument("--normq", type=float)
    p_bounds.add_argument("--moment-p", dest="moment_p", type=float)
    p_bounds.add_argument("--model", help="model record for secondmoment")
    p_bounds.set_defaults(func=_cmd_bounds)

    p_rip = sub.add_parser("rip", help="restricted-isometry sparsity from a target theta")
    p_rip.add_argument("--regime", required=True, choices=["polynomial", "exponential"])
    _add_common_bound_flags(p_rip)
    p_rip.set_defaults(func=_cmd_rip)

    p_kls = sub.add_parser("kls", help="covariance deviation bounds")
    p_kls.add_argument("--variant", required=True, choices=["mid", "high", "exp"])
    _add_common_bound_flags(p_kls)
    p_kls.add_argument("--M", type=float)
    p_kls.set_defaults(func=_cmd_kls)

    p_verify = sub.add_parser("verify", help="Monte Carlo experiments")
    p_verify.add_argument(
        "--experiment",
        required=True,
        choices=["lower", "orderstats", "desym", "binmed", "coupon", "klsscaling"],
    )
    p_verify.add_argument("--construction", choices=["trunc_pareto", "pareto", "weibull"])
    p_verify.add_argument("--shape", type=float)
    p_verify.add_argument("--m", type=int)
    p_verify.add_argument("--n", type=int)
    p_verify.add_argument("--N", type=int)
    p_verify.add_argument("--k", type=int)
    p_verify.add_argument("--q", type=float)
    p_verify.add_argument("--s", type=float)
    p_verify.add_argument("--trials", type=int, default=400)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--zmodel", choices=["uniform01", "abs_pareto"])
    p_verify.add_argument("--q-tail", dest="q_tail", type=float)
    p_verify.add_argument("--N-min", dest="N_min", type=int, default=5)
    p_verify.add_argument("--N-max", dest="N_max", type=int, default=50)
    p_verify.add_argument("--v-list", dest="v_list", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    p_verify.add_argument("--model", help="model record for klsscaling")
    p_verify.add_argument("--N-list", dest="N_list", help="comma-separated N grid for klsscaling")
    p_verify.add_argument("--csv", help="also write results to this CSV path")
    p_verify.set_defaults(func=_cmd_verify)

    p_report = sub.add_parser("report", help="write CSV + figure suites")
    p_report.add_argument("--out", required=True)
    p_report.add_argument("--suite", choices=["all", "lower", "kls", "coupon"], default="all")
    p_report.add_argument("--seed", type=int, default=20250819)
    p_report.add_argument("--lower-trials", dest="lower_trials", type=int, default=400)
    p_report.add_argument("--kls-trials", dest="kls_trials", type=int, default=50)
    p_report.add_argument("--coupon-trials", dest="coupon_trials", type=int, default=200)
    p_report.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        merged = _merge_config(list(argv))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(merged)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
