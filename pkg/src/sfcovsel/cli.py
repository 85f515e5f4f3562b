"""Command-line interface.

Subcommands::

    generate    write a ground-truth graph (JSON)
    simulate    sample a Gaussian model on a graph, write its covariance (CSV)
    solve       estimate a sparse precision matrix from a covariance
    evaluate    score a precision matrix against a graph
    sweep       ROC curve over a penalty grid
    experiment  multi-seed reconstruction comparison
    prox-bench  dual decomposition vs subgradient on one prox input

Exit status: 0 success, 1 usage or I/O error, 2 numerical failure.

Default tolerances can be overridden with the environment variables
``SFCOVSEL_RHO``, ``SFCOVSEL_EPS``, ``SFCOVSEL_MAX_ITER``, ``SFCOVSEL_ETA``,
``SFCOVSEL_SYM_TOL``, ``SFCOVSEL_ROUND_TOL`` and ``SFCOVSEL_MAX_OUTER``.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings

import numpy as np

from . import io
from .covsel import DEFAULT_EPS, DEFAULT_MAX_ITER, DEFAULT_RHO
from .estimators import make_estimator
from .evaluation import edge_errors, roc_sweep
from .exceptions import (ConvergenceError, InvalidParameterError,
                         NotPositiveDefiniteError, NotSymmetricError,
                         SfcovselError)
from .experiments import (DEFAULT_ALPHAS, SQRT_BETA, capture_prox_input,
                          default_methods, prox_benchmark,
                          reconstruction_experiment)
from .prox import ProxParams
from .regularizer import EdgeSet
from .synth import (build_precision, empirical_covariance, generate_ba,
                    generate_powerlaw_config, sample_gaussian)
from .weights import make_weights

logger = logging.getLogger("sfcovsel")

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env(name, default, cast=float):
    value = os.environ.get(f"SFCOVSEL_{name}")
    return default if value is None else cast(value)


def _key_values(items):
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise _UsageError(f"expected KEY=VALUE, got {item!r}")
        out[key] = float(value)
    return out


def _alpha_grid(args):
    if args.alphas:
        return [float(a) for a in args.alphas.split(",")]
    if args.alpha_min is None and args.alpha_max is None:
        return list(DEFAULT_ALPHAS)
    lo = args.alpha_min if args.alpha_min is not None else 1e-2
    hi = args.alpha_max if args.alpha_max is not None else 1.0
    return list(np.logspace(np.log10(lo), np.log10(hi), args.n_alphas))


def _estimator(args, alpha=None):
    common = dict(rho=args.rho, covariance="precomputed")
    if alpha is not None:
        common["alpha"] = alpha
    if args.method == "sf":
        params = _key_values(args.weight_param)
        if args.weights == "sqrt" and "beta" not in params:
            params["beta"] = SQRT_BETA
        return make_estimator(
            "sf", weights=args.weights, weight_params=params,
            eta=args.eta, sym_tol=args.sym_tol, round_tol=args.round_tol,
            max_outer=args.max_outer, tol=args.eps, max_iter=args.max_iter,
            **common)
    if args.method == "l1":
        return make_estimator("l1", tol=args.eps, max_iter=args.max_iter,
                              **common)
    return make_estimator("rw", beta=args.beta, epsilon=args.epsilon,
                          outer_iters=args.outer_iters,
                          tol=args.inner_eps, max_iter=args.inner_max_iter,
                          **common)


def cmd_generate(args):
    if args.model == "ba":
        g = generate_ba(args.nodes, args.m, args.seed)
    else:
        g = generate_powerlaw_config(args.nodes, args.exponent, args.seed)
    io.write_graph(args.out, g)
    logger.info("wrote %d-node graph with %d edges to %s", g.n,
                len(g.edges), args.out)
    return EXIT_OK


def cmd_simulate(args):
    g = io.read_graph(args.graph)
    P = build_precision(g, args.edge_weight, args.base)
    data = sample_gaussian(P, args.samples, args.seed)
    C = empirical_covariance(data, normalize=not args.no_normalize)
    io.write_matrix_csv(args.out, C)
    if args.precision_out:
        io.write_matrix_csv(args.precision_out, P)
    return EXIT_OK


def cmd_solve(args):
    C = io.read_matrix_csv(args.cov)
    est = _estimator(args, alpha=args.alpha)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        est.fit(C)
    res = est.result_
    io.write_matrix_csv(args.out, res.precision)
    meta = res.summary()
    meta.update(method=args.method, alpha=args.alpha,
                params={k: v for k, v in est.get_params().items()
                        if not hasattr(v, "get_params")})
    if args.method == "sf":
        meta["weights"] = est.weights_.to_dict()
    if args.method == "rw":
        meta["outer_objective"] = list(res.outer_trace)
    result_path = args.result or os.path.splitext(args.out)[0] + ".json"
    io.write_json(result_path, meta)
    if args.trace:
        io.write_trace_csv(args.trace, ["iteration", "primal", "dual"],
                           [(i + 1, r, s) for i, (r, s)
                            in enumerate(res.trace)])
    if not res.converged:
        logger.error("solver did not converge in %d iterations",
                     res.iterations)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_evaluate(args):
    P = io.read_matrix_csv(args.precision)
    g = io.read_graph(args.graph)
    m = edge_errors(EdgeSet.from_matrix(P, tol=args.tol), g)
    text = io.dump_json(m.to_dict())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sweep(args):
    C = io.read_matrix_csv(args.cov)
    g = io.read_graph(args.graph)
    curve = roc_sweep(C, g, _estimator(args), _alpha_grid(args),
                      n_jobs=args.jobs)
    with open(args.out, "w") as fh:
        fh.write(curve.to_csv())
    summary = {"auc": curve.auc, "method": args.method,
               "failures": [[a, m] for a, m in curve.failures]}
    io.write_json(args.summary or os.path.splitext(args.out)[0] + ".json",
                  summary)
    return EXIT_OK


def cmd_experiment(args):
    seeds = range(args.seed, args.seed + args.seeds)
    summary = reconstruction_experiment(
        args.model, seeds, _alpha_grid(args), default_methods(),
        out_dir=args.out_dir, n_jobs=args.jobs, n=args.nodes,
        samples=args.samples)
    for name, value in summary["mean_auc"].items():
        print(f"{name}: mean AUC {value:.6f}")
    return EXIT_OK


def cmd_prox_bench(args):
    if args.fixture:
        fixture = io.read_json(args.fixture)
    elif args.cov:
        C = io.read_matrix_csv(args.cov)
        params = _key_values(args.weight_param)
        if args.weights == "sqrt" and "beta" not in params:
            params["beta"] = SQRT_BETA
        w = make_weights(args.weights, params, C.shape[0] - 1)
        fixture = capture_prox_input(C, args.alpha, w, rho=args.rho)
        if args.capture:
            io.write_json(args.capture, fixture)
    else:
        raise _UsageError("prox-bench needs --fixture or --cov")
    params = ProxParams(shrink_scale=float(fixture["shrink_scale"]),
                        eta=args.eta, sym_tol=args.sym_tol,
                        round_tol=args.round_tol, max_outer=args.max_outer)
    res = prox_benchmark(fixture, params, subgrad_factor=args.subgrad_factor,
                         out_dir=args.out_dir)
    print(f"dual decomposition: {res['dd_iterations']} iterations, "
          f"objective {res['dd_objective']!r}")
    print(f"subgradient:        {res['sg_iterations']} iterations, "
          f"objective {res['sg_objective']!r}")
    return EXIT_OK


def _add_solver_args(p, alpha_required):
    p.add_argument("--method", choices=["sf", "l1", "rw"], default="sf")
    if alpha_required:
        p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--weights", default="sqrt",
                   choices=["log", "smoothed-log", "sqrt", "linear",
                            "geometric"])
    p.add_argument("--weight-param", action="append", metavar="KEY=VALUE",
                   help="weight family parameter, e.g. beta=0.5 (repeatable)")
    p.add_argument("--rho", type=float, default=_env("RHO", DEFAULT_RHO))
    p.add_argument("--eps", type=float, default=_env("EPS", DEFAULT_EPS))
    p.add_argument("--max-iter", type=int,
                   default=_env("MAX_ITER", DEFAULT_MAX_ITER, int))
    _add_prox_args(p)
    p.add_argument("--beta", type=float, default=0.0,
                   help="reweighted L1: diagonal penalty")
    p.add_argument("--epsilon", type=float, default=1.0,
                   help="reweighted L1: log offset")
    p.add_argument("--outer-iters", type=int, default=10)
    p.add_argument("--inner-eps", type=float, default=1e-8)
    p.add_argument("--inner-max-iter", type=int, default=20000)


def _add_prox_args(p):
    p.add_argument("--eta", type=float, default=_env("ETA", 0.9))
    p.add_argument("--sym-tol", type=float, default=_env("SYM_TOL", 1e-6))
    p.add_argument("--round-tol", type=float,
                   default=_env("ROUND_TOL", 1e-15))
    p.add_argument("--max-outer", type=int,
                   default=_env("MAX_OUTER", 10000, int))


def _add_grid_args(p):
    p.add_argument("--alphas", help="comma separated penalty values")
    p.add_argument("--alpha-min", type=float)
    p.add_argument("--alpha-max", type=float)
    p.add_argument("--n-alphas", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)


def build_parser():
    parser = _Parser(prog="sfcovsel", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("generate", help="generate a ground-truth graph")
    p.add_argument("--model", choices=["ba", "powerlaw"], required=True)
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--exponent", type=float, default=2.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("simulate", help="sample data, write covariance")
    p.add_argument("--graph", required=True)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--edge-weight", type=float, default=-0.2)
    p.add_argument("--base", type=float, default=0.5)
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("--precision-out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("solve", help="estimate a sparse precision matrix")
    p.add_argument("--cov", required=True)
    _add_solver_args(p, alpha_required=True)
    p.add_argument("--out", required=True, help="precision CSV")
    p.add_argument("--result", help="metadata JSON (default: OUT.json)")
    p.add_argument("--trace", help="per-iteration residual CSV")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("evaluate", help="score an estimate against a graph")
    p.add_argument("--precision", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--tol", type=float, default=0.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="ROC curve over a penalty grid")
    p.add_argument("--cov", required=True)
    p.add_argument("--graph", required=True)
    _add_solver_args(p, alpha_required=False)
    _add_grid_args(p)
    p.add_argument("--out", required=True, help="curve CSV")
    p.add_argument("--summary", help="AUC JSON (default: OUT.json)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("experiment",
                       help="L1 vs degree prior over many seeds")
    p.add_argument("--model", choices=["ba", "powerlaw"], required=True)
    p.add_argument("--seeds", type=int, default=30)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--nodes", type=int, default=60)
    p.add_argument("--samples", type=int, default=500)
    _add_grid_args(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("prox-bench",
                       help="compare prox solvers on one input")
    p.add_argument("--fixture", help="JSON prox input")
    p.add_argument("--cov", help="capture the input from a live solve")
    p.add_argument("--alpha", type=float, default=0.7)
    p.add_argument("--rho", type=float, default=_env("RHO", DEFAULT_RHO))
    p.add_argument("--weights", default="sqrt")
    p.add_argument("--weight-param", action="append", metavar="KEY=VALUE")
    p.add_argument("--capture", help="write the captured fixture here")
    _add_prox_args(p)
    p.add_argument("--subgrad-factor", type=int, default=10)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_prox_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose
                        else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ConvergenceError, NotPositiveDefiniteError,
            np.linalg.LinAlgError) as exc:
        logger.error("%s", exc)
        return EXIT_NUMERICAL
    except (InvalidParameterError, NotSymmetricError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except SfcovselError as exc:
        # degenerate covariances and other numerical dead ends
        logger.error("%s", exc)
        return EXIT_NUMERICAL
    except (_UsageError, OSError, ValueError, KeyError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
