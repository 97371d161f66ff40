"""Command-line front end: single transforms, CSV sweeps and self-tests.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import HumbertQError
from .specfun import EvalConfig, upper_gamma_reg

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variable not in ("sir_db", "z", "omega_db", "beta2"):
            raise HumbertQError(f"unknown sweep variable {self.variable!r}")
        if self.points < 2:
            raise HumbertQError(f"a sweep needs at least 2 points, got {self.points}")
        if not self.start < self.stop:
            raise HumbertQError(f"sweep start must be below stop, got {self.start} >= {self.stop}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def _writer(args):
    out = open(args.output, "w", newline="") if getattr(args, "output", None) else sys.stdout
    return out, csv.writer(out, lineterminator="\n")


def _map(fn, items, jobs: int):
    # executor.map keeps input order
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


# ---- laplace ---------------------------------------------------------------


def cmd_laplace(args) -> int:
    from .laplace import LaplaceParams, in_dispatch_result
    from .oracle import quad_in

    cfg = EvalConfig.from_env(paranoid=args.paranoid)
    prm = LaplaceParams(args.a2, args.b2, args.c, args.p, args.mu1, args.mu2)
    res = in_dispatch_result(prm, cfg)
    header = ["value", "path"]
    row = [fmt(res.value), res.path]
    status = EXIT_OK
    if res.check is not None:
        header += ["cross_check", "cross_rel_dev"]
        dev = abs(res.value - res.check) / max(abs(res.check), 1e-300)
        row += [fmt(res.check), fmt(dev)]
        status = EXIT_OK if dev <= 1e-8 else EXIT_FAIL
    if args.verify:
        oracle = quad_in(prm, cfg).value
        dev = abs(res.value - oracle) / max(abs(oracle), 1e-300)
        header += ["oracle", "rel_dev"]
        row += [fmt(oracle), fmt(dev)]
        if dev > 1e-6:
            status = EXIT_FAIL
    out, w = _writer(args)
    w.writerow(header)
    w.writerow(row)
    return status


# ---- outage ----------------------------------------------------------------


@dataclass(frozen=True)
class _OutageJob:
    kappa_s: float
    mu_s: float
    kappa_i: float
    mu_i: float
    z: float
    sir_db: float
    mc: int
    seed: int


def _outage_row(job: _OutageJob):
    from .fading import InterferenceScenario, KappaMuParams, outage_monte_carlo, outage_probability_result

    sc = InterferenceScenario(KappaMuParams(job.kappa_s, job.mu_s), KappaMuParams(job.kappa_i, job.mu_i))
    res = outage_probability_result(sc, job.sir_db, job.z, EvalConfig.from_env())
    row = [fmt(job.sir_db), fmt(res.value), res.method]
    if job.mc:
        est, err = outage_monte_carlo(sc, job.sir_db, job.z, job.mc, job.seed)
        row += [fmt(est), fmt(err)]
    return row


def cmd_outage(args) -> int:
    sweep = SweepSpec("sir_db", args.sir_start, args.sir_stop, args.points)
    jobs = [
        _OutageJob(args.kappa_s, args.mu_s, args.kappa_i, args.mu_i, args.z, float(s), args.monte_carlo, args.seed + i)
        for i, s in enumerate(sweep.values())
    ]
    # validate once up front so a bad scenario fails before any work
    _outage_row(_OutageJob(args.kappa_s, args.mu_s, args.kappa_i, args.mu_i, args.z, sweep.start, 0, 0))
    rows = _map(_outage_row, jobs, args.jobs)
    out, w = _writer(args)
    header = ["sir_db", "p_out", "method"]
    if args.monte_carlo:
        header += ["mc_estimate", "mc_stderr"]
    w.writerow(header)
    w.writerows(rows)
    return EXIT_OK


# ---- detection -------------------------------------------------------------


@dataclass(frozen=True)
class _DetectJob:
    u: float
    lam: float
    kappa: float
    mu: float
    omega_db: float


def _detect_row(job: _DetectJob):
    from .fading import DetectionParams, KappaMuParams, detection_probability_kappa_mu_result

    d = DetectionParams(job.u, job.lam, KappaMuParams(job.kappa, job.mu, 10.0 ** (job.omega_db / 10.0)))
    res = detection_probability_kappa_mu_result(d, EvalConfig.from_env())
    return [fmt(job.omega_db), fmt(res.value), res.method]


def cmd_detect(args) -> int:
    from .fading import threshold_from_pf

    sweep = SweepSpec("omega_db", args.omega_start, args.omega_stop, args.points)
    cfg = EvalConfig.from_env()
    lam = threshold_from_pf(args.u, args.pf, cfg)
    pf_check = upper_gamma_reg(args.u, 0.5 * lam, cfg)
    print(f"# lambda={fmt(lam)} pf_check={fmt(pf_check)}", file=sys.stderr)
    jobs = [_DetectJob(args.u, lam, args.kappa, args.mu, float(o)) for o in sweep.values()]
    _detect_row(jobs[0])
    rows = _map(_detect_row, jobs, args.jobs)
    out, w = _writer(args)
    w.writerow(["omega_db", "p_d", "method"])
    w.writerows(rows)
    return EXIT_OK


# ---- selftest --------------------------------------------------------------


def cmd_selftest(args) -> int:
    from .checks import SUITES

    names = list(SUITES) if args.suite == "all" else [args.suite]
    failed = 0
    t0 = time.perf_counter()
    for name in names:
        print(f"[{name}]")
        for fn in SUITES[name]:
            try:
                results = fn()
            except HumbertQError as exc:
                print(f"FAIL  {fn.__name__}: {exc}")
                failed += 1
                continue
            for r in results:
                print(r.line())
                failed += not r.passed
    print(f"{'all checks passed' if not failed else f'{failed} check(s) failed'} in {time.perf_counter() - t0:.1f}s")
    return EXIT_OK if not failed else EXIT_FAIL


# ---- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="humbertq", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("laplace", help="evaluate one transform In(alpha, beta, c, p, mu1, mu2)")
    p.add_argument("--a2", type=float, required=True, help="alpha^2 (negative for imaginary alpha)")
    p.add_argument("--b2", type=float, required=True, help="beta^2 (negative for imaginary beta)")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--mu1", type=float, required=True)
    p.add_argument("--mu2", type=float, required=True)
    p.add_argument("--verify", action="store_true", help="also integrate numerically and report the deviation")
    p.add_argument("--paranoid", action="store_true", help="cross-check the two closed-form routes when both apply")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_laplace)

    p = sub.add_parser("outage", help="outage probability sweep over SIR in dB")
    p.add_argument("--kappa-s", type=float, default=0.5)
    p.add_argument("--mu-s", type=float, default=2.0)
    p.add_argument("--kappa-i", type=float, default=0.5)
    p.add_argument("--mu-i", type=float, default=2.0)
    p.add_argument("--z", type=float, default=1.0, help="power-ratio threshold")
    p.add_argument("--sir-start", type=float, default=0.0)
    p.add_argument("--sir-stop", type=float, default=20.0)
    p.add_argument("--points", type=int, default=5)
    p.add_argument("--monte-carlo", type=int, default=0, metavar="N", help="append a simulation estimate from N trials")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_outage)

    p = sub.add_parser("detect", help="energy-detection probability sweep over mean SNR in dB")
    p.add_argument("--u", type=float, default=2.5, help="time-bandwidth product")
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--kappa", type=float, default=0.5)
    p.add_argument("--pf", type=float, default=0.1, help="false-alarm probability")
    p.add_argument("--omega-start", type=float, default=-10.0)
    p.add_argument("--omega-stop", type=float, default=20.0)
    p.add_argument("--points", type=int, default=7)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("selftest", help="run the verification suites")
    p.add_argument("suite", nargs="?", default="all", choices=["identities", "oracle", "montecarlo", "all"])
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HumbertQError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
