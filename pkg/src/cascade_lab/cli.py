"""Command-line interface: ``cascade-lab {gain,metrics,design,simulate,stability,sweep}``.

Exit codes: 0 ok, 2 configuration error, 3 analytic-domain error,
4 numerical-run error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import design, metrics, sim, stability, xfer
from ._backend import BACKEND, available
from .config import fmt, load_cascade, load_input, load_perturbation
from .errors import CascadeError, ConfigError

PRECISION_ENV = "CASCADE_LAB_PRECISION"
DEFAULT_DT = 1e-3


def _emit_json(obj, out):
    out.write(json.dumps(obj) + "\n")


def _floats(text, what):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def _range(text, what):
    """``a:b`` (integers a..b), ``a:b:count`` (linspace) or a comma list."""
    if ":" not in text:
        return _floats(text, what)
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"{what}: bad range {text!r}") from None
    if len(nums) == 2:
        lo, hi = nums
        return [float(k) for k in range(math.ceil(lo), math.floor(hi) + 1)]
    if len(nums) == 3 and nums[2] >= 1:
        return np.linspace(nums[0], nums[1], int(nums[2])).tolist()
    raise ConfigError(f"{what}: bad range {text!r}")


# -- gain ---------------------------------------------------------------

def cmd_gain(args, out):
    c = load_cascade(args.config)
    k = xfer.hinf_norm(c)
    amp = xfer.amplifies(c)
    sweep = None
    if args.sweep:
        vals = _floats(args.sweep.replace(":", ","), "--sweep")
        if len(vals) != 2:
            raise ConfigError("--sweep expects OMEGA_MAX:COUNT")
        sweep = xfer.frequency_sweep(c, vals[0], int(vals[1]))
    if args.json:
        obj = {"K": fmt(k), "amplifies": amp}
        if sweep is not None:
            obj["sweep"] = [[fmt(w), fmt(m)] for w, m in sweep]
        _emit_json(obj, out)
        return 0
    out.write(f"K={k:.3f}, amplifies={'true' if amp else 'false'}\n")
    if sweep is not None:
        out.write("omega,magnitude\n")
        for w, m in sweep:
            out.write(f"{w:.9g},{m:.9g}\n")
    return 0


# -- metrics ------------------------------------------------------------

def cmd_metrics(args, out):
    c = load_cascade(args.config)
    r = load_input(args.input)
    if args.step is not None:
        tau_i, sigma_i = metrics.step_metrics(c, r, args.step)
        obj = {"step": args.step, "tau_i": fmt(tau_i), "sigma_i": fmt(sigma_i)}
    else:
        m = metrics.compute_metrics(c, r, args.norm)
        obj = {"K": fmt(m.gain), "tau": fmt(m.tau), "sigma": fmt(m.sigma),
               "amplitude": fmt(m.amplitude), "sigma0": fmt(m.sigma0), "norm": args.norm}
    if args.table:
        width = max(len(k) for k in obj)
        for key, val in obj.items():
            out.write(f"{key:<{width}}  {val}\n")
    else:
        _emit_json(obj, out)
    return 0


# -- design -------------------------------------------------------------

def _design_mode(args):
    if args.alpha is not None:
        return design.FixedAlpha(args.alpha)
    if args.alpha_product is not None:
        return design.FixedProduct(args.alpha_product)
    if args.alphas is not None:
        return design.FixedProduct(math.prod(_floats(args.alphas, "--alphas")))
    raise ConfigError("design needs --alpha, --alpha-product or --alphas")


def cmd_design(args, out):
    if args.table:
        if not args.gain_range:
            raise ConfigError("--table needs --gain-range")
        mode = _design_mode(args)
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["K", "M", "n_star", "beta_star"])
        for k, m, n, b in design.psi_table(_range(args.gain_range, "--gain-range"),
                                           args.leak, mode):
            writer.writerow([f"{k:.9g}", f"{m:.9g}", n, f"{b:.9g}"])
        return 0
    if args.gain is None:
        raise ConfigError("design needs --gain")
    if args.feedback is not None:
        if args.alphas is not None:
            alphas = _floats(args.alphas, "--alphas")
        elif args.alpha is not None and args.stages:
            alphas = [args.alpha] * args.stages
        else:
            raise ConfigError("--feedback needs --alphas, or --alpha with --stages")
        res = design.feedback_design(alphas, args.feedback, args.gain, args.leak)
        base = design.feedback_design(alphas, 0.0, args.gain, args.leak)
        extra = {"n_star_no_feedback": base.n_star,
                 "beta_at_stages": fmt(design.feedback_beta(alphas, args.feedback,
                                                            args.gain, args.leak)),
                 "beta_at_stages_no_feedback": fmt(design.feedback_beta(alphas, 0.0,
                                                                        args.gain, args.leak))}
    else:
        res = design.optimal_design(_design_mode(args), args.gain, args.leak)
        extra = {}
    obj = {"n_star": res.n_star, "beta_star": fmt(res.beta_star),
           "sigma0_star": fmt(res.sigma0_star), "M": fmt(res.m_value), "mode": res.mode}
    if res.feedback:
        obj["feedback"] = fmt(res.feedback)
    obj.update(extra)
    if args.oracle_trials:
        ap = (res.beta_star ** res.n_star) * args.gain * args.leak
        _, best = design.oracle_min_sigma0(res.n_star, ap, args.gain, args.leak,
                                           args.oracle_trials, seed=args.seed)
        obj["oracle_best_sigma0"] = fmt(best)
    _emit_json(obj, out)
    return 0


# -- simulate -----------------------------------------------------------

def default_dt(c):
    env = os.environ.get(PRECISION_ENV)
    dt = DEFAULT_DT
    if env:
        try:
            dt = float(env)
        except ValueError:
            raise ConfigError(f"{PRECISION_ENV} must be a number, got {env!r}") from None
    return min(dt, sim.max_step(c))


def _rel(a, b):
    return abs(a - b) / abs(b) if b else abs(a - b)


def cmd_simulate(args, out):
    c = load_cascade(args.config)
    r = load_input(args.input)
    dt = args.dt if args.dt is not None else default_dt(c)
    shift = 0.0
    if args.nonlinear:
        if not args.xtot:
            raise ConfigError("--nonlinear needs --xtot")
        traj = sim.simulate_nonlinear(c, _floats(args.xtot, "--xtot"), r, args.t_end, dt,
                                      backend=args.backend)
    elif args.delays:
        delays = _floats(args.delays, "--delays")
        traj = sim.simulate_delayed(c, delays, r, args.t_end, dt, backend=args.backend)
        shift = sum(delays)
    else:
        traj = sim.simulate_linear(c, r, args.t_end, dt, backend=args.backend)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "R"] + [f"X{i}" for i in range(1, c.n + 2)])
    for t, rv, row in zip(traj.times, traj.input, traj.states):
        writer.writerow([f"{t:.9g}", f"{rv:.9g}"] + [f"{v:.9g}" for v in row])
    if args.check:
        tau_hat, sigma_hat = sim.empirical_moments(traj)
        y_norm = sim.norm2_time(traj)
        tau = metrics.signaling_time(c, r) + shift
        sigma = metrics.signal_duration(c, r)
        y_freq = sim.freq_norm2(c, r)
        check = {"tau_hat": fmt(tau_hat), "tau": fmt(tau), "tau_rel_err": fmt(_rel(tau_hat, tau)),
                 "sigma_hat": fmt(sigma_hat), "sigma": fmt(sigma),
                 "sigma_rel_err": fmt(_rel(sigma_hat, sigma)),
                 "norm2_time": fmt(y_norm), "norm2_freq": fmt(y_freq),
                 "norm2_rel_err": fmt(_rel(y_norm, y_freq))}
        buf.write("# " + json.dumps({"check": check}) + "\n")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return 0


# -- stability ----------------------------------------------------------

def cmd_stability(args, out):
    c = load_cascade(args.config)
    pert = load_perturbation(args.perturbation) if args.perturbation else None
    a = stability.build_system_matrix(c, pert)
    ev = sorted(stability.eigenvalues(a), key=lambda z: (-z.real, z.imag))
    max_re = max(z.real for z in ev)
    obj = {"eigenvalues": [[fmt(z.real), fmt(z.imag)] for z in ev],
           "max_real": fmt(max_re), "stable": bool(max_re < 0)}
    if c.feedback > 0:
        obj["eps_max"] = fmt(stability.feedback_stability_bound(c))
    _emit_json(obj, out)
    return 0


# -- sweep --------------------------------------------------------------

_SWEEP_PARAMS = ("feedback", "leak")


def _sweep_row(c, r, param, value, norm):
    cv = c.replace(**{param: value})
    row = {param: value, "K": None, "tau": None, "sigma": None, "amplitude": None,
           "stable": stability.is_stable(cv)}
    try:
        m = metrics.compute_metrics(cv, r, norm)
    except CascadeError:
        return row
    row.update(K=m.gain, tau=m.tau, sigma=m.sigma, amplitude=m.amplitude)
    return row


def cmd_sweep(args, out):
    c = load_cascade(args.config)
    r = load_input(args.input)
    values = _range(args.values, "--values")
    jobs = max(1, args.jobs)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        rows = list(pool.map(lambda v: _sweep_row(c, r, args.param, v, args.norm), values))
    writer = csv.writer(out, lineterminator="\n")
    cols = [args.param, "K", "tau", "sigma", "amplitude", "stable"]
    writer.writerow(cols)
    for row in rows:
        writer.writerow(["" if row[k] is None else
                         (str(row[k]).lower() if isinstance(row[k], bool) else f"{row[k]:.9g}")
                         for k in cols])
    return 0


# -- entry point --------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="cascade-lab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({BACKEND} kernel)")
    sub = p.add_subparsers(dest="command", required=True)

    def with_config(sp):
        sp.add_argument("--config", "-c", required=True,
                        help="cascade JSON document or path to one")

    g = sub.add_parser("gain", help="internal gain and amplification verdict")
    with_config(g)
    g.add_argument("--sweep", metavar="OMEGA_MAX:COUNT", help="append |G(jw)| table")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_gain)

    m = sub.add_parser("metrics", help="signaling time, duration, amplitude")
    with_config(m)
    m.add_argument("--input", "-i", required=True, help="input JSON document or path")
    m.add_argument("--norm", choices=[metrics.EXACT, metrics.PAPER], default=metrics.EXACT)
    m.add_argument("--step", type=int, help="report tau_i, sigma_i of stage i")
    m.add_argument("--table", action="store_true", help="aligned text instead of JSON")
    m.set_defaults(func=cmd_metrics)

    d = sub.add_parser("design", help="optimal length and off-rates at fixed gain")
    d.add_argument("--gain", "-K", type=float)
    d.add_argument("--leak", type=float, default=1.0)
    d.add_argument("--alpha", type=float, help="common on-rate (fixed-alpha mode)")
    d.add_argument("--alpha-product", type=float, help="on-rate product (fixed-product mode)")
    d.add_argument("--alphas", help="comma-separated on-rates (feedback design)")
    d.add_argument("--stages", type=int, help="stage count used with --alpha and --feedback")
    d.add_argument("--feedback", type=float, help="feedback strength eps")
    d.add_argument("--table", action="store_true", help="tabulate n* over --gain-range")
    d.add_argument("--gain-range", help="a:b (integers) or a:b:count")
    d.add_argument("--oracle-trials", type=int, default=0,
                   help="also run the random-search sigma0 oracle")
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_design)

    s = sub.add_parser("simulate", help="time-domain trajectory as CSV")
    with_config(s)
    s.add_argument("--input", "-i", required=True)
    s.add_argument("--t-end", type=float, default=40.0)
    s.add_argument("--dt", type=float, help=f"step size (default {DEFAULT_DT} or ${PRECISION_ENV})")
    s.add_argument("--out", "-o", help="write CSV here instead of stdout")
    s.add_argument("--check", action="store_true",
                   help="append a JSON footer comparing empirical and analytic values")
    s.add_argument("--nonlinear", action="store_true")
    s.add_argument("--xtot", help="comma-separated total kinase concentrations")
    s.add_argument("--delays", help="comma-separated n+1 delays")
    s.add_argument("--backend", choices=available(), default=None)
    s.add_argument("--seed", type=int, default=0, help="accepted for uniformity; unused")
    s.set_defaults(func=cmd_simulate)

    st = sub.add_parser("stability", help="eigenvalues and stability verdict")
    with_config(st)
    st.add_argument("--perturbation", "-p", help="JSON file with [row, col, value] entries")
    st.set_defaults(func=cmd_stability)

    sw = sub.add_parser("sweep", help="metrics over a parameter grid, as CSV")
    with_config(sw)
    sw.add_argument("--input", "-i", required=True)
    sw.add_argument("--param", choices=_SWEEP_PARAMS, default="feedback")
    sw.add_argument("--values", required=True, help="a:b:count or comma list")
    sw.add_argument("--norm", choices=[metrics.EXACT, metrics.PAPER], default=metrics.EXACT)
    sw.add_argument("--jobs", type=int, default=1)
    sw.set_defaults(func=cmd_sweep)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CascadeError as exc:
        sys.stderr.write(f"cascade-lab: error: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
