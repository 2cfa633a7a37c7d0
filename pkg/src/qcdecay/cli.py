"""Command-line interface: ``qcdecay <subcommand> ...``."""
import argparse
import csv
import json
import sys

import numpy as np

from . import beltrami, certify, circle_maps, halfplane_ext, schwarzian
from .errors import QcDecayError
from .families import list_families, parse_field, parse_lift, parse_map, solve_spec
from .grids import ScanGrid
from .harness import SUITES, SuiteConfig, Table, run_suite


def _writer(path):
    fh = open(path, "w", newline="") if path else sys.stdout
    return fh, csv.writer(fh)


def _close(fh):
    if fh is not sys.stdout:
        fh.close()


def _g(v):
    return f"{float(v):.12g}"


def cmd_families(args):
    print(json.dumps(list_families(), indent=2))
    return 0


def cmd_qsq(args):
    h = parse_lift(args.lift)
    fh, w = _writer(args.out)
    w.writerow(["x", "t", "m"])
    if args.x is not None and args.t is not None:
        w.writerow([_g(args.x), _g(args.t), _g(circle_maps.qsq(h, args.x, args.t))])
    else:
        grid = ScanGrid(n_x=args.n_x, n_t=args.n_t)
        m = circle_maps.qsq(h, grid.x[:, None], grid.t[None, :])
        for i, x in enumerate(grid.x):
            for j, t in enumerate(grid.t):
                w.writerow([_g(x), _g(t), _g(m[i, j])])
    _close(fh)
    if args.alpha is not None:
        qs = circle_maps.qs_constants(h, args.alpha)
        hc = circle_maps.holder_constants(h, args.alpha)
        summary = {
            "M": qs.M,
            "b_alpha": qs.b_alpha,
            "c_alpha": hc.c_alpha,
            "p_one_plus_alpha": hc.p_one_plus_alpha,
            "inf_deriv": hc.inf_deriv,
            "sup_deriv": hc.sup_deriv,
            "b_alpha_bound": circle_maps.b_alpha_bound(hc.c_alpha, args.alpha, hc.inf_deriv),
        }
        print(json.dumps(summary), file=sys.stderr)
    return 0


def cmd_extend_ba(args):
    E = halfplane_ext.BAExtension(parse_lift(args.lift), order=args.order)
    rng = np.random.default_rng(args.seed)
    z = rng.random(args.points) + 1j * np.exp(rng.uniform(np.log(args.y_min), np.log(args.y_max), args.points))
    mu = halfplane_ext.ba_dilatation(E, z)
    fh, w = _writer(args.out)
    w.writerow(["x", "y", "re_mu", "im_mu"])
    for zi, mi in zip(z, mu):
        w.writerow([_g(zi.real), _g(zi.imag), _g(mi.real), _g(mi.imag)])
    _close(fh)
    return 0


def cmd_norms(args):
    mu = parse_field(args.field)
    rep = beltrami.norms(mu, args.alpha)
    fh, w = _writer(args.out)
    w.writerow(["t", "kappa"])
    for t, k in rep.kappa_table:
        w.writerow([_g(t), _g(k)])
    _close(fh)
    summary = {"sup_norm_est": rep.sup_norm_est, "weighted_norm_est": rep.weighted_norm_est, "K_est": rep.K_est, "alpha": args.alpha}
    print(json.dumps(summary), file=sys.stderr)
    if args.plot:
        _plot(Table("kappa", ["t", "kappa"], [list(r) for r in rep.kappa_table], {"x": "t", "ys": ["kappa"], "logx": True, "logy": True}), args.plot)
    return 0


def _pair(text, kinds):
    parts = text.split(",")
    if len(parts) != len(kinds):
        raise argparse.ArgumentTypeError(f"expected {len(kinds)} comma-separated values, got {text!r}")
    return [k(p) for k, p in zip(kinds, parts)]


def cmd_phi(args):
    N, L = _pair(args.grid, (int, float))
    r, n = _pair(args.eval_circle, (float, int))
    sm = solve_spec({"type": "solver", "field": json.loads(args.field), "N": N, "L": L, "tol": args.tol})
    z = r * np.exp(2j * np.pi * np.arange(n) / n)
    S = schwarzian.schwarzian(sm.holomap(), z)
    w0 = schwarzian.hyperbolic_weights(z, 0.0)
    wa = schwarzian.hyperbolic_weights(z, args.alpha)
    fh, w = _writer(args.out)
    w.writerow(["re_z", "im_z", "re_S", "im_S", "rho_m2_abs_S", "rho_m2_alpha_abs_S"])
    for zi, si, a, b in zip(z, S, w0 * np.abs(S), wa * np.abs(S)):
        w.writerow([_g(zi.real), _g(zi.imag), _g(si.real), _g(si.imag), _g(a), _g(b)])
    _close(fh)
    print(json.dumps({"iterations": sm.iterations, "residual": sm.residual}), file=sys.stderr)
    return 0


def cmd_decay(args):
    fmap = parse_map(args.map)
    jmin = int(round(-np.log2(args.tmax)))
    jmax = int(round(-np.log2(args.tmin)))
    ts = 2.0 ** -np.arange(jmin, jmax + 1, dtype=float)
    rep = schwarzian.decay_scan(fmap, args.alpha, ts)
    fh, w = _writer(args.out)
    w.writerow(["t", "beta", "sigma"])
    for row in rep.table:
        w.writerow([_g(v) for v in row])
    _close(fh)
    summary = {"sup_norm": rep.sup_norm, "weighted_norm": rep.weighted_norm, "alpha": args.alpha, "clip": rep.clip}
    print(json.dumps(summary), file=sys.stderr)
    if args.plot:
        _plot(Table("decay", ["t", "beta", "sigma"], [list(r) for r in rep.table], {"x": "t", "ys": ["beta", "sigma"], "logx": True, "logy": True}), args.plot)
    return 0


def _plot(table, path):
    from .plotting import plot_table

    plot_table(table, path)


CERT_SUITES = ["koebe", "mori", "mori_alpha", "crossratio", "az_integral", "recurrence", "decomposition"]


def _cert_records(name):
    if name == "koebe":
        return certify.distortion_checks(schwarzian.koebe(), "koebe")
    if name in ("mori", "crossratio"):
        return certify.distortion_checks(beltrami.RadialMap(beltrami.RadialProfile(0.2)), name)
    if name == "mori_alpha":
        return certify.distortion_checks(beltrami.RadialMap(beltrami.RadialProfile(0.3, 0.5)), name)
    if name == "az_integral":
        return certify.distortion_checks(schwarzian.joukowski(0.2), name, field=beltrami.constant_field(0.2))
    if name == "recurrence":
        out = []
        for a in (0.3, 0.5, 0.7):
            lam = certify.choose_lambda(a)
            tr = certify.recurrence(a, lam)
            out.append(certify.CertBound("recurrence_diverges", {"alpha": a, "lambda": lam}, 1.0, float(tr.passed), "lower", 0.0))
        return out
    if name == "decomposition":
        mu = beltrami.constant_field(0.2)
        fmap = schwarzian.joukowski(0.2)
        out = []
        for z in certify.az_points():
            tau = abs(z) - 1.0
            radii = certify.theorem_partition(tau, 0.5) if tau < 1 else np.array([1.0, 0.0])
            bnd = float(certify.decomposition_bound(radii, certify.annulus_sups(mu, radii), z))
            T = float(abs(schwarzian.pre_schwarzian(fmap, np.array([z]))[0]))
            out.append(certify.CertBound("decomposition_bound", {"z": [z.real, z.imag]}, bnd, T))
        return out
    raise QcDecayError(f"unknown certificate suite {name!r}")


def cmd_certify(args):
    recs = _cert_records(args.suite)
    text = json.dumps([r.as_dict() for r in recs], indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all(r.passed for r in recs) else 1


def cmd_verify(args):
    if args.config:
        config = SuiteConfig.from_file(args.config)
        if args.suite:
            config.suite = args.suite
            config.__post_init__()
    else:
        config = SuiteConfig(suite=args.suite or "all")
    report = run_suite(config)
    if args.out:
        report.write(args.out, figures=not args.no_figures)
    for r in report.records:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}\t{r.suite}\t{r.name}\tmeasured={r.measured:.6g}\tbound={r.bound:.6g}\tmargin={r.margin:.3g}")
    n_fail = len(report.failures())
    print(f"overall: {'PASS' if report.overall_pass else 'FAIL'} ({len(report.records) - n_fail}/{len(report.records)} records)")
    return 0 if report.overall_pass else 1


def build_parser():
    p = argparse.ArgumentParser(prog="qcdecay", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("families", help="list built-in families")
    s.set_defaults(func=cmd_families)

    s = sub.add_parser("qsq", help="quasisymmetric quotients of a lift as CSV")
    s.add_argument("--lift", required=True, help='JSON, e.g. {"type":"trig","coeffs":[[1,0.1,0]]}')
    s.add_argument("--x", type=float)
    s.add_argument("--t", type=float)
    s.add_argument("--n-x", type=int, default=64)
    s.add_argument("--n-t", type=int, default=16)
    s.add_argument("--alpha", type=float, help="also print the one-dimensional constants (stderr)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_qsq)

    s = sub.add_parser("extend-ba", help="dilatation of the Beurling-Ahlfors extension at sample points")
    s.add_argument("--lift", required=True)
    s.add_argument("--points", type=int, default=1000)
    s.add_argument("--y-min", type=float, default=1e-3)
    s.add_argument("--y-max", type=float, default=0.5)
    s.add_argument("--order", type=int, default=32)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_extend_ba)

    s = sub.add_parser("norms", help="sup and weighted norms and kappa table of a field")
    s.add_argument("--field", required=True)
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--out")
    s.add_argument("--plot")
    s.set_defaults(func=cmd_norms)

    s = sub.add_parser("phi", help="Schwarzian of the solved map on a circle")
    s.add_argument("--field", required=True)
    s.add_argument("--grid", default="1024,2", help="N,L")
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--eval-circle", default="2,64", help="r,n")
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--out")
    s.set_defaults(func=cmd_phi)

    s = sub.add_parser("decay", help="beta/sigma decay table of a map")
    s.add_argument("--map", required=True, help='JSON, e.g. {"type":"joukowski","k":0.2}')
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--tmin", type=float, default=2.0 ** -10)
    s.add_argument("--tmax", type=float, default=0.5)
    s.add_argument("--out")
    s.add_argument("--plot")
    s.set_defaults(func=cmd_decay)

    s = sub.add_parser("certify", help="certified inequalities as JSON records")
    s.add_argument("--suite", required=True, choices=CERT_SUITES)
    s.add_argument("--out")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("verify", help="run a verification suite")
    s.add_argument("--suite", choices=SUITES)
    s.add_argument("--out", help="directory for report.json, CSV tables and PNG figures")
    s.add_argument("--config", help="SuiteConfig JSON file")
    s.add_argument("--no-figures", action="store_true")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (QcDecayError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
