"""Verification suites: run module operations end to end and record margins.

A suite run produces ordered check records, CSV tables and PNG figures.
Everything except the ``timestamp`` field of the JSON report is a
deterministic function of the configuration.
"""
import csv
import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import mpmath
import numpy as np

from . import beltrami, certify, circle_maps, halfplane_ext, schwarzian
from .errors import ConfigError, QcDecayError
from .families import parse_field, parse_lift, solve_spec
from .grids import ScanGrid

SUITE_ORDER = ["trivial", "one-dim", "chain-1-2", "chain-2-3", "certificates", "recurrence", "mori"]
SUITES = SUITE_ORDER + ["all"]

DEFAULT_TOL = {
    "exact": 1e-12,
    "closed_form": 1e-9,
    "roundtrip": 1e-10,
    "solver_f": 5e-3,
    "solver_S": 1e-2,
    "solver": 2e-2,
    "nehari": 1.55,
    "stability": 0.05,
    "slope": 0.1,
}

RADIAL = {"type": "radial", "ell": 0.3, "alpha": 0.5}
RADIAL_2 = {"type": "radial", "ell": 0.2, "alpha": 0.7}
CONSTANT = {"type": "constant", "k": 0.2}
AW = {"type": "aw", "c": 0.1, "n": 4}


@dataclass
class SuiteConfig:
    suite: str = "all"
    lifts: list = field(default_factory=lambda: [{"type": "trig", "a": a} for a in (0.05, 0.1, 0.2)])
    alphas: list = field(default_factory=lambda: [0.3, 0.5])
    grid: dict = field(default_factory=dict)
    solver: dict = field(default_factory=lambda: {"N": 1024, "L": 2.0, "tol": 1e-10})
    tolerances: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {SUITES}")
        for a in self.alphas:
            if not 0 < float(a) < 1:
                raise ConfigError(f"alpha must lie in (0, 1), got {a}")
        for spec in self.lifts:
            try:
                parse_lift(spec)
            except QcDecayError as exc:
                raise ConfigError(f"lift {spec!r}: {exc}") from exc
        unknown = set(self.tolerances) - set(DEFAULT_TOL)
        if unknown:
            raise ConfigError(f"unknown tolerance keys {sorted(unknown)}")
        try:
            ScanGrid(**self.grid)
        except TypeError as exc:
            raise ConfigError(f"bad grid parameters: {exc}") from exc

    @classmethod
    def from_dict(cls, d):
        known = {"suite", "lifts", "alphas", "grid", "solver", "tolerances", "seed"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        return cls(**d)

    @classmethod
    def from_file(cls, path):
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc

    def tol(self, key):
        return float(self.tolerances.get(key, DEFAULT_TOL[key]))

    def as_dict(self):
        return {
            "suite": self.suite,
            "lifts": self.lifts,
            "alphas": self.alphas,
            "grid": ScanGrid(**self.grid).describe(),
            "solver": self.solver,
            "tolerances": {**DEFAULT_TOL, **self.tolerances},
            "seed": self.seed,
        }


@dataclass
class Record:
    suite: str
    name: str
    inputs: dict
    measured: float
    bound: float
    sense: str
    tolerance: float
    provenance: dict

    @property
    def margin(self):
        return self.bound - self.measured if self.sense == "upper" else self.measured - self.bound

    @property
    def passed(self):
        return bool(np.isfinite(self.margin) and self.margin >= -self.tolerance)

    def as_dict(self):
        return {
            "suite": self.suite,
            "name": self.name,
            "inputs": self.inputs,
            "inputs_digest": _digest(self.inputs),
            "measured": self.measured,
            "bound": self.bound,
            "sense": self.sense,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "provenance": self.provenance,
        }


@dataclass
class Table:
    name: str
    header: list
    rows: list
    plot: dict = None


@dataclass
class SuiteReport:
    config: SuiteConfig
    records: list
    tables: dict
    runtime: float
    timestamp: str

    @property
    def overall_pass(self):
        return all(r.passed for r in self.records)

    def failures(self):
        return [r for r in self.records if not r.passed]

    def as_dict(self):
        return _clean(
            {
                "suite": self.config.suite,
                "config": self.config.as_dict(),
                "overall_pass": self.overall_pass,
                "n_records": len(self.records),
                "n_failed": len(self.failures()),
                "records": [r.as_dict() for r in self.records],
                "tables": sorted(self.tables),
                "timestamp": {"utc": self.timestamp, "runtime_s": round(self.runtime, 3)},
            }
        )

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    def write(self, out_dir, figures=True):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(self.to_json() + "\n")
        written = [out / "report.json"]
        for t in self.tables.values():
            path = out / f"{t.name}.csv"
            with path.open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(t.header)
                for row in t.rows:
                    w.writerow([_fmt(v) for v in row])
            written.append(path)
        if figures:
            from .plotting import plot_table

            for t in self.tables.values():
                if t.plot:
                    written.append(plot_table(t, out / f"{t.name}.png"))
        return written


def _digest(obj):
    return hashlib.sha256(json.dumps(_clean(obj), sort_keys=True).encode()).hexdigest()[:16]


def _round(x):
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.12g}")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return [_round(obj.real), _round(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


class _Run:
    """Mutable state of one suite execution."""

    def __init__(self, config):
        self.config = config
        self.grid = ScanGrid(**config.grid)
        self.records = []
        self.tables = {}
        self.solved = {}
        self.scans = {}
        self.suite = None

    # -- bookkeeping -------------------------------------------------------
    def add(self, name, measured, bound, tol, sense="upper", inputs=None, provenance=None):
        prov = {"grid": self.grid.describe()} if provenance is None else provenance
        self.records.append(
            Record(self.suite, name, _clean(inputs or {}), float(measured), float(bound), sense, float(tol), prov)
        )

    def table(self, name, header, rows, plot=None):
        self.tables[name] = Table(name, list(header), [list(r) for r in rows], plot)

    def solver_spec(self, field_spec):
        return {"type": "solver", "field": field_spec, **self.config.solver}

    def solve(self, field_spec):
        return solve_spec(self.solver_spec(field_spec), self.solved)

    def solver_prov(self, field_spec):
        return {"solver": self.solver_spec(field_spec)}

    def scan(self, key, fmap, alpha, ts, delta=None):
        k = (key, alpha, tuple(ts), delta)
        if k not in self.scans:
            self.scans[k] = schwarzian.decay_scan(fmap, alpha, ts, delta=delta)
        return self.scans[k]


# -- suites -------------------------------------------------------------------


def _suite_trivial(run):
    tol = run.config.tol("exact")
    h = circle_maps.identity()
    for alpha in run.config.alphas:
        qs = circle_maps.qs_constants(h, alpha, run.grid)
        hc = circle_maps.holder_constants(h, alpha, run.grid)
        inp = {"lift": h.describe(), "alpha": alpha}
        run.add("identity_M_minus_1", qs.M - 1.0, 0.0, tol, inputs=inp)
        run.add("identity_b_alpha", qs.b_alpha, 0.0, tol, inputs=inp)
        run.add("identity_c_alpha", hc.c_alpha, 0.0, tol, inputs=inp)
        run.add("identity_p", hc.p_one_plus_alpha, 0.0, tol, inputs=inp)
    rng = np.random.default_rng(run.config.seed)
    z = rng.random(1000) + 1j * np.exp(rng.uniform(np.log(1e-3), np.log(0.5), 1000))
    E = halfplane_ext.BAExtension(h)
    run.add("identity_ba_dilatation", np.abs(halfplane_ext.ba_dilatation(E, z)).max(), 0.0, tol, inputs={"n": 1000})
    run.add("identity_ba_value", np.abs(halfplane_ext.ba_value(E, z) - z).max(), 0.0, tol, inputs={"n": 1000})
    rep = beltrami.norms(beltrami.zero_field(), 0.5, run.grid)
    run.add("zero_field_sup", rep.sup_norm_est, 0.0, tol, inputs={"field": "zero"})
    run.add("zero_field_K_minus_1", rep.K_est - 1.0, 0.0, tol, inputs={"field": "zero"})
    spec = {"type": "zero"}
    sm = run.solve(spec)
    run.add("zero_field_solver_residual", sm.residual, 0.0, tol, inputs={"field": spec}, provenance=run.solver_prov(spec))
    zc = 2.0 * np.exp(2j * np.pi * np.arange(64) / 64)
    S = schwarzian.schwarzian(sm.holomap(), zc)
    run.add("zero_field_schwarzian", np.abs(S).max(), 0.0, tol, inputs={"field": spec, "radius": 2.0})
    rep = schwarzian.decay_scan(schwarzian.identity_map(), 0.5, run.grid.dyadic)
    t, b, s = rep.columns()
    run.add("identity_map_beta_sigma", max(b.max(), s.max()), 0.0, tol, inputs={"map": "identity"})


def _lift_label(spec):
    return json.dumps(spec, sort_keys=True)


def _suite_one_dim(run):
    ctol = run.config.tol("closed_form")
    rows = []
    for spec in run.config.lifts:
        h = parse_lift(spec)
        for alpha in run.config.alphas:
            inp = {"lift": spec, "alpha": alpha}
            qs = circle_maps.qs_constants(h, alpha, run.grid)
            hc = circle_maps.holder_constants(h, alpha, run.grid)
            lo, hi = circle_maps.derivative_bounds(hc.c_alpha, alpha)
            run.add("deriv_lower_bound", hc.inf_deriv, lo, ctol, "lower", inp)
            run.add("deriv_upper_bound", hc.sup_deriv, hi, ctol, "upper", inp)
            bb = circle_maps.b_alpha_bound(hc.c_alpha, alpha, hc.inf_deriv)
            run.add("b_alpha_vs_c_alpha", qs.b_alpha, bb, ctol, "upper", inp)
            run.add("M_vs_b_alpha", qs.M, 1.0 + qs.b_alpha, run.config.tol("exact"), "upper", inp)
            run.add("p_ge_c_alpha", hc.p_one_plus_alpha, hc.c_alpha, run.config.tol("exact"), "lower", inp)
            mods = np.array([v for _, v in hc.modulus_table])
            run.add("modulus_nondecreasing", max(0.0, -np.diff(mods).min()), 0.0, 0.0, "upper", inp)
            rows.append([_lift_label(spec), alpha, qs.M, qs.b_alpha, hc.c_alpha, hc.p_one_plus_alpha, hc.inf_deriv, hc.sup_deriv, bb])
        if spec.get("type") == "trig" and "a" in spec:
            a = float(spec["a"])
            hc = circle_maps.holder_constants(h, run.config.alphas[0], run.grid)
            run.add("exact_sup_deriv", abs(hc.sup_deriv - (1 + a)), 0.0, run.config.tol("exact"), inputs={"lift": spec})
            run.add("exact_inf_deriv", abs(hc.inf_deriv - (1 - a)), 0.0, run.config.tol("exact"), inputs={"lift": spec})
        xs = np.arange(4096) / 4096
        hi_ = circle_maps.invert(h)
        run.add("invert_roundtrip", np.abs(h(hi_(xs)) - xs).max(), 0.0, run.config.tol("roundtrip"), inputs={"lift": spec})
        run.add(
            "compose_inverse_identity",
            np.abs(circle_maps.compose(hi_, h)(xs) - xs).max(),
            0.0,
            run.config.tol("roundtrip"),
            inputs={"lift": spec},
        )
        run.add("period", np.abs(h(xs + 1) - h(xs) - 1).max(), 0.0, run.config.tol("exact"), inputs={"lift": spec})
    run.table(
        "one_dim_constants",
        ["lift", "alpha", "M", "b_alpha", "c_alpha", "p", "inf_deriv", "sup_deriv", "b_alpha_bound"],
        rows,
    )
    # rotations are isometric
    rot = circle_maps.rotation(0.25)
    qs = circle_maps.qs_constants(rot, 0.5, run.grid)
    run.add("rotation_M_minus_1", qs.M - 1.0, 0.0, run.config.tol("exact"), inputs={"lift": rot.describe()})
    _p_sequences(run)


def _p_sequences(run):
    """p of g_n o g_n and of g_n^{-1} for a_n = 0.1/2^n tends to 0 monotonically."""
    alpha = 0.5
    rows = []
    pc, pi = [], []
    for n in range(11):
        a = 0.1 / 2 ** n
        g = circle_maps.trig_family(a)
        comp = circle_maps.compose(g, g)
        inv = circle_maps.invert(g)
        p1 = circle_maps.holder_constants(comp, alpha, run.grid).p_one_plus_alpha
        p2 = circle_maps.holder_constants(inv, alpha, run.grid).p_one_plus_alpha
        pc.append(p1)
        pi.append(p2)
        rows.append([n, a, p1, p2])
    run.table(
        "p_sequences",
        ["n", "a_n", "p_compose", "p_inverse"],
        rows,
        {"x": "a_n", "ys": ["p_compose", "p_inverse"], "logx": True, "logy": True, "title": "p(1+alpha) along a_n -> 0"},
    )
    for name, seq in (("p_compose_monotone", pc), ("p_inverse_monotone", pi)):
        inc = int((np.diff(seq) > 0).sum())
        run.add(name, inc, 0, 0.0, inputs={"a_n": "0.1/2^n, n<=10", "alpha": alpha})
        run.add(name.replace("monotone", "vanishes"), seq[-1], 0.01 * seq[0], 0.0, inputs={"alpha": alpha})


def _suite_chain_1_2(run):
    ctol = run.config.tol("closed_form")
    etol = run.config.tol("exact")
    rng = np.random.default_rng(run.config.seed)
    carleson_rows = []
    for spec in run.config.lifts:
        h = parse_lift(spec)
        E = halfplane_ext.BAExtension(h)

        def gauge_fn(y, h=h):
            return circle_maps.gauge(h, y)[1]

        z, mu, bound = halfplane_ext.carleson_scan(E, gauge_fn, 1000, seed=run.config.seed)
        viol = int((mu > bound + ctol).sum())
        inp = {"lift": spec, "n_points": 1000, "y_max": 0.5, "seed": run.config.seed}
        run.add("carleson_violations", viol, 0, 0.0, inputs=inp)
        run.add("carleson_worst_margin", float((mu - bound).max()), 0.0, ctol, inputs=inp)
        order = np.argsort(z.imag)
        for i in order[:: max(1, len(order) // 200)]:
            carleson_rows.append([_lift_label(spec), z[i].real, z[i].imag, mu[i], bound[i]])
        w = rng.random(200) + 1j * np.exp(rng.uniform(np.log(1e-3), np.log(0.5), 200))
        m1 = halfplane_ext.ba_dilatation(E, w)
        run.add("ba_period_invariance", np.abs(halfplane_ext.ba_dilatation(E, w + 1) - m1).max(), 0.0, etol, inputs=inp)
        field = halfplane_ext.project_to_disk(E)
        zeta = np.exp(2j * np.pi * w)
        run.add("projection_modulus", np.abs(np.abs(field(zeta)) - np.abs(m1)).max(), 0.0, etol, inputs=inp)
        run.add("ba_image_upper", -float(halfplane_ext.ba_value(E, w).imag.min()), 0.0, 0.0, inputs=inp)
    run.table(
        "carleson",
        ["lift", "x", "y", "abs_mu_F", "four_gauge"],
        carleson_rows,
        {"x": "y", "ys": ["abs_mu_F", "four_gauge"], "group": "lift", "logx": True, "logy": True, "style": ".", "title": "|mu_F| against 4 eps(y)"},
    )
    # affine lifts have zero dilatation
    E = halfplane_ext.BAExtension(circle_maps.rotation(0.25))
    w = rng.random(1000) + 1j * np.exp(rng.uniform(np.log(1e-3), np.log(0.5), 1000))
    run.add("affine_zero_dilatation", np.abs(halfplane_ext.ba_dilatation(E, w)).max(), 0.0, etol, inputs={"lift": "rotation 0.25"})
    _kappa_decay(run)


def _kappa_decay(run):
    spec = {"type": "trig", "a": 0.1}
    field = halfplane_ext.project_to_disk(halfplane_ext.BAExtension(parse_lift(spec)))
    fine = run.grid.refined(2)
    rows = []
    for alpha in run.config.alphas:
        rep = beltrami.norms(field, alpha, run.grid)
        rep2 = beltrami.norms(field, alpha, fine)
        t, k = rep.kappa()
        _, k2 = rep2.kappa()
        sel = (t >= 2.0 ** -8) & (t <= 2.0 ** -2)
        slope = beltrami.loglog_slope(t[sel], k[sel])
        inp = {"field": {"type": "ba", "family": spec}, "alpha": alpha, "t_range": [2.0 ** -8, 2.0 ** -2]}
        run.add("kappa_slope", slope, alpha - run.config.tol("slope"), 0.0, "lower", inp)
        q1 = (k / t ** alpha).max()
        q2 = (k2 / t ** alpha).max()
        run.add("kappa_ratio_stability", abs(q2 - q1) / q1, run.config.tol("stability"), 0.0, inputs=inp)
        run.add("kappa_nondecreasing", max(0.0, -np.diff(k).min()), 0.0, 0.0, inputs=inp)
        run.add("ba_field_weighted_norm_finite", rep.weighted_norm_est, 1e6, 0.0, inputs=inp)
        for ti, ki in zip(t, k):
            rows.append([alpha, ti, ki, ki / ti ** alpha])
    run.table(
        "kappa_ba",
        ["alpha", "t", "kappa", "kappa_over_t_alpha"],
        rows,
        {"x": "t", "ys": ["kappa", "kappa_over_t_alpha"], "group": "alpha", "logx": True, "logy": True, "style": "o", "title": "kappa of the BA field"},
    )


def _nehari(run, label, rep, inputs):
    run.add("nehari", rep.sup_norm, run.config.tol("nehari"), 0.0, inputs={"map": label, **inputs})


def _suite_chain_2_3(run):
    stol = run.config.tol("solver")
    ts = run.grid.dyadic
    # constant-k oracle
    sm = run.solve(CONSTANT)
    prov = run.solver_prov(CONSTANT)
    z = 2.0 * np.exp(2j * np.pi * np.arange(64) / 64)
    b0 = _measured_b0(sm)
    err = np.abs(sm(z) - (z + 0.2 / z) - b0).max()
    run.add("constant_k_map", err, run.config.tol("solver_f"), 0.0, inputs={"field": CONSTANT, "radius": 2, "n": 64}, provenance=prov)
    S2 = complex(schwarzian.schwarzian(sm.holomap(), np.array([2.0 + 0j]))[0])
    S2_exact = complex(schwarzian.schwarzian(schwarzian.joukowski(0.2), np.array([2.0 + 0j]))[0])
    run.add("constant_k_schwarzian_at_2", abs(S2 - S2_exact), run.config.tol("solver_S"), 0.0, inputs={"field": CONSTANT, "exact": S2_exact}, provenance=prov)
    for spec in (CONSTANT, RADIAL, AW):
        s = run.solve(spec)
        p = run.solver_prov(spec)
        run.add("solver_residual", s.residual, s.tol, 0.0, inputs={"field": spec}, provenance=p)
        inc = int((np.diff(s.history) > 0).sum()) if len(s.history) > 1 else 0
        run.add("neumann_monotone", inc, 0, 0.0, inputs={"field": spec, "iterations": s.iterations}, provenance=p)
        C10, C20 = (np.abs(s(R * np.exp(2j * np.pi * np.arange(64) / 64)) - R * np.exp(2j * np.pi * np.arange(64) / 64) - _measured_b0(s)).max() * R for R in (10.0, 20.0))
        run.add("laurent_decay", C20, C10 * 1.05 + 1e-12, 0.0, inputs={"field": spec, "C_10": C10}, provenance=p)
    # radial field: identity on the exterior disk
    sr = run.solve(RADIAL)
    prov = run.solver_prov(RADIAL)
    zz = _annulus(1.2, 3.0, 64, 128)
    Sr = schwarzian.schwarzian(sr.holomap(), zz)
    hyp = (schwarzian.hyperbolic_weights(zz) * np.abs(Sr)).max()
    run.add("radial_kernel_hyperbolic_S", hyp, stol, 0.0, inputs={"field": RADIAL, "annulus": [1.2, 3.0]}, provenance=prov)
    b0 = _measured_b0(sr)
    run.add("radial_identity_map", np.abs(sr(zz) - zz - b0).max(), run.config.tol("solver_f"), 0.0, inputs={"field": RADIAL}, provenance=prov)
    run.add("radial_b0", abs(b0), run.config.tol("solver_f"), 0.0, inputs={"field": RADIAL}, provenance=prov)
    decay_rows = []
    for spec in (RADIAL, RADIAL_2, CONSTANT, AW):
        s = run.solve(spec)
        rep = run.scan(json.dumps(spec, sort_keys=True), s.holomap(), 0.5, tuple(ts))
        inp = {"field": spec, "clip": rep.clip}
        _nehari(run, "solver", rep, inp)
        t, b, sg = rep.columns()
        if spec["type"] == "radial":
            run.add("radial_beta_sigma", max(b.max(), sg.max()), stol, 0.0, inputs=inp, provenance=run.solver_prov(spec))
        for row in rep.table:
            decay_rows.append([json.dumps(spec, sort_keys=True), *row])
    run.table(
        "decay_solver",
        ["field", "t", "beta", "sigma"],
        decay_rows,
        {"x": "t", "ys": ["beta", "sigma"], "group": "field", "logx": True, "logy": True, "title": "solver maps: beta and sigma"},
    )
    # fibre equivalence: two radial profiles with the same boundary action
    h1, h2 = run.solve(RADIAL).holomap(), run.solve(RADIAL_2).holomap()
    zz = _annulus(h1.min_abs, 11.0, 96, 256, geometric=True)
    d = (schwarzian.hyperbolic_weights(zz) * np.abs(schwarzian.schwarzian(h1, zz) - schwarzian.schwarzian(h2, zz))).max()
    run.add("fibre_equivalence", d, stol, 0.0, inputs={"fields": [RADIAL, RADIAL_2]}, provenance=run.solver_prov(RADIAL))
    # Ahlfors-Weill round trip
    sa = run.solve(AW)
    phi = schwarzian.power_differential(AW["c"], AW["n"])
    S = schwarzian.schwarzian(sa.holomap(), z)
    run.add("aw_roundtrip", np.abs(S - phi(z)).max(), stol, 0.0, inputs={"field": AW, "radius": 2, "n": 64}, provenance=run.solver_prov(AW))
    mu_aw = parse_field(AW)
    for alpha in run.config.alphas:
        lhs, rhs = schwarzian.aw_bound_chain(phi, mu_aw, alpha)
        run.add("aw_bound_chain", lhs, rhs, run.config.tol("closed_form"), inputs={"phi": AW, "alpha": alpha})
    _continuity(run)
    _closed_form_slopes(run)


def _continuity(run):
    """||Phi(mu_t)||_{inf,alpha} / ||mu_t||_{inf,alpha} for mu_t = t (1-|z|)^0.5."""
    alpha = 0.5
    ratios = []
    rows = []
    for t in (0.1, 0.2, 0.3):
        spec = {"type": "power", "ell": t, "alpha": 0.5}
        s = run.solve(spec)
        rep = run.scan(json.dumps(spec, sort_keys=True), s.holomap(), alpha, tuple(run.grid.dyadic))
        _nehari(run, "solver", rep, {"field": spec, "clip": rep.clip})
        nm = beltrami.norms(parse_field(spec), alpha, run.grid)
        ratios.append(rep.weighted_norm / nm.weighted_norm_est)
        rows.append([t, rep.weighted_norm, nm.weighted_norm_est, ratios[-1]])
    spread = (max(ratios) - min(ratios)) / min(ratios)
    run.add("continuity_constant_stability", spread, run.config.tol("stability"), 0.0, inputs={"t": [0.1, 0.2, 0.3], "alpha": alpha, "C_est": ratios})
    run.table("continuity", ["t", "phi_weighted_norm", "mu_weighted_norm", "C_est"], rows, {"x": "t", "ys": ["C_est"], "title": "continuity constant"})


def _closed_form_slopes(run):
    ts = 2.0 ** -np.arange(1, 7, dtype=float)
    rows = []
    for label, fmap in (("joukowski 0.2", schwarzian.joukowski(0.2)), ("cot 0.1", schwarzian.cot_map(0.1))):
        rep = schwarzian.decay_scan(fmap, 0.5, ts)
        t, b, s = rep.columns()
        sb, ss = beltrami.loglog_slope(t, b), beltrami.loglog_slope(t, s)
        run.add("sigma_slope_vs_beta_slope", ss, sb - run.config.tol("slope"), 0.0, "lower", {"map": label, "beta_slope": sb})
        _nehari(run, label, rep, {"clip": rep.clip})
        for row in rep.table:
            rows.append([label, *row])
    # the radial field's conformal part is the identity: beta and sigma vanish
    rep = schwarzian.decay_scan(schwarzian.identity_map(), 0.5, ts)
    t, b, s = rep.columns()
    run.add("radial_closed_form_beta_sigma", max(b.max(), s.max()), 0.0, run.config.tol("exact"), inputs={"map": "identity (radial)"})
    run.table(
        "decay_closed_form",
        ["map", "t", "beta", "sigma"],
        rows,
        {"x": "t", "ys": ["beta", "sigma"], "group": "map", "logx": True, "logy": True, "title": "closed-form maps: beta and sigma"},
    )


def _measured_b0(sm, radius=20.0, n=256):
    z = radius * np.exp(2j * np.pi * np.arange(n) / n)
    return complex(np.mean(sm(z) - z))


def _annulus(r0, r1, n_r, n_theta, geometric=False):
    r = 1.0 + np.geomspace(r0 - 1.0, r1 - 1.0, n_r) if geometric else np.linspace(r0, r1, n_r)
    th = 2.0 * np.pi * np.arange(n_theta) / n_theta
    return (r[:, None] * np.exp(1j * th)[None, :]).ravel()


def _suite_certificates(run):
    ctol = run.config.tol("closed_form")
    ts = run.grid.dyadic
    rows = []
    fields = [("solver", RADIAL), ("solver", {"type": "power", "ell": 0.2, "alpha": 0.5}), ("solver", AW), ("closed", CONSTANT)]
    for alpha in run.config.alphas:
        for how, spec in fields:
            mu = parse_field(spec)
            ell = beltrami.norms(mu, alpha, run.grid).weighted_norm_est
            if how == "solver":
                fmap = run.solve(spec).holomap()
                tol = run.config.tol("solver")
            else:
                fmap = schwarzian.joukowski(spec["k"])
                tol = ctol
            rep = run.scan(json.dumps(spec, sort_keys=True) + how, fmap, alpha, tuple(ts))
            _nehari(run, how, rep, {"field": spec, "clip": rep.clip})
            t, b, _ = rep.columns()
            bound = certify.theorem_decay_bound(ell, alpha, t)
            worst = float((b / bound).max())
            run.add("theorem_decay_bound_ratio", worst, 1.0, 0.0, inputs={"field": spec, "alpha": alpha, "ell": ell, "map": how})
            for ti, bi, Bi in zip(t, b, bound):
                rows.append([json.dumps(spec, sort_keys=True), alpha, ti, bi, Bi])
    run.table("theorem_decay", ["field", "alpha", "t", "beta", "bound"], rows)
    # annular decomposition against the closed-form pre-Schwarzian of z + 0.2/z
    mu = parse_field(CONSTANT)
    fmap = schwarzian.joukowski(0.2)
    drows = []
    for zeta in certify.az_points():
        tau = abs(zeta) - 1.0
        radii = certify.theorem_partition(tau, 0.5) if tau < 1 else np.array([1.0, 0.0])
        k = certify.annulus_sups(mu, radii)
        bnd = float(certify.decomposition_bound(radii, k, zeta))
        T = float(abs(schwarzian.pre_schwarzian(fmap, np.array([zeta]))[0]))
        run.add("decomposition_bound", T, bnd, ctol, inputs={"z": zeta, "radii": radii, "k": k})
        drows.append([zeta.real, zeta.imag, T, bnd])
    run.table("decomposition", ["re_z", "im_z", "abs_T", "bound"], drows)
    # integral representation at 20 exterior points, closed form and solver
    arows = []
    for label, f, tol in (("closed", fmap, ctol), ("solver", run.solve(CONSTANT).holomap(), run.config.tol("solver"))):
        for cb in certify.distortion_checks(f, "az_integral", field=mu, tol=tol):
            run.add("az_integral", cb.measured, cb.bound, cb.tolerance, inputs={"map": label, **cb.inputs})
            arows.append([label, *cb.inputs["zeta"], cb.measured, cb.bound])
    run.table("az_integral", ["map", "re_zeta", "im_zeta", "abs_S", "bound"], arows)
    for cb in certify.distortion_checks(schwarzian.koebe(), "koebe"):
        run.add(cb.name, cb.measured, cb.bound, cb.tolerance, cb.sense, cb.inputs)
    m = beltrami.RadialMap(beltrami.RadialProfile(0.2))
    for cb in certify.distortion_checks(m, "crossratio"):
        run.add(cb.name, cb.measured, cb.bound, cb.tolerance, cb.sense, cb.inputs)


def _suite_recurrence(run):
    rows = []
    for alpha in (0.3, 0.5, 0.7):
        lam = certify.choose_lambda(alpha)
        tr = certify.recurrence(alpha, lam)
        inp = {"alpha": alpha, "lambda": lam, "n_max": 10_000}
        run.add("recurrence_increasing", 0 if tr.increasing else 1, 0, 0.0, inputs=inp)
        # log s_n grows doubly exponentially; compare log10(log s) with log10(log 1e6)
        run.add("recurrence_loglog_s_final", float(mpmath.log10(tr.log_s[-1])), math.log10(math.log(1e6)), 0.0, "lower", inp)
        run.add("recurrence_relation", tr.max_relation_error, 1e-12, 0.0, inputs={**inp, "checked_upto": tr.relation_checked_upto})
        run.add("lambda_above_threshold", lam, certify.lambda_threshold(alpha), 0.0, "lower", inp)
        for n, v in enumerate(tr.log_s[:40]):
            rows.append([alpha, n, float(v)])
    tr = certify.recurrence(0.5, 0.5)
    run.add("recurrence_negative_control", 1 if tr.passed else 0, 0, 0.0, inputs={"alpha": 0.5, "lambda": 0.5})
    run.table("recurrence", ["alpha", "n", "log_s"], rows, None)


def _suite_mori(run):
    ctol = run.config.tol("closed_form")
    m = beltrami.RadialMap(beltrami.RadialProfile(0.2))
    cbs = certify.distortion_checks(m, "mori")
    for name in ("mori_lower", "mori_upper"):
        sub = [c for c in cbs if c.name == name]
        worst = min(sub, key=lambda c: c.margin)
        run.add(name + "_worst", worst.measured, worst.bound, ctol, worst.sense, {"k": 0.2, "n_radii": len(sub), **worst.inputs})
        run.add(name + "_violations", sum(not c.passed for c in sub), 0, 0.0, inputs={"k": 0.2, "n_radii": len(sub)})
    rows = [[c.inputs["r"], c.measured, c.bound] for c in cbs if c.name == "mori_lower"]
    up = [c.bound for c in cbs if c.name == "mori_upper"]
    run.table(
        "mori",
        ["r", "one_minus_R", "lower", "upper"],
        [r + [u] for r, u in zip(rows, up)],
        {"x": "r", "ys": ["one_minus_R", "lower", "upper"], "logy": True, "style": "-", "title": "Mori bounds, k = 0.2"},
    )
    mp = beltrami.RadialMap(beltrami.RadialProfile(0.3, 0.5))
    for cb in certify.distortion_checks(mp, "mori_alpha", stability=run.config.tol("stability")):
        run.add(cb.name, cb.measured, cb.bound, cb.tolerance, cb.sense, {"profile": RADIAL, **cb.inputs})
    s = np.geomspace(1.0, 1e-6, 400)[1:]
    ratio = (1.0 - mp.R(1.0 - s)) / s
    run.table("mori_band", ["one_minus_r", "ratio"], [[a, b] for a, b in zip(s, ratio)], {"x": "one_minus_r", "ys": ["ratio"], "logx": True, "style": "-", "title": "(1-|f|)/(1-|z|)"})
    _composition(run)


def _weighted(mu, alpha, grid):
    return beltrami.norms(mu, alpha, grid).weighted_norm_est


def _composition(run):
    alpha = 0.5
    grid = run.grid
    etol = run.config.tol("exact")
    nu_p = beltrami.RadialProfile(0.3, 0.5)
    nu = beltrami.radial_field(nu_p)
    f_nu = beltrami.RadialMap(nu_p)
    radii = 1.0 - np.geomspace(1.0, 1e-6, 400)[1:]
    A = beltrami.distortion_constant(f_nu, radii)
    zero = beltrami.zero_field()
    inv = beltrami.compose_dilatation(zero, nu, f_nu)
    lhs = _weighted(inv, alpha, grid)
    rhs = (2 * A) ** alpha * _weighted(nu, alpha, grid)
    run.add("inverse_norm_stability", lhs, rhs, run.config.tol("closed_form"), inputs={"nu": RADIAL, "alpha": alpha, "A_est": A})
    same = beltrami.compose_dilatation(nu, nu, f_nu)
    run.add("compose_self_zero", np.abs(same(grid.polar_points())).max(), 0.0, etol, inputs={"nu": RADIAL})
    for mu_spec in ({"type": "radial", "ell": 0.2, "alpha": 0.5}, {"type": "radial", "ell": 0.1, "alpha": 0.7}):
        mu = parse_field(mu_spec)
        comp = beltrami.compose_dilatation(mu, nu, f_nu)
        lhs = _weighted(comp, alpha, grid)
        diff = beltrami.BeltramiField(lambda z, mu=mu: mu(z) - nu(z), 1.0, "difference")
        factor = (2 * A) ** alpha / (1 - mu.sup_bound * nu.sup_bound)
        rhs = factor * _weighted(diff, alpha, grid)
        run.add("composition_norm_stability", lhs, rhs, run.config.tol("closed_form"), inputs={"mu": mu_spec, "nu": RADIAL, "alpha": alpha, "A_est": A})
        # radial oracle: the composed map is radial with K_G = K_mu / K_nu
        f_mu = beltrami.RadialMap(beltrami.RadialProfile(mu_spec["ell"], mu_spec["alpha"]))
        r = np.linspace(0.05, 0.999, 200)
        K1 = r * f_mu.dR(r) / f_mu.R(r)
        K2 = r * f_nu.dR(r) / f_nu.R(r)
        kG = (K1 - K2) / (K1 + K2)
        zeta = f_nu.R(r) * np.exp(0.7j)
        got = comp(zeta) * np.exp(-1.4j)
        run.add("radial_composition_oracle", np.abs(got - kG).max(), 0.0, run.config.tol("roundtrip"), inputs={"mu": mu_spec, "nu": RADIAL})
    refl = beltrami.reflect(nu)
    z = 1.0 / np.conj(grid.polar_points()[1:].ravel())
    run.add("reflection_modulus", np.abs(np.abs(refl(z)) - np.abs(nu(1 / np.conj(z)))).max(), 0.0, etol, inputs={"mu": RADIAL})


RUNNERS = {
    "trivial": _suite_trivial,
    "one-dim": _suite_one_dim,
    "chain-1-2": _suite_chain_1_2,
    "chain-2-3": _suite_chain_2_3,
    "certificates": _suite_certificates,
    "recurrence": _suite_recurrence,
    "mori": _suite_mori,
}


def run_suite(config):
    """Run the configured suite; errors from a check are re-raised with its name."""
    if not isinstance(config, SuiteConfig):
        raise ConfigError("run_suite needs a SuiteConfig")
    start = time.perf_counter()
    run = _Run(config)
    names = SUITE_ORDER if config.suite == "all" else [config.suite]
    for name in names:
        run.suite = name
        try:
            RUNNERS[name](run)
        except QcDecayError as exc:
            raise type(exc)(f"suite {name!r}: {exc}") from exc
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return SuiteReport(config, run.records, run.tables, time.perf_counter() - start, stamp)
