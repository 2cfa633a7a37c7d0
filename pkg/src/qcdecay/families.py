"""Parse JSON descriptions of lifts, Beltrami fields and holomorphic maps."""
import json

from . import beltrami, circle_maps, halfplane_ext, schwarzian, solver
from .errors import ConfigError


def _load(spec):
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON spec: {exc}") from exc
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"spec must be an object with a 'type' key, got {spec!r}")
    return spec


def _get(spec, key, default=None, required=False):
    if key in spec:
        return spec[key]
    if required:
        raise ConfigError(f"{spec['type']!r} spec needs {key!r}")
    return default


def parse_lift(spec):
    spec = _load(spec)
    kind = spec["type"]
    if kind == "identity":
        return circle_maps.identity()
    if kind == "rotation":
        return circle_maps.rotation(float(_get(spec, "theta", required=True)))
    if kind == "trig":
        if "a" in spec:
            return circle_maps.trig_family(float(spec["a"]), int(_get(spec, "k", 1)))
        coeffs = [tuple(c) for c in _get(spec, "coeffs", [])]
        return circle_maps.make_trig_diffeo(coeffs, float(_get(spec, "shift", 0.0)))
    if kind == "compose":
        return circle_maps.compose(
            parse_lift(_get(spec, "outer", required=True)), parse_lift(_get(spec, "inner", required=True))
        )
    if kind == "invert":
        return circle_maps.invert(parse_lift(_get(spec, "of", required=True)))
    raise ConfigError(f"unknown lift type {kind!r}")


def parse_field(spec):
    spec = _load(spec)
    kind = spec["type"]
    if kind == "zero":
        return beltrami.zero_field()
    if kind == "constant":
        k = float(_get(spec, "k", required=True))
        if not abs(k) < 1:
            raise ConfigError("constant field needs |k| < 1")
        return beltrami.constant_field(k)
    if kind == "radial":
        try:
            prof = beltrami.RadialProfile(float(_get(spec, "ell", required=True)), float(_get(spec, "alpha", 0.0)))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return beltrami.radial_field(prof)
    if kind == "power":
        ell = float(_get(spec, "ell", required=True))
        if not abs(ell) < 1:
            raise ConfigError("power field needs |ell| < 1")
        return beltrami.power_field(ell, float(_get(spec, "alpha", required=True)))
    if kind == "ba":
        lift = parse_lift(_get(spec, "family", required=True))
        return halfplane_ext.project_to_disk(halfplane_ext.BAExtension(lift))
    if kind == "aw":
        phi = schwarzian.power_differential(float(_get(spec, "c", required=True)), int(_get(spec, "n", 4)))
        return schwarzian.aw_section(phi)
    raise ConfigError(f"unknown field type {kind!r}")


def parse_map(spec, solver_cache=None):
    """Closed-form maps, or {"type": "solver", "field": ..., "N", "L", "tol"}."""
    spec = _load(spec)
    kind = spec["type"]
    if kind == "identity":
        return schwarzian.identity_map()
    if kind == "joukowski":
        return schwarzian.joukowski(float(_get(spec, "k", required=True)))
    if kind == "mobius":
        a, b, c, d = (complex(v) if isinstance(v, str) else v for v in _get(spec, "coeffs", required=True))
        return schwarzian.mobius(a, b, c, d)
    if kind == "koebe":
        return schwarzian.koebe()
    if kind == "cot":
        return schwarzian.cot_map(float(_get(spec, "c", required=True)))
    if kind == "solver":
        return solve_spec(spec, solver_cache).holomap()
    raise ConfigError(f"unknown map type {kind!r}")


def solve_spec(spec, cache=None):
    spec = _load(spec)
    key = json.dumps(spec, sort_keys=True)
    if cache is not None and key in cache:
        return cache[key]
    mu = parse_field(_get(spec, "field", required=True))
    out = solver.solve(mu, L=float(_get(spec, "L", 2.0)), N=int(_get(spec, "N", 1024)), tol=float(_get(spec, "tol", 1e-10)))
    if cache is not None:
        cache[key] = out
    return out


def list_families():
    """Built-in families with their parameters and admissibility constraints."""
    return [
        {"name": "identity", "kind": "lift", "spec": {"type": "identity"}, "constraint": "none"},
        {"name": "rotation", "kind": "lift", "spec": {"type": "rotation", "theta": 0.25}, "constraint": "theta real"},
        {
            "name": "trig",
            "kind": "lift",
            "spec": {"type": "trig", "coeffs": [[1, 0.1, 0.0]], "shift": 0.0},
            "constraint": "h' = 1 + sum(a cos - b sin) must stay positive: sum |a_k| + |b_k| < 1 suffices, "
            "otherwise min over 4096 samples minus the Lipschitz slack must be > 0",
        },
        {"name": "g_a", "kind": "lift", "spec": {"type": "trig", "a": 0.1}, "constraint": "|a| < 1"},
        {"name": "compose", "kind": "lift", "spec": {"type": "compose", "outer": "...", "inner": "..."}, "constraint": "valid lifts"},
        {"name": "invert", "kind": "lift", "spec": {"type": "invert", "of": "..."}, "constraint": "valid lift"},
        {"name": "zero", "kind": "field", "spec": {"type": "zero"}, "constraint": "none"},
        {"name": "constant-k", "kind": "field", "spec": {"type": "constant", "k": 0.2}, "constraint": "|k| < 1"},
        {
            "name": "radial",
            "kind": "field",
            "spec": {"type": "radial", "ell": 0.3, "alpha": 0.5},
            "constraint": "|ell| < 1, alpha >= 0; k(r) = ell (1 - r)^alpha",
        },
        {"name": "power", "kind": "field", "spec": {"type": "power", "ell": 0.2, "alpha": 0.5}, "constraint": "|ell| < 1"},
        {"name": "ba", "kind": "field", "spec": {"type": "ba", "family": {"type": "trig", "a": 0.1}}, "constraint": "valid lift"},
        {
            "name": "aw",
            "kind": "field",
            "spec": {"type": "aw", "c": 0.1, "n": 4},
            "constraint": "phi = c / z^n; sup of the produced field must be < 1 (|c| < 2 for n = 4)",
        },
        {"name": "joukowski", "kind": "map", "spec": {"type": "joukowski", "k": 0.2}, "constraint": "|k| < 1"},
        {"name": "cot", "kind": "map", "spec": {"type": "cot", "c": 0.1}, "constraint": "small |c|; Schwarzian c / z^4"},
        {"name": "koebe", "kind": "map", "spec": {"type": "koebe"}, "constraint": "disk only"},
        {"name": "mobius", "kind": "map", "spec": {"type": "mobius", "coeffs": [1, 0, 0.2, 1]}, "constraint": "ad - bc != 0"},
        {
            "name": "solver",
            "kind": "map",
            "spec": {"type": "solver", "field": {"type": "constant", "k": 0.2}, "N": 1024, "L": 2.0, "tol": 1e-10},
            "constraint": "sup |mu| <= 0.7; evaluation at |z| >= 1 + 8 L / N",
        },
    ]
