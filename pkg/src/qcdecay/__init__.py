"""Decay of Schwarzian derivatives for quasiconformal maps with decaying dilatation.

Circle diffeomorphisms and their quasisymmetric constants, the
Beurling-Ahlfors extension, Beltrami fields with hyperbolic decay norms, a
Beltrami equation solver for the exterior disk, Schwarzian decay scans and
certified distortion inequalities.
"""
from .beltrami import BeltramiField, RadialMap, RadialProfile, constant_field, norms, power_field, radial_field, zero_field
from .certify import CertBound, distortion_checks, recurrence, theorem_decay_bound, theorem_partition
from .circle_maps import LiftFunction, compose, identity, invert, make_trig_diffeo, qsq, rotation, trig_family
from .errors import QcDecayError
from .halfplane_ext import BAExtension, ba_dilatation, project_to_disk
from .harness import SuiteConfig, SuiteReport, run_suite
from .schwarzian import HoloMap, decay_scan, pre_schwarzian
from .solver import SolvedMap, solve

__version__ = "0.1.0"

__all__ = [
    "BAExtension",
    "BeltramiField",
    "CertBound",
    "HoloMap",
    "LiftFunction",
    "QcDecayError",
    "RadialMap",
    "RadialProfile",
    "SolvedMap",
    "SuiteConfig",
    "SuiteReport",
    "ba_dilatation",
    "compose",
    "constant_field",
    "decay_scan",
    "distortion_checks",
    "identity",
    "invert",
    "make_trig_diffeo",
    "norms",
    "power_field",
    "pre_schwarzian",
    "project_to_disk",
    "qsq",
    "radial_field",
    "recurrence",
    "rotation",
    "run_suite",
    "solve",
    "theorem_decay_bound",
    "theorem_partition",
    "trig_family",
    "zero_field",
]
