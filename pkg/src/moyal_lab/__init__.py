"""Moyal star products, Weyl quantization, and bracket-equality certificates.

Exact engine (pure Python, complex-rational coefficients):
    crational, polysym, star, exppoly, certify
Numerical engine (numpy, d = 1):
    evaluators, grid, gridio, weylop
Surface:
    exprparse, cli

The numeric modules are imported lazily so the command-line entry point
can configure threading before numpy loads.
"""

from __future__ import annotations

from .conventions import CONVENTIONS
from .crational import CRational, I, i_power, neg_i_power
from .polysym import (PhasePoint, PolySymbol, Shape, ShapeError,
                      directional_power, linear_form, linear_form_symbolic,
                      poisson_bracket, symplectic_form)
from .star import (ConventionError, HbarSeries, bracket_discrepancy,
                   bracket_term, calibration_check, cj_coefficient,
                   moyal_bracket, moyal_bracket_series, moyal_product, star,
                   truncated_bracket)
from .exppoly import (ExpPolySymbol, cj_exp, exp_derivative,
                      pure_exp_collapse, star_with_pure)
from .certify import (Certificate, MpcReport, bracket_term_exp,
                      exp_test_bracket, expected_term_constant,
                      gvh_certificate, mpc_identity_check)

_NUMERIC = {
    "SymbolEvaluator": "evaluators",
    "GaussAtom": "evaluators",
    "poisson_bracket_eval": "evaluators",
    "bracket_term_eval": "evaluators",
    "window": "evaluators",
    "GridSpec": "grid",
    "GridSymbol": "grid",
    "sample": "grid",
    "star_grid": "grid",
    "star_quadrature_point": "grid",
    "cj_grid": "grid",
    "remainder_grid": "grid",
    "remainder_scaling_scan": "grid",
    "symplectic_fourier": "grid",
    "XGrid": "weylop",
    "WaveVector": "weylop",
    "OperatorMatrix": "weylop",
    "quantize_kernel": "weylop",
    "quantize_via_covariant": "weylop",
    "symbol_from_operator": "weylop",
    "heisenberg_translation": "weylop",
    "coherent_state": "weylop",
    "expectation": "weylop",
    "commutator_bracket": "weylop",
    "heisenberg_evolve": "weylop",
    "classical_evolve_quadratic": "weylop",
    "egorov_compare": "weylop",
}


def __getattr__(name: str):
    mod = _NUMERIC.get(name)
    if mod is None:
        raise AttributeError(f"module 'moyal_lab' has no attribute {name!r}")
    import importlib

    return getattr(importlib.import_module(f".{mod}", __name__), name)
