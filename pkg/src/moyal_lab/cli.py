"""Command-line surface: moyal-lab <subcommand>.

Subcommands: star, bracket, gvh, mpc, remainder, quantize, egorov,
coherent.  Outputs are deterministic (sorted keys, exact rationals as
"p/q" strings, shortest round-trip floats); every JSON payload carries the
calibrated conventions table.  Exit codes: 0 success, 1 parse/config
error, 2 numeric tolerance failure, 3 internal invariant failure.

The environment variable MOYAL_LAB_THREADS caps worker threads of the
numeric backends; it must be read before numpy loads, so the numeric
modules are imported lazily inside the handlers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .conventions import CONVENTIONS
from .crational import CRational
from .exprparse import ExprError, lower_poly, parse_symbol, pretty
from .polysym import PolySymbol
from .star import ConventionError, HbarSeries, calibration_check

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_TOLERANCE = 2
EXIT_INTERNAL = 3


class ToleranceFailure(RuntimeError):
    pass


# ------------------------------------------------------------- serialization

def frac_json(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def crational_json(c: CRational) -> dict:
    return {"re": frac_json(c.re), "im": frac_json(c.im)}


def poly_json(p: PolySymbol) -> list:
    shape = p.shape
    d = shape.d
    out = []
    for exps, coeff in p.sorted_terms():
        term = {
            "alpha": [exps[shape.slot("x", k)] for k in range(d)],
            "beta": [exps[shape.slot("xi", k)] for k in range(d)],
        }
        if shape.has_y:
            term["y"] = [exps[shape.slot("y", k)] for k in range(d)]
            term["eta"] = [exps[shape.slot("eta", k)] for k in range(d)]
        if shape.has_hbar:
            term["hbar"] = exps[shape.slot("hbar")]
        term.update(crational_json(coeff))
        out.append(term)
    return out


def series_json(s: HbarSeries) -> dict:
    return {"orders": s.orders(),
            "coefficients": {str(j): poly_json(p) for j, p in sorted(s.coeffs.items())}}


def emit_json(payload: dict, args) -> None:
    payload = {"command": payload.pop("command"), "conventions": CONVENTIONS, **payload}
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    _write(text, args)


def emit_csv(lines: list[str], args) -> None:
    _write("\n".join(lines) + "\n", args)


def _write(text: str, args) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def fmt(x: float) -> str:
    return f"{x:.17g}"


# ------------------------------------------------------------- lowering helpers

def _poly_arg(text: str, d: int) -> PolySymbol:
    return lower_poly(parse_symbol(text), d=d)


def _eval_arg(text: str):
    from .exprparse import lower_evaluator

    return lower_evaluator(parse_symbol(text))


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ExprError(f"bad numeric list {text!r}", 0) from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ExprError(f"bad integer list {text!r}", 0) from exc


# ------------------------------------------------------------- subcommands

def cmd_star(args) -> int:
    if args.mode == "exact":
        A = _poly_arg(args.A, args.d)
        B = _poly_arg(args.B, args.d)
        from .star import moyal_product

        prod = moyal_product(A, B)
        emit_json({"command": "star", "mode": "exact", "d": args.d,
                   "A": pretty(parse_symbol(args.A)), "B": pretty(parse_symbol(args.B)),
                   "result": series_json(prod)}, args)
        return EXIT_OK
    from .grid import GridSpec, sample, star_grid
    from .gridio import save_grid_symbol

    spec = GridSpec(args.N, args.L, args.hbar)
    GA = sample(_eval_arg(args.A), spec)
    GB = sample(_eval_arg(args.B), spec)
    S = star_grid(GA, GB)
    origin = S.samples[spec.n // 2, spec.n // 2]
    if args.save:
        save_grid_symbol(S, args.save)
    emit_json({"command": "star", "mode": "grid",
               "grid": {"N": spec.n, "L": spec.box, "hbar": spec.hbar},
               "result": {"interior_sup": float(S.interior_sup()),
                          "origin": {"re": float(origin.real), "im": float(origin.imag)},
                          "saved": bool(args.save)}}, args)
    return EXIT_OK


def cmd_bracket(args) -> int:
    from .star import bracket_discrepancy, moyal_bracket, truncated_bracket
    from .polysym import poisson_bracket

    A = _poly_arg(args.A, args.d)
    H = _poly_arg(args.H, args.d)
    result = {}
    if args.mode in ("poisson", "both"):
        result["poisson"] = poly_json(poisson_bracket(A, H))
    if args.mode in ("moyal", "both"):
        result["moyal"] = series_json(moyal_bracket(A, H))
    if args.mode == "truncated":
        result["truncated"] = series_json(truncated_bracket(A, H, args.m))
        result["discrepancy"] = series_json(bracket_discrepancy(A, H, args.m))
        result["m"] = args.m
    emit_json({"command": "bracket", "mode": args.mode, "d": args.d,
               "A": pretty(parse_symbol(args.A)), "H": pretty(parse_symbol(args.H)),
               "result": result}, args)
    return EXIT_OK


def cmd_gvh(args) -> int:
    from .certify import gvh_certificate

    H = _poly_arg(args.H, args.d)
    results = []
    for m in range(args.max_m + 1):
        cert = gvh_certificate(H, m)
        entry = {"m": m, "equal": cert.equal, "degree": cert.degree}
        if not cert.equal:
            entry["failing_order"] = cert.failing_order
            entry["witness"] = poly_json(cert.witness)
        results.append(entry)
    emit_json({"command": "gvh", "d": args.d, "H": pretty(parse_symbol(args.H)),
               "results": results}, args)
    return EXIT_OK


def cmd_mpc(args) -> int:
    from .certify import mpc_identity_check

    H = _poly_arg(args.H, args.d)
    rep = mpc_identity_check(H)
    result = {
        "lhs_closed_form": poly_json(rep.lhs_closed_form),
        "c0": poly_json(rep.c0),
        "c1": poly_json(rep.c1),
        "c2": poly_json(rep.c2),
        "taylor_defect_at_hbar_1": poly_json(rep.taylor_defect),
        "taylor_defect_vanishes": rep.taylor_defect.is_zero,
        "mirrored_shift_sign": rep.mirrored_shift_sign,
    }
    if rep.printed_c2_delta is not None:
        result["printed_c2_delta"] = poly_json(rep.printed_c2_delta)
        result["printed_c2_delta_vanishes"] = rep.printed_c2_delta.is_zero
    emit_json({"command": "mpc", "d": args.d, "H": pretty(parse_symbol(args.H)),
               "result": result}, args)
    return EXIT_OK


def cmd_remainder(args) -> int:
    from .grid import GridSpec, remainder_scaling_scan

    spec = GridSpec(args.N, args.L, args.hbars_list[0])
    res = remainder_scaling_scan(_eval_arg(args.A), _eval_arg(args.B),
                                 args.orders_list, args.hbars_list, spec)
    if args.format == "csv":
        lines = ["order,hbar,sup_norm"]
        for order, h, sup in res["rows"]:
            lines.append(f"{order},{fmt(h)},{fmt(sup)}")
        lines.append("order,slope,")
        for order in args.orders_list:
            slope = res["slopes"][order]
            lines.append(f"{order},{'exact-within-noise' if slope is None else fmt(slope)},")
        emit_csv(lines, args)
    else:
        emit_json({"command": "remainder",
                   "grid": {"N": args.N, "L": args.L},
                   "orders": args.orders_list, "hbars": args.hbars_list,
                   "result": {
                       "rows": [{"order": o, "hbar": h, "sup_norm": s}
                                for o, h, s in res["rows"]],
                       "slopes": {str(o): res["slopes"][o] for o in args.orders_list},
                   }}, args)
    return EXIT_OK


def cmd_quantize(args) -> int:
    import numpy as np

    from .grid import sample
    from .gridio import save_operator
    from .weylop import XGrid, quantize_kernel, symbol_from_operator

    grid = XGrid(args.Nx, args.L, args.hbar)
    ev = _eval_arg(args.A)
    M = quantize_kernel(ev, grid, spectral=args.spectral)
    herm = M.hermiticity_defect()
    sym = symbol_from_operator(M)
    ref = sample(ev, sym.spec)
    mask = sym.spec.interior_mask()
    err = float(np.max(np.abs((sym.samples - ref.samples)[mask])))
    scale = float(np.max(np.abs(ref.samples[mask])))
    if args.save:
        save_operator(M, args.save)
    payload = {"command": "quantize",
               "grid": {"Nx": grid.n, "L": grid.box, "hbar": grid.hbar},
               "spectral": bool(args.spectral),
               "result": {"hermiticity_defect": herm,
                          "roundtrip_interior_sup_error": err,
                          "roundtrip_scale": scale,
                          "saved": bool(args.save)}}
    emit_json(payload, args)
    if scale > 0 and err / scale > args.tol:
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_egorov(args) -> int:
    from .weylop import XGrid, egorov_compare

    H = _poly_arg(args.H, 1)
    if H.degree() > 2:
        raise ExprError("egorov requires deg H <= 2", 0)
    grid = XGrid(args.Nx, args.L, args.hbar)
    rep = egorov_compare(_eval_arg(args.A), H, args.t, grid)
    emit_json({"command": "egorov",
               "grid": {"Nx": grid.n, "L": grid.box, "hbar": grid.hbar},
               "H": pretty(parse_symbol(args.H)), "t": args.t,
               "result": rep}, args)
    if rep["relative_mismatch"] > args.tol:
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_coherent(args) -> int:
    import numpy as np

    from .weylop import XGrid, coherent_state, expectation, quantize_kernel

    y, eta = _float_list(args.Y)
    ev = _eval_arg(args.A)
    rows = []
    errs = []
    import warnings

    for hbar in args.hbars_list:
        grid = XGrid(args.Nx, args.L, hbar)
        phi = coherent_state((y, eta), grid)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            op = quantize_kernel(ev, grid)
        e = expectation(op, phi)
        val = complex(ev(np.array(y), np.array(eta)))
        err = abs(e - val)
        errs.append(err)
        rows.append({"hbar": hbar, "expectation": {"re": e.real, "im": e.imag},
                     "symbol_at_Y": {"re": val.real, "im": val.imag},
                     "abs_error": err})
    slope = None
    pts = [(h, e) for h, e in zip(args.hbars_list, errs) if e > 1e-14]
    if len(pts) >= 2:
        import numpy as np

        slope = float(np.polyfit(np.log([p[0] for p in pts]),
                                 np.log([p[1] for p in pts]), 1)[0])
    emit_json({"command": "coherent",
               "grid": {"Nx": args.Nx, "L": args.L},
               "Y": {"y": y, "eta": eta},
               "result": {"rows": rows, "slope": slope}}, args)
    return EXIT_OK


# ------------------------------------------------------------- dispatch

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="moyal-lab",
                description="Star products, bracket certificates, and Weyl "
                            "quantization on phase space")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, d=True):
        sp.add_argument("--out", help="write output to a file instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        if d:
            sp.add_argument("--d", type=int, default=1, help="phase-space dimension")

    sp = sub.add_parser("star", help="Moyal product, exact or on the grid")
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", required=True)
    sp.add_argument("--mode", choices=("exact", "grid"), default="exact")
    sp.add_argument("--N", type=int, default=64)
    sp.add_argument("--L", type=float, default=6.0)
    sp.add_argument("--hbar", type=float, default=1.0)
    sp.add_argument("--save", help="store the grid result (binary + sidecar)")
    common(sp)
    sp.set_defaults(func=cmd_star)

    sp = sub.add_parser("bracket", help="Poisson / Moyal / truncated brackets")
    sp.add_argument("--A", required=True)
    sp.add_argument("--H", required=True)
    sp.add_argument("--mode", choices=("poisson", "moyal", "truncated", "both"),
                    default="both")
    sp.add_argument("--m", type=int, default=0, help="truncation order")
    common(sp)
    sp.set_defaults(func=cmd_bracket)

    sp = sub.add_parser("gvh", help="bracket-equality certificates")
    sp.add_argument("--H", required=True)
    sp.add_argument("--max-m", dest="max_m", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_gvh)

    sp = sub.add_parser("mpc", help="conjugation-identity expansion report")
    sp.add_argument("--H", required=True)
    common(sp)
    sp.set_defaults(func=cmd_mpc)

    sp = sub.add_parser("remainder", help="series-remainder scaling scan")
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", required=True)
    sp.add_argument("--orders", required=True)
    sp.add_argument("--hbars", required=True)
    sp.add_argument("--N", type=int, default=64)
    sp.add_argument("--L", type=float, default=8.0)
    common(sp, d=False)
    sp.set_defaults(func=cmd_remainder)

    sp = sub.add_parser("quantize", help="build a Weyl operator and round-trip it")
    sp.add_argument("--A", required=True)
    sp.add_argument("--Nx", type=int, default=128)
    sp.add_argument("--L", type=float, default=8.0)
    sp.add_argument("--hbar", type=float, default=1.0)
    sp.add_argument("--spectral", action="store_true",
                    help="exact periodic spectral lattice (polynomial symbols)")
    sp.add_argument("--tol", type=float, default=1e-5)
    sp.add_argument("--save", help="store the operator (binary + sidecar)")
    common(sp, d=False)
    sp.set_defaults(func=cmd_quantize)

    sp = sub.add_parser("egorov", help="quadratic quantum vs classical transport")
    sp.add_argument("--A", required=True)
    sp.add_argument("--H", required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--Nx", type=int, default=256)
    sp.add_argument("--L", type=float, default=8.0)
    sp.add_argument("--hbar", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=1e-4)
    common(sp, d=False)
    sp.set_defaults(func=cmd_egorov)

    sp = sub.add_parser("coherent", help="coherent-state expectation sweep")
    sp.add_argument("--A", required=True)
    sp.add_argument("--Y", required=True, help="y,eta")
    sp.add_argument("--hbars", required=True)
    sp.add_argument("--Nx", type=int, default=256)
    sp.add_argument("--L", type=float, default=8.0)
    common(sp, d=False)
    sp.set_defaults(func=cmd_coherent)

    return p


def main(argv=None) -> int:
    threads = os.environ.get("MOYAL_LAB_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "hbars"):
            args.hbars_list = _float_list(args.hbars)
        if hasattr(args, "orders"):
            args.orders_list = _int_list(args.orders)
        calibration_check(1)
        return args.func(args)
    except ExprError as exc:
        print(f"moyal-lab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError) as exc:
        print(f"moyal-lab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ToleranceFailure as exc:
        print(f"moyal-lab: tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except ConventionError as exc:
        print(f"moyal-lab: internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
