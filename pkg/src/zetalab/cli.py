"""Command-line front end: evaluators, functionals, locators, audits, sweeps.

Exit codes: 0 all verdicts pass and no findings; 2 at least one failed
verdict; 3 findings (e.g. rh-obstruction) with all verdicts passing;
1 usage or runtime error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .audit import (
    NON_REPRODUCIBILITY_NOTE,
    audit_chain,
    audit_lemma4,
    audit_lemma5,
    audit_lemma6,
    derive_constants,
    lemma4_verdict,
)
from .config import AuditConfig
from .errors import ZetaLabError
from .handles import (
    const_handle,
    exp_handle,
    log_zeta_shift_handle,
    poly_from_roots,
    rational_handle,
    zeta_shift_handle,
)
from .nevanlinna import (
    DiskSpec,
    PointList,
    characteristic_T,
    jensen_residual,
    proximity_m,
)
from .report import ReportDocument
from .zeros import locate_a_points, winding_count_jittered
from .zeta import log_zeta_series, zeta_em


def _parse_complex(text: str) -> complex:
    return complex(text.replace(" ", "").replace("i", "j"))


def _parse_complex_list(text: str) -> list:
    return [_parse_complex(tok) for tok in text.split(",") if tok.strip()]


def _build_handle(args):
    name = args.function
    if name == "exp":
        return exp_handle()
    if name == "const":
        return const_handle(_parse_complex(args.value or "2"))
    if name == "poly":
        if not args.roots:
            raise ZetaLabError("poly needs --roots")
        return poly_from_roots(_parse_complex_list(args.roots))
    if name == "rational":
        return rational_handle(
            _parse_complex_list(args.zeros_at or ""),
            _parse_complex_list(args.poles_at or ""),
        )
    if name == "zeta":
        if args.t is None:
            raise ZetaLabError("zeta shift needs --t")
        return zeta_shift_handle(args.t, radius=3.5, mode=args.precision)
    if name == "logzeta":
        if args.t is None:
            raise ZetaLabError("log zeta shift needs --t")
        return log_zeta_shift_handle(args.t, radius=3.5, mode=args.precision)
    raise ZetaLabError(f"unknown function {name!r}")


def _config_from_args(args) -> AuditConfig:
    if getattr(args, "config", None):
        cfg = AuditConfig.load(args.config)
    else:
        cfg = AuditConfig()
    for key, attr in [
        ("t_min", "t_min"),
        ("t_max", "t_max"),
        ("t_points", "t_points"),
        ("t", "t"),
        ("c1", "c1"),
        ("delta", "delta"),
        ("precision", "precision"),
        ("jobs", "jobs"),
        ("json_path", "json"),
        ("csv_path", "csv"),
    ]:
        val = getattr(args, attr, None)
        if val is not None:
            setattr(cfg, key, val)
    if getattr(args, "log_spacing", False):
        cfg.spacing = "log"
    if getattr(args, "linear_spacing", False):
        cfg.spacing = "linear"
    if getattr(args, "sigma", None):
        cfg.sigma = [float(x) for x in args.sigma.split(",") if x.strip()]
    return cfg


def _emit(doc: ReportDocument, cfg: AuditConfig) -> int:
    doc.print_summary(sys.stdout)
    if cfg.json_path:
        doc.write_json(cfg.json_path)
        print(f"json report: {cfg.json_path}")
    if cfg.csv_path:
        doc.write_csv(cfg.csv_path)
        print(f"csv report: {cfg.csv_path}")
    return doc.exit_code()


def _sweep_worker(payload):
    (t, c1, delta, radii, sigma, mode, do_lemma5, do_chain) = payload
    verdicts, findings = [], []
    if do_lemma5:
        verdicts.extend(audit_lemma5(t, mode=mode))
    if do_chain:
        ledger = derive_constants(c1, delta, radii)
        vs, fs = audit_chain(t, ledger, sigma or None, mode)
        verdicts.extend(vs)
        findings.extend(fs)
    return t, verdicts, findings


def _run_sweep(cfg: AuditConfig, command: str, do_lemma5: bool, do_chain: bool) -> int:
    if do_chain:
        cfg.validate_conditional()
    grid = cfg.t_grid()
    doc = ReportDocument(command, cfg.to_json())
    ledger = derive_constants(cfg.c1, cfg.delta, cfg.radii)
    doc.constants = ledger.to_json()
    doc.notes.append(NON_REPRODUCIBILITY_NOTE)
    payloads = [
        (t, cfg.c1, cfg.delta, cfg.radii, cfg.sigma, cfg.precision, do_lemma5, do_chain)
        for t in grid
    ]
    if cfg.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_sweep_worker, payloads))
    else:
        results = [_sweep_worker(p) for p in payloads]
    for t, verdicts, findings in results:
        doc.add_verdicts(t, verdicts)
        doc.add_findings(findings)
    return _emit(doc, cfg)


def _cmd_zeta(args) -> int:
    cfg = _config_from_args(args)
    s = _parse_complex(args.s)
    if args.log:
        res = log_zeta_series(s, args.target, mode=cfg.precision)
        label = "log zeta"
    else:
        res = zeta_em(s, 1 if args.derivative else 0, args.target, mode=cfg.precision)
        label = "zeta'" if args.derivative else "zeta"
    print(f"{label}({s}) = {res.value!r}")
    print(f"abs_error <= {res.abs_error!r}")
    print(f"provenance: {dict(res.provenance)}")
    return 0


def _cmd_nevanlinna(args) -> int:
    cfg = _config_from_args(args)
    args.precision = cfg.precision
    f = _build_handle(args)
    if args.operation == "m":
        value, err = proximity_m(f, args.r, args.target)
        print(f"m({args.r}, {f.label}) = {value!r}  quad_error <= {err!r}")
        return 0
    if args.operation == "T":
        rep = characteristic_T(f, args.r, args.target)
        print(
            f"T({args.r}, {f.label}) = {rep.T!r}  (m={rep.m!r}, N={rep.N!r}, "
            f"quad_error <= {rep.quad_error!r})"
        )
        return 0
    if args.operation == "jensen":
        rho = args.rho if args.rho is not None else args.r
        disk = DiskSpec(0j, rho)
        zeros = locate_a_points(f, 0.0, disk)
        poles = (
            f.declared_poles.within(rho)
            if f.declared_poles is not None
            else PointList([])
        )
        f0 = f.eval_scalar(0j)
        res = jensen_residual(f, rho, zeros, poles, f0.value, args.target)
        print(
            f"jensen residual({rho}, {f.label}) = {res!r} "
            f"(zeros: {zeros.total()}, poles: {poles.total()})"
        )
        return 0
    raise ZetaLabError(f"unknown nevanlinna operation {args.operation!r}")


def _cmd_zeros(args) -> int:
    cfg = _config_from_args(args)
    args.precision = cfg.precision
    f = _build_handle(args)
    disk = DiskSpec(_parse_complex(args.center), args.radius)
    a = _parse_complex(args.a)
    if args.operation == "count":
        w = winding_count_jittered(f, a, disk)
        print(
            f"count = {w.count} (contour error {w.contour_error:.2e}, "
            f"{w.nodes} nodes, disk radius {w.disk.radius!r})"
        )
        return 0
    pts = locate_a_points(f, a, disk, tol=args.tol)
    for loc, mult in pts:
        print(f"{loc!r}  multiplicity {mult}")
    print(f"total (with multiplicity): {pts.total()}")
    return 0


def _cmd_audit(args) -> int:
    cfg = _config_from_args(args)
    which = args.which
    if which == "constants":
        ledger = derive_constants(cfg.c1, cfg.delta, cfg.radii)
        doc = ReportDocument("audit constants", cfg.to_json())
        doc.constants = ledger.to_json()
        check = ledger.self_check()
        print(f"self-check max discrepancy: {check!r}")
        for name in ledger.ORDER:
            print(f"  {name} = {ledger.values[name]!r}   [{ledger.formulas[name]}]")
        if cfg.json_path:
            doc.write_json(cfg.json_path)
        return 0 if check <= 1e-12 else 2

    if which == "lemma4":
        doc = ReportDocument("audit lemma4", cfg.to_json())
        xi_max = args.xi_max
        r1 = audit_lemma4(lambda x: 1.0 / x**2, lambda x: -1.0 / x, 1.0, xi_max)
        r2 = audit_lemma4(
            np.vectorize(lambda x: np.log(x) / x**4),
            np.vectorize(lambda x: -np.log(x) / (3 * x**3) - 1.0 / (9 * x**3)),
            3.0,
            xi_max,
        )
        doc.add_verdicts(None, [lemma4_verdict(r1, "inverse-square")])
        doc.add_verdicts(None, [lemma4_verdict(r2, "log-over-fourth-power")])
        return _emit(doc, cfg)

    if which == "lemma5":
        if cfg.t is not None:
            doc = ReportDocument("audit lemma5", cfg.to_json())
            doc.add_verdicts(cfg.t, audit_lemma5(cfg.t, mode=cfg.precision))
            return _emit(doc, cfg)
        return _run_sweep(cfg, "audit lemma5", do_lemma5=True, do_chain=False)

    if which == "lemma6":
        sigmas = cfg.sigma or [0.5, 0.54, 1.0, 2.0, 4.0]
        tcfg = AuditConfig(
            t_min=max(cfg.t_min, 2.0) if cfg.t is None else 2.0,
            t_max=cfg.t_max,
            t_points=cfg.t_points,
            spacing=cfg.spacing,
            t=cfg.t,
        )
        doc = ReportDocument("audit lemma6", cfg.to_json())
        verdict, empirical = audit_lemma6(sigmas, tcfg.t_grid(), cfg.c1, mode=cfg.precision)
        doc.add_verdicts(None, [verdict])
        print(f"empirical growth constant: {empirical!r}")
        return _emit(doc, cfg)

    if which in ("lemma8", "lemma9", "chain"):
        cfg.validate_conditional()
        ledger = derive_constants(cfg.c1, cfg.delta, cfg.radii)
        if which == "chain":
            return _run_sweep(cfg, "audit chain", do_lemma5=False, do_chain=True)
        from .audit import audit_lemma8, audit_lemma9

        fn = audit_lemma8 if which == "lemma8" else audit_lemma9
        doc = ReportDocument(f"audit {which}", cfg.to_json())
        doc.constants = ledger.to_json()
        for t in cfg.t_grid():
            verdict, findings = fn(t, ledger, cfg.precision)
            if verdict is not None:
                doc.add_verdicts(t, [verdict])
            doc.add_findings(findings)
        return _emit(doc, cfg)

    raise ZetaLabError(f"unknown audit target {which!r}")


def _cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    return _run_sweep(cfg, "sweep", do_lemma5=True, do_chain=True)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="zetalab",
        description="Value-distribution functionals and explicit zeta inequality audits",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, conditional=False):
        sp.add_argument("--t", type=float, default=None)
        sp.add_argument("--t-min", dest="t_min", type=float, default=None)
        sp.add_argument("--t-max", dest="t_max", type=float, default=None)
        sp.add_argument("--t-points", dest="t_points", type=int, default=None)
        sp.add_argument("--log-spacing", action="store_true")
        sp.add_argument("--linear-spacing", action="store_true")
        sp.add_argument("--sigma", type=str, default=None)
        sp.add_argument("--c1", type=float, default=None)
        sp.add_argument("--delta", type=float, default=None)
        sp.add_argument("--precision", choices=["auto", "double", "double_double"], default=None)
        sp.add_argument("--jobs", type=int, default=None)
        sp.add_argument("--json", type=str, default=None)
        sp.add_argument("--csv", type=str, default=None)
        sp.add_argument("--config", type=str, default=None)

    sp = sub.add_parser("zeta", help="evaluate zeta / zeta' / log zeta")
    zsub = sp.add_subparsers(dest="zeta_op", required=True)
    ev = zsub.add_parser("eval")
    ev.add_argument("--s", type=str, required=True, help="complex point, e.g. 4 or 0.5+14.1j")
    ev.add_argument("--derivative", action="store_true")
    ev.add_argument("--log", action="store_true", help="log zeta via the prime-power series")
    ev.add_argument("--target", type=float, default=1e-12)
    add_common(ev)
    ev.set_defaults(func=_cmd_zeta)

    sp = sub.add_parser("nevanlinna", help="m / T / counting-identity residual")
    sp.add_argument("operation", choices=["T", "m", "jensen"])
    sp.add_argument("--function", required=True, choices=["exp", "const", "poly", "rational", "zeta", "logzeta"])
    sp.add_argument("--roots", type=str, default=None)
    sp.add_argument("--zeros-at", dest="zeros_at", type=str, default=None)
    sp.add_argument("--poles-at", dest="poles_at", type=str, default=None)
    sp.add_argument("--value", type=str, default=None)
    sp.add_argument("--r", type=float, default=2.0)
    sp.add_argument("--rho", type=float, default=None)
    sp.add_argument("--target", type=float, default=1e-9)
    add_common(sp)
    sp.set_defaults(func=_cmd_nevanlinna)

    sp = sub.add_parser("zeros", help="count or locate a-points in a disk")
    sp.add_argument("operation", choices=["count", "locate"])
    sp.add_argument("--function", required=True, choices=["exp", "const", "poly", "rational", "zeta", "logzeta"])
    sp.add_argument("--roots", type=str, default=None)
    sp.add_argument("--zeros-at", dest="zeros_at", type=str, default=None)
    sp.add_argument("--poles-at", dest="poles_at", type=str, default=None)
    sp.add_argument("--value", type=str, default=None)
    sp.add_argument("--a", type=str, default="0")
    sp.add_argument("--center", type=str, default="0")
    sp.add_argument("--radius", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-9)
    add_common(sp)
    sp.set_defaults(func=_cmd_zeros)

    sp = sub.add_parser("audit", help="run one audit family")
    sp.add_argument(
        "which",
        choices=["lemma4", "lemma5", "lemma6", "lemma8", "lemma9", "chain", "constants"],
    )
    sp.add_argument("--xi-max", dest="xi_max", type=int, default=100000)
    add_common(sp)
    sp.set_defaults(func=_cmd_audit)

    sp = sub.add_parser("sweep", help="multi-audit sweep over a t grid")
    add_common(sp)
    sp.set_defaults(func=_cmd_sweep)

    return p


def run_command(argv=None) -> int:
    """Parse argv, run the subcommand, return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ZetaLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    return run_command(argv)


if __name__ == "__main__":
    sys.exit(main())
