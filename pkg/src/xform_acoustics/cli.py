"""``xform-acoustics --config exp.json --out results/run1``

Writes ``<prefix>.params.csv`` (export-params), ``<prefix>.field.csv`` (solve)
and ``<prefix>.report.json`` (every mode). Exit codes: 0 pass, 1 failed
verdict, 2 configuration error, 3 numerical or solver error.
"""

import argparse
import os
import sys
import time
from dataclasses import dataclass, field

from . import helmholtz
from .config import parse_config
from .errors import ConfigError, XformError
from .io import write_field_csv, write_json, write_params_csv

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass
class RunReport:
    config: dict
    mode: str
    result: dict
    outputs: list = field(default_factory=list)
    wall_time: float = 0.0
    verdict: str | None = None

    @property
    def exit_code(self):
        return EXIT_FAIL if self.verdict == "FAIL" else EXIT_PASS

    def to_dict(self):
        # wall time is kept out of the file so reruns are byte-identical
        out = {"mode": self.mode, "config": self.config, "result": self.result}
        if self.verdict is not None:
            out["verdict"] = self.verdict
        return out


def _verdict(cfg, report):
    """Ren is expected to plateau; every other scheme to converge at second order."""
    if cfg.experiment.scheme.name == "ren":
        change = helmholtz.plateau_change(report)
        check = {"expect": "plateau", "plateau_change": change, "threshold": helmholtz.PLATEAU_CHANGE}
        ok = change <= helmholtz.PLATEAU_CHANGE
    else:
        check = {"expect": "convergent", "observed_order": report.observed_order,
                 "threshold": helmholtz.PASS_ORDER}
        ok = report.observed_order >= helmholtz.PASS_ORDER
    return ("PASS" if ok else "FAIL"), check


def run(cfg, prefix=None):
    """Execute one configured experiment and write its outputs under ``prefix``."""
    prefix = prefix or cfg.output or os.path.join("results", "run")
    parent = os.path.dirname(prefix)
    if parent:
        os.makedirs(parent, exist_ok=True)
    stem = os.path.basename(prefix)
    exp = cfg.experiment
    start = time.perf_counter()
    outputs, verdict = [], None

    if cfg.mode == "export-params":
        table = exp.parameter_table()
        path = f"{prefix}.params.csv"
        write_params_csv(table, path)
        outputs.append(path)
        result = {"params_csv": f"{stem}.params.csv", "rows": exp.grid.size, "columns": list(table)}
    elif cfg.mode == "residual":
        coeff, oracle, omega = exp.problem(exp.grid)
        result = helmholtz.residual_report(coeff, oracle, omega).to_dict()
    elif cfg.mode == "solve":
        coeff, oracle, omega = exp.problem(exp.grid)
        sol = helmholtz.solve_dirichlet(coeff, omega, oracle)
        err = helmholtz.error_report(sol, oracle)
        path = f"{prefix}.field.csv"
        write_field_csv(sol, path)
        outputs.append(path)
        result = {"field_csv": f"{stem}.field.csv", "error": err.to_dict()}
    else:
        report = helmholtz.convergence_study(exp, cfg.levels, cfg.measure)
        verdict, check = _verdict(cfg, report)
        result = {**report.to_dict(), "check": check}

    rr = RunReport(cfg.echo(), cfg.mode, result, outputs, 0.0, verdict)
    path = f"{prefix}.report.json"
    write_json(rr.to_dict(), path)
    rr.outputs.append(path)
    rr.wall_time = time.perf_counter() - start
    return rr


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="xform-acoustics",
        description="Transformed acoustic media under conformal maps: parameters, residuals, solves.",
    )
    parser.add_argument("--config", required=True, help="path to the JSON experiment config")
    parser.add_argument("--out", help="output path prefix (overrides the config's 'output')")
    parser.add_argument("--quiet", action="store_true", help="suppress the summary on stdout")
    args = parser.parse_args(argv)

    try:
        with open(args.config, "rb") as fh:
            cfg = parse_config(fh.read())
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        rr = run(cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (XformError, ValueError, ArithmeticError) as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    if not args.quiet:
        for path in rr.outputs:
            print(f"wrote {path}")
        if rr.verdict is not None:
            print(f"verdict: {rr.verdict}")
        print(f"wall time: {rr.wall_time:.3f} s")
    return rr.exit_code


if __name__ == "__main__":
    sys.exit(main())
