"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 invalid input file or parameters,
3 internal consistency failure (an identity residual exceeded tolerance).
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass

from . import estimation, io, metrology, process, states, verify
from .errors import ConsistencyError, CondThermError, DomainError, PreconditionError

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_CONSISTENCY = 0, 1, 2, 3

SWEEP_AGREEMENT_TOL = 1e-10


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepConfig:
    start: float
    stop: float
    step: float
    omega: float = 1.0
    theta: float = math.pi / 4
    out: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop) and math.isfinite(self.step)):
            raise UsageError("grid bounds must be finite")
        if self.step <= 0:
            raise UsageError("--beta-step must be positive")
        if self.start > self.stop:
            raise UsageError("--beta-start must not exceed --beta-stop")

    def grid(self) -> list[float]:
        """Inclusive grid ``start + i*step``; the endpoint survives round-off."""
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + i * self.step for i in range(n)]


def qubit_sweep_rows(cfg: SweepConfig) -> list[dict]:
    h, basis = metrology.qubit_instance(cfg.omega, cfg.theta)
    rows = []
    for b in cfg.grid():
        closed = metrology.qubit_delta_qfi(cfg.omega, cfg.theta, b)
        qfi_cts = metrology.qfi_analytic(states.cts(h, basis, b)).value
        qfi_eq = metrology.qfi_gibbs(h, b)
        matrix = qfi_cts - qfi_eq
        if abs(closed - matrix) > SWEEP_AGREEMENT_TOL:
            raise ConsistencyError(f"beta={b}: closed form {closed!r} vs matrix pipeline {matrix!r}")
        rows.append({"beta": b, "delta_qfi_closed_form": closed, "delta_qfi_matrix": matrix,
                     "qfi_cts": qfi_cts, "qfi_gibbs": qfi_eq})
    return rows


QUBIT_COLUMNS = ["beta", "delta_qfi_closed_form", "delta_qfi_matrix", "qfi_cts", "qfi_gibbs"]
QFI_COLUMNS = ["beta", "qfi_cts", "qfi_gibbs", "delta_qfi", "relative_entropy", "criterion_flag"]
VERIFY_COLUMNS = ["property", "trials", "failures", "max_residual", "tolerance", "passed"]


def qfi_rows(model: io.Model, grid) -> list[dict]:
    h, basis = model.hamiltonian, model.pointer_basis
    rows = []
    for b in grid:
        qfi_cts = metrology.qfi_analytic(states.cts(h, basis, b)).value
        qfi_eq = metrology.qfi_gibbs(h, b)
        step = 1e-3 * (1 + abs(b))
        flag, _ = metrology.outperformance_criterion(h, basis, b, step)
        rows.append({"beta": b, "qfi_cts": qfi_cts, "qfi_gibbs": qfi_eq, "delta_qfi": qfi_cts - qfi_eq,
                     "relative_entropy": -metrology.log_partition_ratio(h, basis, b), "criterion_flag": flag})
    return rows


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _grid_from(args, default_beta=None) -> list[float]:
    flags = (args.beta_start, args.beta_stop, args.beta_step)
    if all(f is None for f in flags):
        if default_beta is None:
            raise UsageError("a beta grid (--beta-start/--beta-stop/--beta-step) is required")
        return [default_beta]
    if any(f is None for f in flags):
        raise UsageError("--beta-start, --beta-stop and --beta-step must be given together")
    return SweepConfig(args.beta_start, args.beta_stop, args.beta_step).grid()


def parse_dims(text: str) -> tuple[int, ...]:
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
            dims = tuple(range(lo, hi + 1))
        else:
            dims = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"--dims: cannot parse {text!r}") from exc
    if not dims or min(dims) < 1:
        raise UsageError("--dims must list positive dimensions")
    return dims


def cmd_qubit_sweep(args) -> int:
    cfg = SweepConfig(args.beta_start, args.beta_stop, args.beta_step, args.omega, args.theta,
                      args.out, args.format)
    _emit(io.render(QUBIT_COLUMNS, qubit_sweep_rows(cfg), cfg.fmt), cfg.out)
    return EXIT_OK


def cmd_qfi(args) -> int:
    model = io.load_model(args.model)
    grid = _grid_from(args, model.beta)
    _emit(io.render(QFI_COLUMNS, qfi_rows(model, grid), args.format), args.out)
    return EXIT_OK


def cmd_process(args) -> int:
    spec = io.load_process(args.spec)
    report = process.analyze(spec)
    _emit(io.render(process.ThermoReport.columns(), [report.as_dict()], args.format), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    dims = parse_dims(args.dims)
    results = verify.run_all(args.seed, args.trials, dims)
    width = max(len(r.name) for r in results)
    print(f"{'property':<{width}}  trials  fail  max_residual  tolerance")
    for r in results:
        mark = "ok  " if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {r.trials:6d}  {r.failures:4d}  {r.max_residual:12.3e}  {r.tolerance:9.1e}  {mark}")
    failed = [r for r in results if not r.passed]
    for r in failed:
        print(f"FAILED {r.name}: {r.first_failure}", file=sys.stderr)
    if args.out:
        rows = [{"property": r.name, "trials": r.trials, "failures": r.failures,
                 "max_residual": r.max_residual, "tolerance": r.tolerance, "passed": r.passed} for r in results]
        _emit(_verify_csv(rows), args.out)
    print(f"{len(results) - len(failed)}/{len(results)} properties passed (seed={args.seed}, "
          f"trials={args.trials}, dims={','.join(map(str, dims))})")
    return EXIT_OK if not failed else EXIT_CONSISTENCY


def _verify_csv(rows) -> str:
    lines = [",".join(VERIFY_COLUMNS)]
    for row in rows:
        lines.append(",".join([row["property"]] + [io.fmt(row[c]) for c in VERIFY_COLUMNS[1:]]))
    return "\n".join(lines) + "\n"


def cmd_estimate(args) -> int:
    model = io.load_model(args.model)
    beta = args.beta if args.beta is not None else model.beta
    if beta is None:
        raise UsageError("--beta is required when the model file has no 'beta'")
    run = estimation.crb_experiment(model.hamiltonian, model.pointer_basis, beta,
                                    args.samples, args.repeats, args.seed)
    _emit(io.render(list(estimation.EstimationRun.CSV_COLUMNS), [run.csv_row()], args.format), args.out)
    summary = (f"beta={run.true_beta:g} N={run.n_samples} repeats={run.n_repeats} "
               f"mean(beta_hat)={run.beta_hat_mean:.6f} mse={run.mse:.4e} crb={run.crb:.4e} "
               f"ratio={run.ratio:.4f} clamped={run.n_clamped}")
    print(summary, file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="condtherm", description="Conditional thermal state thermometry toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def grid_flags(p, required: bool, start=None, stop=None, step=None):
        p.add_argument("--beta-start", type=float, default=start, required=required and start is None)
        p.add_argument("--beta-stop", type=float, default=stop, required=required and stop is None)
        p.add_argument("--beta-step", type=float, default=step, required=required and step is None)

    def output_flags(p):
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("qubit-sweep", help="delta QFI of the rotated qubit over a beta grid")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=math.pi / 4)
    grid_flags(p, True, 0.0, 5.0, 0.05)
    output_flags(p)
    p.set_defaults(func=cmd_qubit_sweep)

    p = sub.add_parser("qfi", help="CTS vs Gibbs Fisher information for a model file")
    p.add_argument("--model", required=True)
    grid_flags(p, False)
    output_flags(p)
    p.set_defaults(func=cmd_qfi)

    p = sub.add_parser("process", help="work / heat analysis of a unitary protocol")
    p.add_argument("--spec", required=True)
    output_flags(p)
    p.set_defaults(func=cmd_process)

    p = sub.add_parser("verify", help="run the seeded property suites")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--dims", default="2..6")
    p.add_argument("--out", help="also write the summary table as CSV")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("estimate", help="Monte Carlo Cramer-Rao saturation experiment")
    p.add_argument("--model", required=True)
    p.add_argument("--beta", type=float)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--repeats", type=int, default=200)
    p.add_argument("--seed", type=int, default=42)
    output_flags(p)
    p.set_defaults(func=cmd_estimate)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (io.ModelFormatError, PreconditionError, DomainError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CondThermError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
