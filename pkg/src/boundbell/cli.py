"""Command-line entry point: ``boundbell <command> [flags]``.

Exit status is 0 on success, 1 on invalid flags and 2 on numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import bell, lhv, mermin, qubits, witnesses

MAX_VIOLATION_QUBITS = 10
MAX_MK_QUBITS = 10
WITNESS_SAMPLES = 2000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x):
    # avoid printing -0.00000 for tiny negative round-off
    x = round(x, 5) + 0.0
    return f"{x:.5f}"


def _csv_value(v):
    if isinstance(v, float):
        text = format(v, ".17g")
        # keep floats recognizable as floats when read back ("0" would parse as int)
        return text if any(c in text for c in ".einf") else text + ".0"
    if v is None:
        return ""
    return str(v)


def render_table(rows, columns, fmt):
    if fmt == "json":
        return json.dumps([{c: r[c] for c in columns} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_csv_value(r[c]) for c in columns])
    return buf.getvalue()


def read_table(path):
    """Read a CSV table written by this tool back into rows of floats/ints/strings."""

    def parse(text):
        if text == "":
            return None
        for conv in (int, float):
            try:
                return conv(text)
            except ValueError:
                pass
        return text

    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [{k: parse(v) for k, v in row.items()} for row in reader]


def _write(args, rows, columns, default_stdout=False):
    text = render_table(rows, columns, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    elif default_stdout:
        sys.stdout.write(text)


def _require(cond, message):
    if not cond:
        raise UsageError(message)


def _alpha(args):
    return 0.0 if args.alpha is None else args.alpha


def cmd_violation(args):
    n = args.n
    _require(n is not None and 2 <= n <= MAX_VIOLATION_QUBITS, f"--n must lie in [2, {MAX_VIOLATION_QUBITS}]")
    _require(0.0 <= args.noise <= 1.0, "--noise must lie in [0, 1]")
    alpha = _alpha(args)
    op = bell.rotate_operator(bell.bell_matrix_closed_form(n), alpha, n)
    rho = qubits.mix_with_noise(qubits.dur_state(n, alpha), args.noise)
    value = qubits.expectation(op, rho)
    bound = bell.classical_bound_three(n)
    ratio = abs(value) / bound
    violated = ratio > 1
    print(f"N={n} alpha={_fmt(alpha)} noise={_fmt(args.noise)}")
    print(f"value    {_fmt(value)}")
    print(f"bound    {_fmt(bound)}")
    print(f"ratio    {_fmt(ratio)}")
    print(f"verdict  {'VIOLATED' if violated else 'NOT VIOLATED'}")
    row = dict(N=n, alpha=alpha, noise=args.noise, value=value, bound=bound, ratio=ratio,
               violated=int(violated))
    _write(args, [row], list(row))


def threshold_rows(n_min, n_max):
    rows = []
    for n in range(n_min, n_max + 1):
        v_mk = mermin.noise_threshold_mk(n) if n <= MAX_MK_QUBITS else None
        rows.append(dict(N=n, v_three=bell.noise_threshold_three(n), v_mk=v_mk))
    return rows


def cmd_thresholds(args):
    n_min = args.n_min if args.n_min is not None else 4
    n_max = args.n_max if args.n_max is not None else 10
    _require(4 <= n_min <= n_max <= qubits.MAX_QUBITS,
             f"need 4 <= --n-min <= --n-max <= {qubits.MAX_QUBITS}")
    rows = threshold_rows(n_min, n_max)
    for r in rows:
        missing = [name for name, key in (("three-setting", "v_three"), ("Mermin-Klyshko", "v_mk"))
                   if r[key] == 0.0]
        if missing:
            print(f"# N={r['N']}: no violation ({', '.join(missing)})", file=sys.stderr)
    _write(args, rows, ["N", "v_three", "v_mk"], default_stdout=True)


def cmd_witness(args):
    n = args.n
    _require(n is not None and 2 <= n <= qubits.MAX_QUBITS, f"--n must lie in [2, {qubits.MAX_QUBITS}]")
    kappa = 1.0 if args.kappa is None else args.kappa
    _require(0.0 <= kappa <= 1.0, "--kappa must lie in [0, 1]")
    alpha = _alpha(args)
    value = witnesses.detection_value(n, kappa, alpha)
    scan = witnesses.positivity_scan(witnesses.s_witness(n, kappa, alpha), WITNESS_SAMPLES, args.seed)
    kappa_star = witnesses.detection_threshold_kappa(n)
    detected = value < 0
    print(f"N={n} kappa={_fmt(kappa)} alpha={_fmt(alpha)}")
    print(f"detection       {_fmt(value)}")
    print(f"positivity_min  {_fmt(scan.minimum)}")
    print(f"kappa_threshold {_fmt(kappa_star)}")
    print(f"verdict         {'DETECTED' if detected else 'NOT DETECTED'}")
    row = dict(N=n, kappa=kappa, alpha=alpha, detection=value, positivity_min=scan.minimum,
               kappa_threshold=kappa_star, detected=int(detected))
    _write(args, [row], list(row))


def _scan_state(args, n, alpha):
    if args.state == "dur":
        rho = qubits.dur_state(n, alpha)
    elif args.state == "ghz":
        rho = qubits.projector(qubits.ghz(n, alpha))
    else:
        rho = qubits.maximally_mixed(n)
    return qubits.mix_with_noise(rho, args.noise)


def cmd_lp_scan(args):
    n = args.n
    _require(n is not None and 1 <= n <= qubits.MAX_QUBITS, "--n is required")
    _require(args.state != "dur" or n >= 2, "the dur state needs --n >= 2")
    _require(args.settings >= 1, "--settings must be at least 1")
    _require(args.trials >= 1, "--trials must be at least 1")
    _require(0.0 <= args.noise <= 1.0, "--noise must lie in [0, 1]")
    rho = _scan_state(args, n, _alpha(args))
    report = lhv.random_setting_scan(rho, args.settings, args.trials, seed=args.seed)
    rows = [dict(trial=t.trial, verdict=t.verdict, residual=t.residual, gap=t.gap) for t in report.trials]
    _write(args, rows, ["trial", "verdict", "residual", "gap"])
    print(report.summary())
    if report.failed:
        return 2
    return 0


def cmd_bound_enum(args):
    n = args.n
    _require(n is not None and 1 <= n <= bell.MAX_ENUMERATION_QUBITS,
             f"--n must lie in [1, {bell.MAX_ENUMERATION_QUBITS}]")
    enumerated = bell.lhv_bound_enumeration(n)
    analytic = bell.classical_bound_three(n)
    print(f"N={n} enumerated={_fmt(enumerated)} analytic={_fmt(analytic)}")
    _write(args, [dict(N=n, enumerated=enumerated, analytic=analytic)], ["N", "enumerated", "analytic"])


COMMANDS = {
    "violation": cmd_violation,
    "thresholds": cmd_thresholds,
    "witness": cmd_witness,
    "lp-scan": cmd_lp_scan,
    "bound-enum": cmd_bound_enum,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result table to this path")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = _Parser(prog="boundbell", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("violation", parents=[common], help="three-setting Bell value on the bound entangled family")
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--noise", type=float, default=0.0)

    p = sub.add_parser("thresholds", parents=[common], help="noise thresholds per N (figure data)")
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)

    p = sub.add_parser("witness", parents=[common], help="strengthened witness detection and positivity")
    p.add_argument("--n", type=int)
    p.add_argument("--kappa", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("lp-scan", parents=[common], help="LP local-model test over random settings")
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--settings", type=int, default=3)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--state", choices=("dur", "ghz", "mixed"), default="dur")

    p = sub.add_parser("bound-enum", parents=[common], help="brute-force local bound of the three-setting inequality")
    p.add_argument("--n", type=int)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        status = COMMANDS[args.command](args)
    except (UsageError, lhv.CapExceeded) as exc:
        print(f"boundbell: error: {exc}", file=sys.stderr)
        return 1
    except (lhv.NumericalFailure, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"boundbell: numerical failure: {exc}", file=sys.stderr)
        return 2
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
