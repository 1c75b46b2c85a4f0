"""Command-line entry point: ``qperc <subcommand> ...``.

Exit codes: 0 on success, 2 on a usage error, 1 on a runtime error.
JSON output is two lines (a ``{"meta": ...}`` header, then the payload);
CSV output starts with a ``# meta: {...}`` comment line.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .errors import QPercError
from .harness import HistogramSpec, SweepSpec, histogram, sweep, tau_rule_check
from .perceptron import TrainingSet, accuracy, classical_activation, quantize_weights, to_phase, train
from .qpe import first_bit_success_probability
from .qperceptron import QPerceptronConfig, QuantumClassifier, gate_count_report, run


def _int_list(text):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _variant(text):
    if text.upper() not in ("A", "B"):
        raise argparse.ArgumentTypeError("variant must be a or b")
    return text.upper()


def _meta(command: str, args) -> dict:
    spec = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "out", "func")}
    return {"tool": "qperc", "version": __version__, "command": command,
            "seed": spec.get("seed"), "spec": spec}


def _render_json(meta: dict, payload: dict) -> str:
    return json.dumps({"meta": meta}) + "\n" + json.dumps(payload) + "\n"


def _render_csv(meta: dict, header, rows) -> str:
    buf = io.StringIO()
    buf.write("# meta: " + json.dumps(meta) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_run(args):
    w = np.array(args.weights)
    x = np.array(args.input)
    n = args.n if args.n is not None else w.size
    if w.size != n or x.size != n:
        raise QPercError(f"--n {n} does not match {w.size} weights and {x.size} inputs")
    config = QPerceptronConfig(n=n, tau=args.tau, variant=args.variant, delta=args.delta,
                               backend=args.backend, shots=args.shots)
    result = run(config, w, x, args.seed)
    # net input of the weights actually encoded (quantized for variant B)
    encoded = quantize_weights(w, args.delta).reconstruct() if config.variant == "B" else w
    phase = to_phase(encoded, x)
    probs = result.distribution.probabilities
    payload = {
        "n": n,
        "tau": args.tau,
        "variant": config.variant,
        "backend": config.backend,
        "h": phase.h,
        "phi": result.phi,
        "classical_output": classical_activation(w, x),
        "output": result.output,
        "p_fire": result.p_fire,
        "success_probability": first_bit_success_probability(result.phi, args.tau),
        "most_likely_j": result.distribution.argmax(),
        "distribution": [float(p) for p in probs],
    }
    return _render_json(_meta("run", args), payload)


def cmd_sweep(args):
    spec = SweepSpec(args.n, args.tau, args.trials, args.seed, args.backend)
    report = sweep(spec)
    meta = _meta("sweep", args)
    if args.format == "json":
        return _render_json(meta, report.as_dict())
    rows = [(c.n, c.tau, c.trials, repr(c.success_mean), repr(c.success_stderr)) for c in report.cells]
    return _render_csv(meta, ("n", "tau", "trials", "success_mean", "success_stderr"), rows)


def cmd_hist(args):
    report = histogram(HistogramSpec(args.n, args.samples, args.bins, args.seed))
    return _render_json(_meta("hist", args), report.as_dict())


def cmd_tau_rule(args):
    rows = tau_rule_check(args.n, args.trials, args.seed)
    meta = _meta("tau-rule", args)
    if args.format == "json":
        return _render_json(meta, {"rows": [r.__dict__ for r in rows]})
    return _render_csv(meta, ("n", "tau_rule", "trials", "success_mean", "success_stderr"),
                       [(r.n, r.tau_rule, r.trials, repr(r.success_mean), repr(r.success_stderr))
                        for r in rows])


def cmd_train(args):
    data = TrainingSet.from_csv(args.data)
    if args.classifier == "quantum":
        classifier = QuantumClassifier(args.tau, args.shots, args.backend, seed=args.seed)
    else:
        classifier = classical_activation
    result = train(data, args.eta, args.epochs, classifier, rng_seed=args.seed)
    payload = {
        "n": data.n,
        "examples": len(data),
        "classifier": args.classifier,
        "weights": [float(v) for v in result.weights],
        "epochs_used": result.epochs_used,
        "final_accuracy": result.final_accuracy,
        "classical_accuracy": accuracy(result.weights, data),
    }
    return _render_json(_meta("train", args), payload)


def cmd_gates(args):
    report = gate_count_report(args.n, args.tau, args.variant, args.delta or 1)
    return _render_json(_meta("gates", args), report.as_dict())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qperc", description="Quantum perceptron simulator")
    parser.add_argument("--version", action="version", version=f"qperc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=0)
        return p

    p = add("run", cmd_run, "run one quantum perceptron")
    p.add_argument("--n", type=int)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--weights", type=_float_list, required=True)
    p.add_argument("--input", type=_int_list, required=True)
    p.add_argument("--variant", type=_variant, default="A")
    p.add_argument("--delta", type=int)
    p.add_argument("--backend", choices=("analytic", "gate-level"), default="gate-level")
    p.add_argument("--shots", type=int, default=1)

    p = add("sweep", cmd_sweep, "success probability over random perceptrons")
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--tau", type=_int_list, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--backend", choices=("analytic", "gate-level"), default="analytic")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("hist", cmd_hist, "histogram of the normalised net input")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--bins", type=int, default=50)

    p = add("tau-rule", cmd_tau_rule, "empirical success at tau = ceil(log2(10 sqrt n))")
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("train", cmd_train, "train a perceptron from a CSV training set")
    p.add_argument("--data", required=True)
    p.add_argument("--eta", type=float, default=0.125)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--classifier", choices=("classical", "quantum"), default="classical")
    p.add_argument("--tau", type=int, default=8)
    p.add_argument("--shots", type=int, default=1)
    p.add_argument("--backend", choices=("analytic", "gate-level"), default="analytic")

    p = add("gates", cmd_gates, "gate counts: formula vs constructed circuit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--variant", type=_variant, default="A")
    p.add_argument("--delta", type=int)
    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _emit(args.func(args), args.out)
    except (QPercError, OSError) as exc:
        print(f"qperc {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
