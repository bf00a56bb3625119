"""Command-line front end: ``spongedim <command> --spec FILE [options]``.

Spec documents are JSON::

    {"r": 2, "m": [2, 3],
     "subshift": {"kind": "full", "digits": [[0, 0], [1, 0], [1, 2]]}}

An ``"sft"`` subshift additionally carries ``"transitions"``: for each digit
(by position in ``digits``) the list of allowed successor positions.

Exit codes: 0 success, 1 input error, 2 verification failure, 3 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass

from .dimension import analyze
from .entropy import entropies
from .errors import (
    ConvergenceError,
    ResourceLimitError,
    SpecError,
    SpongeError,
    VerificationError,
)
from .geometry import verify_sandwich
from .measures import build_fN
from .subshift import DEFAULT_CAP, FULL, SFT, SpongeSpec
from .variational import markov_lower_bound, optimize_bernoulli, parry_measure
from .weighted import exponents_and_weights, weighted_entropy_estimate

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_RESOURCE = 0, 1, 2, 3

COMMANDS = ("analyze", "entropy", "weighted-entropy", "oracle", "optimize", "measure")

_TOP_FIELDS = {"r", "m", "subshift"}
_SUB_FIELDS = {FULL: {"kind", "digits"}, SFT: {"kind", "digits", "transitions"}}


# -- spec documents -----------------------------------------------------------


def _int_list(x, where):
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise SpecError(f"{where}: expected a list of integers")
    return x


def parse_spec(document) -> SpongeSpec:
    """Validate a spec document (JSON text or already-decoded dict).

    Raises
    ------
    SpecError
        With the JSON line/column for syntax errors and the field path for
        schema violations.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SpecError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(document, dict):
        raise SpecError("top level: expected an object")
    extra = set(document) - _TOP_FIELDS
    if extra:
        raise SpecError(f"top level: unknown field(s) {sorted(extra)}")
    missing = _TOP_FIELDS - set(document)
    if missing:
        raise SpecError(f"top level: missing field(s) {sorted(missing)}")
    r = document["r"]
    if not isinstance(r, int) or isinstance(r, bool) or r < 1:
        raise SpecError("r: expected a positive integer")
    m = _int_list(document["m"], "m")
    if len(m) != r:
        raise SpecError(f"m: expected {r} moduli, got {len(m)}")
    sub = document["subshift"]
    if not isinstance(sub, dict):
        raise SpecError("subshift: expected an object")
    kind = sub.get("kind")
    if kind not in _SUB_FIELDS:
        raise SpecError(f"subshift.kind: expected 'full' or 'sft', got {kind!r}")
    extra = set(sub) - _SUB_FIELDS[kind]
    if extra:
        raise SpecError(f"subshift: unknown field(s) {sorted(extra)} for kind {kind!r}")
    missing = _SUB_FIELDS[kind] - set(sub)
    if missing:
        raise SpecError(f"subshift: missing field(s) {sorted(missing)}")
    digits = sub["digits"]
    if not isinstance(digits, list):
        raise SpecError("subshift.digits: expected a list")
    digits = [tuple(_int_list(d, f"subshift.digits[{k}]")) for k, d in enumerate(digits)]
    if kind == FULL:
        return SpongeSpec.full(m, digits)
    trans = sub["transitions"]
    if not isinstance(trans, list):
        raise SpecError("subshift.transitions: expected a list")
    trans = [_int_list(t, f"subshift.transitions[{k}]") for k, t in enumerate(trans)]
    return SpongeSpec.sft(m, digits, successors=trans)


def dump_spec(spec: SpongeSpec) -> dict:
    """Canonical document for ``spec`` (digits sorted)."""
    sub = {"kind": spec.kind, "digits": [list(d) for d in spec.digits]}
    if spec.kind == SFT:
        sub["transitions"] = [list(s) for s in spec.successors]
    return {"r": spec.r, "m": list(spec.m), "subshift": sub}


# -- configuration ------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec_path: str
    N_max: int = 4
    M_max: int = 6
    N: int = 1
    M: int = 2
    block: int = 4
    precision: int | None = None
    cap: int = DEFAULT_CAP
    fmt: str = "text"
    out: str | None = None

    def __post_init__(self):
        for name in ("N_max", "M_max", "N", "M", "block", "cap"):
            if getattr(self, name) < 1:
                raise SpecError(f"--{name.replace('_', '').lower()} must be >= 1")


def _precision(text: str):
    if text == "double":
        return None
    if text.startswith("ext:"):
        try:
            bits = int(text[4:])
        except ValueError:
            bits = 0
        if bits >= 53:
            return bits
    raise argparse.ArgumentTypeError("expected 'double' or 'ext:BITS' with BITS >= 53")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="spongedim",
        description="Mean dimensions of Bedford-McMullen sponge systems.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--spec", required=True, help="JSON spec document")
    p.add_argument("--Nmax", type=int, default=4, help="largest word length (default 4)")
    p.add_argument("--Mmax", type=int, default=6, help="largest scale index (default 6)")
    p.add_argument("--N", type=int, default=1, help="word length for oracle/measure")
    p.add_argument("--M", type=int, default=2, help="scale index for oracle")
    p.add_argument("--block", type=int, default=4, help="block length for Markov bounds")
    p.add_argument("--precision", type=_precision, default=None, metavar="double|ext:BITS")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap")
    p.add_argument("--format", dest="fmt", choices=("text", "json", "csv"), default="text")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


# -- rendering ----------------------------------------------------------------


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _render(fmt, payload: dict, table: list, text: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        return _csv(table)
    return text


def _fmt(x) -> str:
    return f"{x:.12g}"


def cmd_analyze(spec, cfg):
    rep = analyze(spec, cfg.N_max, cfg.M_max, cfg.block, cfg.precision, cfg.cap)
    d = rep.to_dict()
    lines = [
        f"moduli            {list(spec.m)} ({spec.kind}, {spec.n_digits} digits)",
        f"weights w_a       {[round(x, 9) for x in rep.weights.w]}",
    ]
    for e in rep.entropies:
        lines.append(f"h(level {e.level})        {_fmt(e.exact_value)}  (Fekete <= {_fmt(e.fekete_upper)})")
    lines += [
        f"mdim_M            {_fmt(rep.mdim_M)}",
        f"mdim_H            [{_fmt(rep.mdim_H_lower)}, {_fmt(rep.mdim_H_upper)}]"
        f"  width {rep.mdim_H_width:.3g}  lower via {rep.lower_method}",
        f"coincidence       {rep.coincidence_flag} ({rep.coincidence_status})",
    ]
    if rep.classical:
        lines.append(f"classical dims    Minkowski {_fmt(rep.classical[0])}, "
                     f"Hausdorff {_fmt(rep.classical[1])}")
    problems = rep.check()
    lines.append("checks            " + ("ok" if not problems else "; ".join(problems)))
    table = [["N", "log_Z_N_over_N"]] + [[n, repr(v)] for n, v in rep.weighted_table]
    code = EXIT_VERIFY if problems else EXIT_OK
    return _render(cfg.fmt, d, table, "\n".join(lines) + "\n"), code


def cmd_entropy(spec, cfg):
    ents = entropies(spec)
    payload = {"levels": [
        {"level": e.level, "exact": e.exact_value, "fekete_upper": e.fekete_upper,
         "ratio_estimate": e.ratio_estimate, "N_used": e.N_used,
         "enclosure": [float(x) for x in e.enclosure]} for e in ents]}
    table = [["level", "exact", "fekete_upper", "ratio_estimate"]] + [
        [e.level, repr(e.exact_value), repr(e.fekete_upper), repr(e.ratio_estimate)] for e in ents]
    text = "".join(f"level {e.level}: h = {_fmt(e.exact_value)} nats, "
                   f"Fekete bound {_fmt(e.fekete_upper)} (N <= {e.N_used})\n" for e in ents)
    bad = any(e.exact_value > e.fekete_upper + 1e-9 for e in ents)
    return _render(cfg.fmt, payload, table, text), EXIT_VERIFY if bad else EXIT_OK


def cmd_weighted(spec, cfg):
    est = weighted_entropy_estimate(spec, None, cfg.N_max, cfg.precision, cfg.cap)
    payload = {"fekete_upper": est.fekete_upper, "sequence": list(est.sequence),
               "log_z": list(est.log_z), "weights": list(exponents_and_weights(spec.m).w)}
    table = [["N", "log_Z_N_over_N"]] + [[n, repr(v)] for n, v in enumerate(est.sequence, 1)]
    text = "".join(f"N={n}  log Z_N / N = {_fmt(v)}\n" for n, v in enumerate(est.sequence, 1))
    text += f"upper bound on weighted entropy: {_fmt(est.fekete_upper)} nats\n"
    return _render(cfg.fmt, payload, table, text), EXIT_OK


def cmd_oracle(spec, cfg):
    rep = verify_sandwich(spec, cfg.N, cfg.M)
    payload = {"N": rep.N, "M": rep.M, "L": list(rep.L), "formula_count": rep.formula_count,
               "cube_count": rep.cube_count, "separated_count": rep.separated_count,
               "diameters_ok": rep.diameters_ok, "separated_ok": rep.separated_ok,
               "verified": rep.verified}
    table = [["N", "M", "cubes", "separated", "formula", "verified"],
             [rep.N, rep.M, rep.cube_count, rep.separated_count, rep.formula_count, rep.verified]]
    return _render(cfg.fmt, payload, table, rep.summary() + "\n"), (
        EXIT_OK if rep.verified else EXIT_VERIFY)


def cmd_optimize(spec, cfg):
    if spec.kind == FULL:
        model, value = optimize_bernoulli(spec)
        masses = [[list(d), float(x)] for d, x in zip(spec.digits, model.p)]
        payload = {"model": "bernoulli", "value": value, "masses": masses}
        table = [["digit", "mass"]] + [[" ".join(map(str, d)), repr(x)] for d, x in masses]
        text = f"Bernoulli optimum {_fmt(value)} nats\n" + "".join(
            f"  {tuple(d)}: {_fmt(x)}\n" for d, x in masses)
    else:
        model = parry_measure(spec)
        value = markov_lower_bound(spec, block=cfg.block)
        payload = {"model": "parry", "block": cfg.block, "value": value,
                   "stationary": [float(x) for x in model.pi]}
        table = [["block", "value"]] + [
            [b, repr(markov_lower_bound(spec, block=b))] for b in range(1, cfg.block + 1)]
        text = f"Parry-measure lower bound (block {cfg.block}): {_fmt(value)} nats\n"
    return _render(cfg.fmt, payload, table, text), EXIT_OK


def cmd_measure(spec, cfg):
    mu = build_fN(spec, None, cfg.N, cfg.cap)
    t = mu.ztable.table
    words = [t.word(spec.r, k) for k in range(t.count(spec.r))]
    norm, fact = mu.normalization_error(), mu.factorization_error()
    payload = {"N": cfg.N, "normalization_error": norm, "factorization_error": fact,
               "log_Z_N": mu.ztable.log_total,
               "masses": [[[list(a) for a in u], float(x)] for u, x in zip(words, mu.f)]}
    table = [["word", "mass"]] + [
        [" ".join("".join(map(str, a)) for a in u), repr(float(x))] for u, x in zip(words, mu.f)]
    text = (f"f_N on {len(words)} words (N={cfg.N}): normalization error {norm:.3g}, "
            f"factorization error {fact:.3g}\n")
    ok = norm <= 1e-10 and fact <= 1e-12
    return _render(cfg.fmt, payload, table, text), EXIT_OK if ok else EXIT_VERIFY


_HANDLERS = {
    "analyze": cmd_analyze,
    "entropy": cmd_entropy,
    "weighted-entropy": cmd_weighted,
    "oracle": cmd_oracle,
    "optimize": cmd_optimize,
    "measure": cmd_measure,
}


def run(cfg: RunConfig) -> tuple:
    """Execute one command; returns ``(output text, exit code)``."""
    with open(cfg.spec_path) as fh:
        spec = parse_spec(fh.read())
    return _HANDLERS[cfg.command](spec, cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig(args.command, args.spec, args.Nmax, args.Mmax, args.N, args.M,
                        args.block, args.precision, args.cap, args.fmt, args.out)
        text, code = run(cfg)
    except (OSError, SpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (VerificationError, ConvergenceError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except SpongeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
