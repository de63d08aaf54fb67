"""Command-line front end.

Each subcommand writes one JSON report (to ``--out`` or stdout) holding a
run manifest and the result.  Exit codes: 0 success, 2 invalid arguments,
3 hypothesis violation / infeasible / truncation too small, 4 internal
invariant breach (including a proved cover refuted by sampling).
"""

import argparse
import json
import os
import sys
import tempfile

from . import _kernels
from .audit import run_audits
from .catalog import EmbeddingSpec, classify, series_exponent, series_norm
from .errors import CoverRefuted, InvalidArgument, LorentzError
from .extremal import CSV_HEADER, SearchConfig, convergence_study, estimate_operator_norm
from .noncompact import (
    alpha_bracket,
    build_constant_cover,
    signflip_witness,
    span_estimate,
    span_upper_bound,
    spread_witness,
    verify_cover,
    weighted_example_cover,
    weighted_grid_cover,
)
from .norms import SpaceDescriptor, _parse_number, lorentz, norm
from .reports import RunManifest, csv_text, make_report, payload_text, write_json
from .sequences import FiniteSequence, distribution, rearrange

EXIT_OK, EXIT_INVALID, EXIT_HYPOTHESIS, EXIT_BREACH = 0, 2, 3, 4

# flags that do not affect the payload and are stripped from the recorded argv
_UNRECORDED = ("--out", "--csv", "--backend")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def _space(text):
    return SpaceDescriptor.parse(text)


def _number(text):
    try:
        return _parse_number(text)
    except ValueError:
        raise InvalidArgument(f"not a number: {text!r}") from None


def _load_json_arg(inline, path, what):
    if (inline is None) == (path is None):
        raise InvalidArgument(f"give exactly one of --{what} and --{what}-file")
    try:
        if path is not None:
            with open(path, encoding="utf-8") as fh:
                return json.load(fh)
        return json.loads(inline)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidArgument(f"cannot read {what}: {exc}") from None


def _sequence(args):
    data = _load_json_arg(args.seq, args.seq_file, "seq")
    if not isinstance(data, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in data
    ):
        raise InvalidArgument("a sequence must be a JSON array of numbers")
    return FiniteSequence(data)


def _centers(args):
    data = _load_json_arg(args.centers, args.centers_file, "centers")
    if not isinstance(data, list) or not all(isinstance(c, list) for c in data):
        raise InvalidArgument("centers must be a JSON array of arrays")
    return [FiniteSequence(c) for c in data]


def _spec(args):
    return EmbeddingSpec(_space(args.source), _space(args.target),
                         exploratory=getattr(args, "exploratory", False))


def _check_seed(seed):
    if not 0 <= seed < 1 << 64:
        raise InvalidArgument("seed must be a 64-bit unsigned integer")
    return seed


# ---------------------------------------------------------------------------
# subcommands: each returns (result, exit_code)
# ---------------------------------------------------------------------------

def cmd_norm(args):
    s = _space(args.space)
    a = _sequence(args)
    return {"space": s.label(), "sequence": a.tolist(), "value": norm(a, s)}, EXIT_OK


def cmd_rearrange(args):
    a = _sequence(args)
    out = {"sequence": a.tolist(), "rearrangement": rearrange(a).tolist()}
    if args.omega is not None:
        out["omega"] = args.omega
        out["distribution"] = distribution(a, args.omega)
    return out, EXIT_OK


def cmd_classify(args):
    spec = _spec(args)
    out = {"source": spec.source.label(), "target": spec.target.label()}
    out.update(classify(spec).to_dict())
    return out, EXIT_OK


def cmd_series_norm(args):
    p1, p2, q2 = _number(args.p1), _number(args.p2), _number(args.q2)
    br = series_norm(p1, p2, q2, rel_tol=args.rel_tol)
    return {"p1": p1, "p2": p2, "q2": q2, "exponent": series_exponent(p1, p2, q2),
            "rel_tol": args.rel_tol, "lo": br.lo, "hi": br.hi}, EXIT_OK


def _config(args):
    return SearchConfig(L=args.L, restarts=args.restarts, seed=_check_seed(args.seed),
                        max_iters=args.max_iters)


def cmd_estimate_norm(args):
    spec = _spec(args)
    res = estimate_operator_norm(spec, _config(args), workers=args.workers)
    out = {"source": spec.source.label(), "target": spec.target.label()}
    out.update(res.to_dict(include_argmax=args.argmax))
    return out, EXIT_OK


def cmd_converge(args):
    spec = _spec(args)
    try:
        Ls = [int(v) for v in args.L_values.split(",") if v.strip()]
    except ValueError:
        raise InvalidArgument("--L-values must be comma-separated integers") from None
    if not Ls:
        raise InvalidArgument("--L-values is empty")
    rows = convergence_study(spec, Ls, _config(args))
    text = csv_text(CSV_HEADER, [r.as_tuple() for r in rows])
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    out = {"source": spec.source.label(), "target": spec.target.label(),
           "header": list(CSV_HEADER), "rows": [list(r.as_tuple()) for r in rows]}
    return out, EXIT_OK


def cmd_span(args):
    s = _space(args.space)
    out = {"space": s.label(), "L": args.L, "samples": args.samples,
           "upper_bound": span_upper_bound(s).to_dict()}
    out["estimate"] = span_estimate(s, args.L, args.samples, _check_seed(args.seed))
    return out, EXIT_OK


def cmd_cover(args):
    s = _space(args.space)
    _check_seed(args.seed)
    if s.kind == "weighted_lp":
        source = lorentz(s.p, s.p)
        if args.construction == "example":
            cert = weighted_example_cover(s.p, args.L)
        else:
            cert = weighted_grid_cover(s.p, args.L, slack=args.slack)
    else:
        if args.rho is None:
            raise InvalidArgument("--rho is required for constant covers")
        source = s
        cert = build_constant_cover(s, args.rho, args.L)
    try:
        cert = verify_cover(cert, source, args.samples, args.seed)
    except CoverRefuted as exc:
        out = {"source": source.label(), "status": "refuted", "certificate": cert.to_dict(),
               "refutation": {"sample": exc.sample, "distance": exc.distance,
                              "radius": exc.radius}}
        return out, EXIT_BREACH
    out = {"source": source.label(), "status": "verified"}
    out.update(cert.to_dict())
    return out, EXIT_OK


def cmd_refute_spread(args):
    rep = spread_witness(_centers(args), _space(args.source), _space(args.target),
                         args.rho, lam=args.lam, L=args.L)
    return rep.to_dict(), EXIT_OK


def cmd_refute_signflip(args):
    return signflip_witness(_centers(args), args.rho).to_dict(), EXIT_OK


def cmd_alpha(args):
    spec = _spec(args)
    br = alpha_bracket(spec, L=args.L, samples=args.samples, seed=_check_seed(args.seed))
    out = {"source": spec.source.label(), "target": spec.target.label()}
    out.update(br.to_dict())
    return out, EXIT_OK


def cmd_audit(args):
    suites = run_audits(samples=args.samples, seed=_check_seed(args.seed))
    total = sum(s.violations for s in suites)
    out = {"samples": args.samples, "suites": [s.to_dict() for s in suites],
           "total_violations": total}
    return out, EXIT_OK if total == 0 else EXIT_BREACH


def cmd_replay(args):
    try:
        with open(args.report, encoding="utf-8") as fh:
            original = json.load(fh)
        manifest = original["manifest"]
        argv = list(manifest["argv"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InvalidArgument(f"cannot read report: {exc}") from None
    if argv and argv[0] == "replay":
        raise InvalidArgument("refusing to replay a replay report")
    fd, tmp = tempfile.mkstemp(suffix=".json")
    os.close(fd)
    try:
        code = main(["--backend", manifest.get("backend") or "auto"] + argv + ["--out", tmp])
        with open(tmp, encoding="utf-8") as fh:
            replayed = json.load(fh)
    finally:
        os.unlink(tmp)
    same = payload_text(original) == payload_text(replayed)
    return {"report": args.report, "replayed_exit_code": code, "identical": same}, (
        EXIT_OK if same else EXIT_BREACH
    )


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_seq(p):
    p.add_argument("--seq", help="JSON array, e.g. '[0,3,1,3]'")
    p.add_argument("--seq-file", help="file holding a JSON array")


def _add_centers(p):
    p.add_argument("--centers", help="JSON array of arrays")
    p.add_argument("--centers-file", help="file holding a JSON array of arrays")


def _add_pair(p, exploratory=False):
    p.add_argument("--source", required=True, help="lorentz:p,q | c0 | linf | wlp:p")
    p.add_argument("--target", required=True)
    if exploratory:
        p.add_argument("--exploratory", action="store_true",
                       help="allow pairs the catalog does not cover")


def _add_search(p):
    p.add_argument("--L", type=int, default=1000)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--max-iters", type=int, default=400)
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="report path (default: stdout)")

    parser = _Parser(prog="lorentzseq", description=__doc__.splitlines()[0])
    parser.add_argument("--backend", choices=("auto", "numba", "numpy"), default="auto",
                        help="kernel backend (default: numba when importable)")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("norm", cmd_norm, "quasi-norm of a finite sequence")
    p.add_argument("--space", required=True)
    _add_seq(p)

    p = add("rearrange", cmd_rearrange, "decreasing rearrangement and distribution function")
    _add_seq(p)
    p.add_argument("--omega", type=float, help="level for the distribution function")

    p = add("classify", cmd_classify, "embedding verdict from the catalog")
    _add_pair(p)

    p = add("series-norm", cmd_series_norm, "bracket for the series embedding constant")
    p.add_argument("--p1", required=True)
    p.add_argument("--p2", required=True)
    p.add_argument("--q2", required=True)
    p.add_argument("--rel-tol", type=float, default=1e-12)

    p = add("estimate-norm", cmd_estimate_norm, "numerical lower bound on the embedding norm")
    _add_pair(p, exploratory=True)
    _add_search(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--argmax", action="store_true", help="include the maximiser")

    p = add("converge", cmd_converge, "best value against truncation length")
    _add_pair(p)
    _add_search(p)
    p.add_argument("--L-values", required=True, help="comma-separated truncations")
    p.add_argument("--csv", help="also write the rows as CSV here")

    p = add("span", cmd_span, "span bound and sampled span estimate")
    p.add_argument("--space", required=True)
    p.add_argument("--L", type=int, default=64)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)

    p = add("cover", cmd_cover, "build a cover certificate and verify it by sampling")
    p.add_argument("--space", required=True,
                   help="source space for constant covers; wlp:p for the weighted example")
    p.add_argument("--rho", type=float)
    p.add_argument("--L", type=int, default=64)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--construction", choices=("example", "grid"), default="example",
                   help="weighted target only")
    p.add_argument("--slack", type=float, default=1e-2, help="grid cover radius slack")

    p = add("refute-spread", cmd_refute_spread, "spread witness against a proposed cover")
    _add_pair(p)
    _add_centers(p)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--lam", type=float, default=0.5)
    p.add_argument("--L", type=int)

    p = add("refute-signflip", cmd_refute_signflip, "sign-flip witness in c0")
    _add_centers(p)
    p.add_argument("--rho", type=float, required=True)

    p = add("alpha", cmd_alpha, "bracket for the measure of non-compactness")
    _add_pair(p)
    p.add_argument("--L", type=int, default=64)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)

    p = add("audit", cmd_audit, "randomised inequality audits")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)

    p = add("replay", cmd_replay, "rerun a report's manifest and compare payloads")
    p.add_argument("report")
    return parser


def _recorded_argv(argv):
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        name = tok.split("=", 1)[0]
        if name in _UNRECORDED:
            skip = "=" not in tok
            continue
        out.append(tok)
    return out


def _parameters(args):
    skip = {"func", "out", "csv", "backend", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INVALID
    _kernels.set_backend(args.backend)

    manifest = RunManifest(args.command, _parameters(args), seed=getattr(args, "seed", None),
                           argv=_recorded_argv(argv))
    try:
        result, code = args.func(args)
    except LorentzError as exc:
        code = exc.exit_code
        result = {"error": type(exc).__name__, "message": str(exc)}
        print(f"lorentzseq {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
    except (ValueError, OverflowError) as exc:
        code = EXIT_INVALID
        result = {"error": type(exc).__name__, "message": str(exc)}
        print(f"lorentzseq {args.command}: {exc}", file=sys.stderr)
    text = write_json(make_report(manifest, result), args.out)
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
    return code

