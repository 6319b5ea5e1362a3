"""Command-line entry point: ``asynca <subcommand> ...``.

Every artifact carries a manifest (``#`` comment lines in CSV/PBM, a
``manifest`` key in JSON) holding the full parameter set, so re-running with
the same manifest reproduces the same bytes. Exit codes: 0 success, 2 usage or
input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import classify_empirical, classify_exact, random_configuration, rows_to_csv, rows_to_json, scan_minimal
from .io import density_csv, to_ascii, to_pbm
from .lattice import Configuration
from .rules import MINIMAL_RULES
from .schemes import EnumerationLimitError, Scheme, UpdateScheme, space_time, spawn_rngs
from .theorem import (
    both_attractor_rules,
    convergent_minimal_rules,
    skew_convergence_conditions,
    validate_skew_convergence,
)

EXIT_USAGE = 2
EXIT_LIMIT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _manifest(args) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    return {"tool": "asynca", "version": __version__, "command": args.command, "params": params}


def _manifest_lines(args) -> list[str]:
    return ["manifest " + json.dumps(_manifest(args), sort_keys=True)]


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(args, payload) -> str:
    return json.dumps({"manifest": _manifest(args), "result": payload}, indent=2, sort_keys=True) + "\n"


def _scheme(args) -> UpdateScheme:
    if args.alpha is not None and args.scheme != "alpha":
        raise UsageError("--alpha only applies to --scheme alpha")
    return UpdateScheme.parse(args.scheme, args.alpha)


def _int_range(text: str) -> range:
    try:
        a, b = text.split(":")
        lo, hi = int(a), int(b)
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected a:b") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _rule_list(text: str) -> list[int]:
    try:
        rules = [int(r) for r in text.split(",") if r.strip()]
    except ValueError:
        raise UsageError(f"bad rule list {text!r}") from None
    if not rules or any(not 0 <= r <= 255 for r in rules):
        raise UsageError(f"rules must be in 0..255: {text!r}")
    return rules


def _require_seed(args, why: str) -> None:
    if args.seed is None:
        raise UsageError(f"--seed is required for {why}")


# -- subcommands -------------------------------------------------------------


def cmd_simulate(args) -> None:
    scheme = _scheme(args)
    if args.steps < 0:
        raise UsageError("--steps must be >= 0")
    stochastic = scheme.kind is not Scheme.SYNC or args.initial is None
    if stochastic:
        _require_seed(args, "stochastic simulation")
    init_rng, sel_rng = spawn_rngs(args.seed if args.seed is not None else 0, 2)
    if args.initial is not None:
        x0 = Configuration.from_string(args.initial)
        if args.n is not None and args.n != x0.n:
            raise UsageError(f"--n {args.n} disagrees with --initial of length {x0.n}")
    else:
        if args.n is None:
            raise UsageError("--n is required without --initial")
        if not 0.0 <= args.d_ini <= 1.0:
            raise UsageError("--d-ini must be in [0, 1]")
        x0 = Configuration.from_array(random_configuration(args.n, args.d_ini, init_rng))
    rows = space_time(args.rule, x0, scheme, args.steps, sel_rng)
    meta = _manifest_lines(args)
    if args.format == "pbm":
        text = to_pbm(rows, meta)
    elif args.format == "txt":
        text = to_ascii(rows)
    elif args.format == "csv":
        text = density_csv(rows.mean(axis=1), meta)
    else:
        text = _json(args, {
            "rows": ["".join(map(str, r)) for r in rows],
            "density": [round(float(d), 6) for d in rows.mean(axis=1)],
        })
    _emit(args, text)


def cmd_classify(args) -> None:
    scheme = _scheme(args)
    if args.empirical:
        _require_seed(args, "empirical classification")
        report = classify_empirical(args.rule, args.n, scheme, args.trials, args.max_updates, args.seed,
                                    d_ini=args.d_ini)
        payload = report.to_dict()
    else:
        s = classify_exact(args.rule, args.n, scheme)
        payload = s.to_dict()
        payload["point_attractor_configurations"] = payload.pop("point_attractors")
        payload["point_attractors"] = s.dynamics.num_point_attractors
        payload["closed_classes"] = s.dynamics.num_closed_classes
    _emit(args, _json(args, payload))


def cmd_scan(args) -> None:
    scheme = _scheme(args)
    if args.mode == "empirical":
        _require_seed(args, "empirical scans")
    rules = _rule_list(args.rules) if args.rules else MINIMAL_RULES
    rows = scan_minimal(scheme, _int_range(args.n_range), args.mode, rules=rules,
                        trials=args.trials, max_updates=args.max_updates,
                        seed=args.seed if args.seed is not None else 0)
    if args.format == "json":
        text = _json(args, json.loads(rows_to_json(rows)))
    else:
        text = "".join(f"# {line}\n" for line in _manifest_lines(args)) + rows_to_csv(rows)
    _emit(args, text)


def cmd_theorem(args) -> None:
    if args.rule is not None:
        rules = [args.rule]
    else:
        rules = convergent_minimal_rules(all_rules=args.all_rules)
    if args.validate:
        reports = [validate_skew_convergence(r, _int_range(args.validate)) for r in rules]
        reports = [r for r in reports if r.applicable]
        _emit(args, _json(args, [r.to_dict() for r in reports]))
        return
    if args.json:
        payload = [skew_convergence_conditions(r).to_dict() for r in rules]
        if args.rule is None:
            payload = {
                "rules": payload,
                "both": both_attractor_rules(all_rules=args.all_rules),
                "count": len(payload),
            }
        _emit(args, _json(args, payload))
        return
    if args.rule is not None:
        v = skew_convergence_conditions(args.rule)
        _emit(args, f"{v.rule} to_zero={v.to_zero} to_one={v.to_one}\n")
        return
    _emit(args, "".join(f"{r}\n" for r in rules))


def cmd_commclasses(args) -> None:
    scheme = _scheme(args)
    s = classify_exact(args.rule, args.n, scheme)
    classes = s.closed_classes()
    if not args.json:
        _emit(args, f"{len(classes)}\n")
        return
    payload = {
        "rule": args.rule,
        "n": args.n,
        "scheme": scheme.kind.value,
        "count": len(classes),
        "complete": classes.complete,
        "sizes": [c.size for c in classes],
    }
    if args.members:
        payload["classes"] = [[str(x) for x in c.configurations(args.n)] for c in classes]
    _emit(args, _json(args, payload))


def cmd_cluster(args) -> None:
    from .clustering import EncodingSpec, build_encoding, encode, iterative_cluster, load_csv, validity_indices

    _require_seed(args, "clustering")
    drop = [c for c in (args.drop or "").split(",") if c]
    ds = load_csv(args.input, id_column=args.id_column, drop=drop)
    spec = EncodingSpec.load(args.encoding) if args.encoding else build_encoding(ds)
    enc = encode(ds, spec)
    rules = _rule_list(args.rules) if args.rules else None
    result = iterative_cluster(enc, args.k, rules, args.seed, stall_limit=args.stall_limit)
    labels = result.labels
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = "".join(f"# {line}\n" for line in _manifest_lines(args))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "configuration", "cluster"])
    for oid, s, lab in zip(enc.ids, enc.strings, labels):
        w.writerow([oid, s, int(lab)])
    (out / "labels.csv").write_text(meta + buf.getvalue())
    (out / "levels.json").write_text(_json(args, result.to_dict()))
    (out / "encoding.json").write_text(spec.to_json() + "\n")
    if ds.numeric_matrix().shape[1] and 2 <= result.final.num_clusters < len(ds):
        indices = validity_indices(ds, labels).to_dict()
    else:
        indices = None
    (out / "indices.json").write_text(_json(args, indices))
    sys.stdout.write(f"{result.final.num_clusters} clusters, {len(result.levels) - 1} levels -> {out}\n")


# -- parser ------------------------------------------------------------------


def _add_scheme(p, default=None):
    p.add_argument("--scheme", choices=[s.value for s in Scheme], default=default,
                   required=default is None)
    p.add_argument("--alpha", type=float, default=None, help="update probability (alpha scheme)")


def _rule_arg(text: str) -> int:
    r = int(text)
    if not 0 <= r <= 255:
        raise argparse.ArgumentTypeError("rule must be in 0..255")
    return r


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="asynca", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"asynca {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="space-time diagram or density trace")
    p.add_argument("--rule", type=_rule_arg, required=True)
    p.add_argument("--n", type=int)
    _add_scheme(p)
    p.add_argument("--steps", type=int, required=True, help="normalized time steps")
    p.add_argument("--seed", type=int)
    p.add_argument("--initial", help="explicit initial configuration, e.g. 0010110")
    p.add_argument("--d-ini", type=float, default=0.5, help="initial density when random")
    p.add_argument("--format", choices=["pbm", "txt", "csv", "json"], default="pbm")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("classify", help="dynamics class of one rule")
    p.add_argument("--rule", type=_rule_arg, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_scheme(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--empirical", action="store_true")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--max-updates", type=int, default=100_000)
    p.add_argument("--d-ini", type=float, default=0.5)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("scan", help="classify the minimal rules over a size range")
    _add_scheme(p)
    p.add_argument("--n-range", required=True, help="inclusive a:b")
    p.add_argument("--mode", choices=["exact", "empirical"], default="exact")
    p.add_argument("--rules", help="comma-separated subset (default: all 88 minimal)")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--max-updates", type=int, default=100_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("theorem", help="RMT conditions for skew convergence")
    p.add_argument("--list", action="store_true", help="print matching rule numbers (default)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--rule", type=_rule_arg)
    p.add_argument("--all-rules", action="store_true", help="survey all 256 rules")
    p.add_argument("--validate", metavar="A:B", help="cross-check by exact reachability")
    p.add_argument("--out")
    p.set_defaults(func=cmd_theorem)

    p = sub.add_parser("commclasses", help="number of communication classes")
    p.add_argument("--rule", type=_rule_arg, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_scheme(p, default="fully")
    p.add_argument("--json", action="store_true")
    p.add_argument("--members", action="store_true", help="list class members (with --json)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_commclasses)

    p = sub.add_parser("cluster", help="communication-class clustering of a CSV table")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--rules", help="comma-separated rule pool (default: the 12 candidates)")
    p.add_argument("--seed", type=int)
    p.add_argument("--encoding", help="JSON encoding spec overriding equal-frequency bins")
    p.add_argument("--drop", help="comma-separated columns to ignore")
    p.add_argument("--id-column")
    p.add_argument("--stall-limit", type=int, default=5)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_cluster)
    return parser


def _fail(code: int, message: str) -> int:
    message = " ".join(str(message).split())
    sys.stderr.write(f"asynca: error[{code}]: {message}\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except UsageError as e:
        return _fail(EXIT_USAGE, e)
    except EnumerationLimitError as e:
        return _fail(EXIT_LIMIT, e)
    except (ValueError, OSError, IndexError) as e:
        return _fail(EXIT_USAGE, e)
    return 0


if __name__ == "__main__":
    sys.exit(main())
