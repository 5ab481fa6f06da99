"""Command-line driver.

Verbs:
  list      registered identities, their parameters and conventions
  verify    check one identity at one parameter point, exit by verdict
  tabulate  CSV over a parameter grid (comma-separated sweep values)
  sample    importance-weight diagnostics for an identity's MC route

Exit codes: 0 pass, 1 fail, 2 invalid parameters, 3 inconclusive,
4 internal error.
"""
import argparse
import csv
import io
import json
import sys

import numpy as np

from . import registry
from .engine import _jsonable, mc_integrate
from .errors import DomainError, EngineError, MatbetaError

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3
EXIT_INTERNAL = 4

_VERDICT_EXIT = {"pass": EXIT_PASS, "fail": EXIT_FAIL,
                 "inconclusive": EXIT_INCONCLUSIVE}


# ---------------------------------------------------------------------------
# parameter parsing

def _convert(text):
    """CLI token -> int, float, tuple of floats, or the raw string."""
    if "," in text:
        return tuple(float(x) for x in text.split(","))
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def _parse_extras(tokens):
    """Arbitrary ``--name value`` / ``--name=value`` pairs -> raw dict."""
    out = {}
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if not tok.startswith("--"):
            raise DomainError(f"unexpected argument {tok!r}")
        name, eq, val = tok[2:].partition("=")
        name = name.replace("-", "_")
        if not name:
            raise DomainError(f"unexpected argument {tok!r}")
        if not eq:
            if i + 1 >= len(tokens):
                raise DomainError(f"missing value for --{name}")
            val = tokens[i + 1]
            i += 1
        out[name] = val
        i += 1
    return out


def _load_config(path):
    """Flat key=value file; '#' starts a comment; no nesting."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, eq, val = line.partition("=")
                if not eq:
                    raise DomainError(
                        f"{path}:{lineno}: expected key=value, got {line!r}")
                out[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise DomainError(f"cannot read config {path}: {exc}") from None
    return out


def _merge_config(args, extras, config):
    """Config supplies defaults; explicit flags and params win."""
    for key, val in config.items():
        if key == "json":
            if not args.json:
                args.json = val.lower() in ("1", "true", "yes")
        elif key in ("seed", "samples", "tol", "engine"):
            if getattr(args, key) is None:
                setattr(args, key, val)
        elif key not in extras:
            extras[key] = val
    return args, extras


def _finish_globals(args):
    try:
        args.seed = 0 if args.seed is None else int(args.seed)
        args.samples = (registry.default_samples if args.samples is None
                        else int(args.samples))
        args.tol = 1e-6 if args.tol is None else float(args.tol)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    args.engine = "auto" if args.engine is None else str(args.engine)
    if args.engine not in ("auto", "quadrature", "mc"):
        raise DomainError(
            f"engine must be auto, quadrature or mc (got {args.engine!r})")
    if args.seed < 0:
        raise DomainError("seed must be a non-negative integer")
    return args


def _params_from_raw(raw):
    return {k: (_convert(v) if isinstance(v, str) else v)
            for k, v in raw.items()}


# ---------------------------------------------------------------------------
# verbs

def _render(v):
    """One CSV/text cell or JSON leaf for a parameter value."""
    if isinstance(v, tuple):
        return list(v)
    if isinstance(v, complex) and v.imag == 0.0:
        return v.real
    return v


def _cmd_list(args):
    rows = []
    for ident in registry.identity_ids():
        entry = registry.get_identity(ident)
        defaults = registry.coerce_params(entry, {})
        try:
            notes = list(entry.notes(defaults)) if entry.notes else []
        except MatbetaError:
            notes = []
        rows.append({
            "id": ident,
            "label": entry.label,
            "params": {name: {"kind": kind, "default": _render(default)}
                       for name, (kind, default) in entry.params.items()},
            "engines": entry.engines(),
            "notes": notes,
        })
    if args.json:
        print(json.dumps(rows, sort_keys=True, indent=2))
        return EXIT_PASS
    for row in rows:
        print(row["id"])
        print(f"    {row['label']}")
        pstr = ", ".join(f"{k}={v['default']}" for k, v in row["params"].items())
        print(f"    params: {pstr}")
        print(f"    engines: {', '.join(row['engines'])}")
        for note in row["notes"]:
            print(f"    note: {note}")
    return EXIT_PASS


def _print_report(rep):
    errname = "stderr" if rep.engine == "mc" else "errbound"
    print(f"identity : {rep.identity}")
    pstr = ", ".join(f"{k}={_render(v)}" for k, v in rep.params.items())
    print(f"params   : {pstr}")
    print(f"engine   : {rep.engine}")
    print(f"lhs      : {_render(rep.lhs_value)}  ({errname} {rep.lhs_err:.3e})")
    if rep.samples is not None:
        eff = rep.effective_samples
        print(f"samples  : {rep.samples}"
              + (f"  (effective {eff:.0f})" if eff is not None else "")
              + f"  seed {rep.seed}")
    print(f"rhs      : {_render(rep.rhs)}")
    print(f"z        : {rep.z:+.3f}")
    print(f"verdict  : {rep.verdict}")
    for note in rep.notes:
        print(f"note     : {note}")


def _cmd_verify(args, params):
    rep = registry.verify(args.identity, params, engine=args.engine,
                          samples=args.samples, seed=args.seed, tol=args.tol)
    if args.json:
        print(rep.to_json())
    else:
        _print_report(rep)
    return _VERDICT_EXIT[rep.verdict]


def _grid(entry, raw_params):
    """Cartesian product of swept scalar params; seq params never sweep."""
    fixed, sweeps = {}, []
    for name, rawval in raw_params.items():
        kind = entry.params.get(name, ("str", None))[0]
        val = _convert(rawval) if isinstance(rawval, str) else rawval
        if kind != "seq" and isinstance(val, tuple):
            sweeps.append((name, list(val)))
        else:
            fixed[name] = val
    points = [dict(fixed)]
    for name, values in sweeps:
        points = [dict(pt, **{name: v}) for pt in points for v in values]
    return points


def _csv_cell(v):
    if isinstance(v, tuple):
        return ",".join(repr(float(x)) for x in v)
    if isinstance(v, complex):
        return repr(v.real) if v.imag == 0.0 else repr(v)
    if isinstance(v, float):
        return repr(v)
    return v


def _tab_row(entry, pt, args, param_names):
    """-> (cells, exit_contribution); last cell is the row status."""
    nvals = 4 if args.verify else 1
    try:
        p = registry.coerce_params(entry, pt)
    except MatbetaError as exc:
        cells = [_csv_cell(pt.get(name, "")) for name in param_names]
        return cells + [""] * nvals + [f"error: {exc}"], EXIT_FAIL
    cells = [_csv_cell(p[name]) for name in param_names]
    try:
        if args.verify:
            rep = registry.verify(entry.id, p, engine=args.engine,
                                  samples=args.samples, seed=args.seed,
                                  tol=args.tol)
            ok = EXIT_PASS if rep.verdict == "pass" else EXIT_FAIL
            return cells + [_csv_cell(rep.rhs), _csv_cell(rep.lhs_value),
                            repr(rep.lhs_err), repr(rep.z),
                            rep.verdict], ok
        return cells + [_csv_cell(entry.rhs(p)), "ok"], EXIT_PASS
    except MatbetaError as exc:
        return cells + [""] * nvals + [f"error: {exc}"], EXIT_FAIL


def _cmd_tabulate(args, raw_params):
    entry = registry.get_identity(args.identity)
    points = _grid(entry, raw_params)
    param_names = list(entry.params)
    header = param_names + ["rhs"]
    if args.verify:
        header += ["lhs", "err", "z"]
    header.append("status")

    worst = EXIT_PASS
    rows = []
    for pt in points:
        row, code = _tab_row(entry, pt, args, param_names)
        worst = max(worst, code)
        rows.append(row)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return worst


def _cmd_sample(args, params):
    weight_fn = registry.mc_weight_stream(args.identity, params)
    est = mc_integrate(weight_fn, args.samples, args.seed)
    # re-draw the same stream (identical chunked rngs) for quantiles
    mags = []
    left, chunk_index = args.samples, 0
    while left > 0:
        m = min(4096, left)
        rng = np.random.Generator(np.random.PCG64(
            np.random.SeedSequence([args.seed, chunk_index])))
        w = np.asarray(weight_fn(rng, m))
        w = np.where(np.isfinite(w), w, 0.0)
        mags.append(np.abs(w))
        left -= m
        chunk_index += 1
    mag = np.concatenate(mags)
    qs = np.quantile(mag, [0.0, 0.5, 0.9, 0.99, 1.0])
    out = {
        "identity": args.identity,
        "params": registry.coerce_params(
            registry.get_identity(args.identity), params),
        "samples": args.samples,
        "seed": args.seed,
        "estimate": est.value,
        "stderr": est.stderr,
        "effective_samples": est.effective_samples,
        "efficiency": est.effective_samples / args.samples,
        "nonfinite": est.nonfinite,
        "zero_fraction": float(np.mean(mag == 0.0)),
        "abs_weight_quantiles": {"min": qs[0].item(), "p50": qs[1].item(),
                                 "p90": qs[2].item(), "p99": qs[3].item(),
                                 "max": qs[4].item()},
    }
    if args.json:
        print(json.dumps(_jsonable(out), sort_keys=True))
    else:
        print(f"identity  : {out['identity']}")
        print(f"samples   : {out['samples']}  seed {out['seed']}")
        print(f"estimate  : {_render(est.value)}  (stderr {est.stderr:.3e})")
        print(f"effective : {est.effective_samples:.1f}"
              f"  ({100.0 * out['efficiency']:.2f}% efficiency)")
        print(f"nonfinite : {est.nonfinite}"
              f"   zero weights: {100.0 * out['zero_fraction']:.2f}%")
        q = out["abs_weight_quantiles"]
        print(f"|weight|  : min {q['min']:.3e}  median {q['p50']:.3e}  "
              f"p90 {q['p90']:.3e}  p99 {q['p99']:.3e}  max {q['max']:.3e}")
    return EXIT_PASS


# ---------------------------------------------------------------------------
# argument plumbing

def _add_globals(p, suppress):
    """The shared flags; subparsers use SUPPRESS so a flag placed after the
    verb does not clobber one parsed before it."""
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", default=d, help="base RNG seed (default 0)")
    p.add_argument("--samples", default=d,
                   help=f"MC sample budget (default {registry.default_samples})")
    p.add_argument("--tol", default=d,
                   help="relative tolerance (default 1e-6)")
    p.add_argument("--engine", default=d,
                   help="auto | quadrature | mc (default auto)")
    p.add_argument("--json", action="store_true",
                   default=argparse.SUPPRESS if suppress else False,
                   help="machine-readable output")
    p.add_argument("--config", default=d,
                   help="flat key=value file merged under the flags")


def _build_parser():
    # allow_abbrev stays off everywhere: identity parameters such as --s or
    # --sig must fall through to the extras, not prefix-match --seed
    ap = argparse.ArgumentParser(
        prog="matbeta", allow_abbrev=False,
        description="numerical verification of matrix beta-integral identities")
    _add_globals(ap, suppress=False)
    sub = ap.add_subparsers(dest="verb", required=True)

    lp = sub.add_parser("list", help="show registered identities",
                        allow_abbrev=False)
    _add_globals(lp, suppress=True)

    v = sub.add_parser("verify", help="verify one identity",
                       allow_abbrev=False,
                       description="extra --name value pairs set identity "
                                   "parameters; sequences are comma-separated")
    v.add_argument("identity")
    _add_globals(v, suppress=True)

    t = sub.add_parser("tabulate", help="CSV over a parameter grid",
                       allow_abbrev=False,
                       description="comma-separated values of scalar "
                                   "parameters sweep a grid; sequence-valued "
                                   "parameters take commas as one sequence")
    t.add_argument("identity")
    t.add_argument("--verify", action="store_true",
                   help="add lhs/err/z columns")
    t.add_argument("--out", default=None, help="write CSV here, not stdout")
    _add_globals(t, suppress=True)

    s = sub.add_parser("sample", help="MC weight diagnostics",
                       allow_abbrev=False)
    s.add_argument("identity")
    _add_globals(s, suppress=True)
    return ap


def main(argv=None):
    ap = _build_parser()
    try:
        args, extra_tokens = ap.parse_known_args(argv)
        raw = _parse_extras(extra_tokens)
        config = _load_config(args.config) if args.config else {}
        args, raw = _merge_config(args, raw, config)
        args = _finish_globals(args)
        if args.verb == "list":
            if raw:
                raise DomainError(
                    f"list takes no parameters (got {', '.join(sorted(raw))})")
            return _cmd_list(args)
        if args.verb == "verify":
            return _cmd_verify(args, _params_from_raw(raw))
        if args.verb == "tabulate":
            return _cmd_tabulate(args, raw)
        return _cmd_sample(args, _params_from_raw(raw))
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except EngineError as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except MatbetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - the contract maps these to 4
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
