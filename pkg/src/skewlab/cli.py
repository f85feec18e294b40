"""Batch front end: ``skewlab <verb> [flags]``.

Each verb writes its result as canonical JSON to ``--output`` (when given) and
prints a short human-readable summary.  A run manifest recording the command,
input digests, seed and outputs is written next to the result only after all
outputs are in place.

Exit status: 0 success, 1 bad input or flags, 2 the computation itself failed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from . import __version__, certificates
from .io import config_from_json, config_to_json, dumps, sidecar_path, write_atomic

VERBS = (
    "trans",
    "hom",
    "tournament",
    "bundle",
    "mtbound",
    "search",
    "extract",
    "polyclass",
    "decompose",
    "verify-decomp",
    "spectral",
    "report",
)


class UsageError(Exception):
    """Input could not be parsed or a flag is out of range."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    command: list[str]
    input_digests: dict[str, str]
    seed: int | None
    tool_version: str
    outputs: dict[str, str] = field(default_factory=dict)
    created: str = ""

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "input_digests": self.input_digests,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "outputs": self.outputs,
            "created": self.created,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RunManifest":
        return cls(obj["command"], obj["input_digests"], obj["seed"], obj["tool_version"], obj["outputs"], obj["created"])


@dataclass
class Outcome:
    result: dict | None
    summary: str
    files: dict[Path, str] = field(default_factory=dict)  # extra outputs beside --output
    inputs: list[Path] = field(default_factory=list)
    failed: str | None = None


# --- input helpers -------------------------------------------------------------------


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _json(path) -> dict:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


def _parsed(fn: Callable, what: str):
    try:
        return fn()
    except UsageError:
        raise
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise UsageError(f"bad {what}: {exc}") from exc


def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"{args.verb} needs --{name.replace('_', '-')}")
    return value


def _digraph_input(args):
    """Config JSON (crossing tournament of its lines) or adjacency text."""
    from .lines3d import crossing_tournament
    from .tourney import parse_digraph

    path = _need(args, "input")
    text = _read(path)
    if text.lstrip().startswith("{"):
        config = _parsed(lambda: config_from_json(json.loads(text)), "configuration")
        return crossing_tournament(config), len(config)
    return _parsed(lambda: parse_digraph(text), "digraph"), None


def _poly_input(args):
    from .poly2 import poly

    if args.poly is not None:
        text = args.poly
    elif args.input is not None:
        text = _read(args.input)
    else:
        raise UsageError(f"{args.verb} needs --poly or --input")
    return _parsed(lambda: poly(text.strip()), "polynomial")


def _positive(args, name: str, low: int = 1, high: int | None = None):
    v = getattr(args, name)
    if v is not None and (v < low or (high is not None and v > high)):
        bound = f"in {low}..{high}" if high is not None else f">= {low}"
        raise UsageError(f"--{name} must be {bound}")
    return v


def _inputs(args, *names) -> list[Path]:
    return [Path(getattr(args, n)) for n in names if getattr(args, n, None) is not None]


# --- verbs -------------------------------------------------------------------------


def cmd_trans(args) -> Outcome:
    from .tourney import trans_exact

    t, _ = _digraph_input(args)
    if not t.is_tournament():
        raise UsageError("trans needs a tournament")
    k, w = trans_exact(t)
    return Outcome({"n": t.n, "trans": k, "witness": w.to_json()}, str(k), inputs=_inputs(args, "input"))


def cmd_hom(args) -> Outcome:
    from .tourney import hom_exact

    g, _ = _digraph_input(args)
    k, w = hom_exact(g)
    return Outcome({"n": g.n, "hom": k, "witness": w.to_json()}, f"{k} {w.kind.value}", inputs=_inputs(args, "input"))


def cmd_tournament(args) -> Outcome:
    from .tourney import format_digraph

    t, _ = _digraph_input(args)
    rows = ["".join("1" if x else "0" for x in row) for row in t.adjacency]
    return Outcome({"n": t.n, "adjacency": rows}, format_digraph(t).rstrip(), inputs=_inputs(args, "input"))


def _base_config(args):
    if args.input is not None:
        return _parsed(lambda: config_from_json(_json(args.input)), "configuration"), [Path(args.input)]
    name = args.base or "three_cycle"
    if Path(name).is_file():
        return _parsed(lambda: config_from_json(_json(name)), "configuration"), [Path(name)]
    try:
        return certificates.certificate(name)[0], []
    except FileNotFoundError:
        raise UsageError(f"--base {name!r} is neither a file nor a pinned configuration") from None


def cmd_bundle(args) -> Outcome:
    from .extremal import BundleParams, bundle

    base, inputs = _base_config(args)
    levels = _positive(args, "levels", 0)
    out = bundle(base, BundleParams(levels=1 if levels is None else levels))
    return Outcome(config_to_json(out), f"{len(out)} lines ({out.label})", inputs=inputs)


def cmd_mtbound(args) -> Outcome:
    from .extremal import mt_bound, mt_threshold

    if args.threshold:
        th = mt_threshold()
        return Outcome({"threshold": th}, f"threshold = {th}")
    n = _positive(args, "n", 2)
    if n is None:
        raise UsageError("mtbound needs --n or --threshold")
    rep = mt_bound(n)
    return Outcome(rep.to_json(), f"log2_total = {rep.log2_total}")


def cmd_search(args) -> Outcome:
    from .extremal import search_low_trans

    n = _need(args, "n")
    target = _need(args, "target")
    _positive(args, "n", 1, 12)
    _positive(args, "target", 1)
    _positive(args, "budget", 1)
    rep = search_low_trans(n, target, budget=args.budget or 64, base_seed=args.seed, strict=True)
    result = config_to_json(rep.best_config)
    files = {}
    if args.output is not None:
        files[sidecar_path(args.output)] = dumps({"trans": rep.best_trans, "verified": True, "seed": args.seed})
    summary = f"trans {rep.best_trans} on {n} lines after {rep.seeds_tried} restarts (restart {rep.best_restart})"
    return Outcome(result, summary, files)


def cmd_extract(args) -> Outcome:
    from .ehsets import PointSet, expr_from_json, extract_expr, verify_extraction

    e = _parsed(lambda: expr_from_json(_json(_need(args, "expr"))), "expression")
    v = _parsed(lambda: PointSet.from_json(_json(_need(args, "points"))), "point set")
    if e.dimension != v.d:
        raise UsageError(f"expression has dimension {e.dimension}, points have {v.d}")
    ext = extract_expr(e, v)
    ok = verify_extraction(e, v, ext.witness)
    result = {**ext.to_json(), "verified": ok}
    w = ext.witness
    return Outcome(
        result,
        f"{w.kind.value} of size {w.size} (guaranteed {ext.guaranteed}, epsilon {ext.epsilon})",
        inputs=_inputs(args, "expr", "points"),
        failed=None if ok else "extracted witness does not verify",
    )


def cmd_polyclass(args) -> Outcome:
    from .poly2 import classify

    c = classify(_poly_input(args))
    return Outcome(c.to_json(), c.kind.value, inputs=_inputs(args, "input"))


def cmd_decompose(args) -> Outcome:
    from .poly2 import polar_decompose

    f = _poly_input(args)
    tol = args.tolerance if args.tolerance is not None else 1e-10
    if not tol > 0:
        raise UsageError("--tolerance must be positive")
    dec = polar_decompose(f, tolerance=tol)
    summary = f"{len(dec.arcs)} arcs ({len(dec.important_arcs)} important), {len(dec.exceptional_rays)} exceptional rays"
    return Outcome(dec.to_json(), summary, inputs=_inputs(args, "input"))


def cmd_verify_decomp(args) -> Outcome:
    from .poly2 import PolarDecomposition, polar_decompose, verify_report

    f = _poly_input(args)
    if args.decomp is not None:
        dec = _parsed(lambda: PolarDecomposition.from_json(_json(args.decomp)), "decomposition")
    else:
        dec = polar_decompose(f)
    samples = _positive(args, "samples", 1) or 10_000
    rep = verify_report(f, dec, samples=samples, seed=args.seed)
    return Outcome(
        rep.to_json(),
        f"agreement {rep.ratio:.6f} on {rep.checked} points and {rep.ray_checked} ray samples",
        inputs=_inputs(args, "input", "decomp"),
        failed=None if rep.ratio == 1.0 else f"reconstruction disagrees on {rep.checked + rep.ray_checked - rep.agreed - rep.ray_agreed} samples",
    )


def cmd_spectral(args) -> Outcome:
    from .poly2 import spectral_checks

    d = _positive(args, "d", 1, 40)
    if d is None:
        raise UsageError("spectral needs --d")
    rep = spectral_checks(d)
    return Outcome(rep.to_json(), f"d = {d}: nullity {rep.nullity}, max |Re| {rep.max_abs_real:.3g}")


def cmd_report(args) -> Outcome:
    from .reproduce import run_all

    out_dir = Path(_need(args, "output"))
    samples = _positive(args, "samples", 1) or 10_000
    results = run_all(seed=args.seed, samples=samples, log=lambda line: print(line, flush=True))
    files = {out_dir / f"criterion_{r.number:02d}.json": dumps(r.to_json()) for r in results}
    lines = [r.line() for r in results]
    files[out_dir / "summary.txt"] = "\n".join(lines) + "\n"
    failed = [r.number for r in results if not r.passed]
    return Outcome(
        None,
        f"{len(results) - len(failed)}/{len(results)} criteria passed",
        files,
        failed=f"criteria {failed} failed" if failed else None,
    )


HANDLERS: dict[str, Callable[[argparse.Namespace], Outcome]] = {
    "trans": cmd_trans,
    "hom": cmd_hom,
    "tournament": cmd_tournament,
    "bundle": cmd_bundle,
    "mtbound": cmd_mtbound,
    "search": cmd_search,
    "extract": cmd_extract,
    "polyclass": cmd_polyclass,
    "decompose": cmd_decompose,
    "verify-decomp": cmd_verify_decomp,
    "spectral": cmd_spectral,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="skewlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"skewlab {__version__}")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("-i", "--input", help="input file (configuration JSON, digraph text or polynomial text)")
    p.add_argument("-o", "--output", help="result JSON path (a directory for report)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, help="search restarts")
    p.add_argument("--levels", type=int, help="bundling levels")
    p.add_argument("--n", type=int, help="number of lines")
    p.add_argument("--d", type=int, help="form degree")
    p.add_argument("--samples", type=int, help="verification samples")
    p.add_argument("--tolerance", type=float, help="critical-angle separation")
    p.add_argument("--target", type=int, help="search goal: trans at most this")
    p.add_argument("--base", help="pinned configuration name or configuration file to bundle")
    p.add_argument("--threshold", action="store_true", help="mtbound: smallest n where the bound wins")
    p.add_argument("--poly", help="polynomial text, e.g. 'x^2 + 2 y^2 - 1'")
    p.add_argument("--decomp", help="decomposition JSON to verify")
    p.add_argument("--expr", help="set expression JSON")
    p.add_argument("--points", help="point set JSON")
    return p


def _write_outputs(args, argv: list[str], out: Outcome, manifest: bool = True) -> None:
    written: dict[Path, str] = dict(out.files)
    if out.result is not None and args.output is not None:
        written[Path(args.output)] = dumps(out.result)
    for path, text in written.items():
        write_atomic(path, text)
    if not written or not manifest:
        return
    if args.verb == "report":
        manifest_path = Path(args.output) / "manifest.json"
    else:
        target = Path(args.output) if args.output is not None else next(iter(written))
        manifest_path = target.with_name(target.stem + ".manifest.json")
    manifest = RunManifest(
        ["skewlab", *argv],
        {str(p): sha256_file(p) for p in out.inputs},
        args.seed,
        __version__,
        {str(p): sha256_file(p) for p in sorted(written)},
        datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    write_atomic(manifest_path, dumps(manifest.to_json()))


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"skewlab: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        out = HANDLERS[args.verb](args)
    except UsageError as exc:
        print(f"skewlab {args.verb}: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"skewlab {args.verb}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(out.summary)
    # failed runs still leave their files for inspection, but no manifest
    _write_outputs(args, argv, out, manifest=out.failed is None)
    if out.failed:
        print(f"skewlab {args.verb}: {out.failed}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
