"""Command-line interface: sample ensembles, verify, export tables and maps.

Commands
--------
sample  draw spectra to CSV/JSON (deterministic under --seed)
verify  run a named verification suite, write a JSON report, exit 0 iff pass
params  emit the (alpha1, alpha2) Jacobi parameter-map rows behind the figures
roots   export a root-multiplicity table, optionally re-derived numerically

Exit codes: 0 success, 1 verification failure, 2 bad flags, 3 unwritable path.
The ENSEMBLE_FORGE_SEED environment variable supplies the seed when --seed is
absent; the final fallback is 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

import numpy as np

from . import __version__
from .ensembles import EnsembleSpec, Family, SampleBatch, sample_batch
from .errors import EnsembleForgeError
from .matcore import RngState
from .pingpong import lie_algebra_spec, measure_root_multiplicities
from .rootsystems import SpaceKind, SpaceType, printed_table, root_data
from .suites import SUITE_NAMES, jacobi_parameter_rows, run_suite

_ENV_SEED = "ENSEMBLE_FORGE_SEED"


def _default_seed(value: Optional[int]) -> int:
    if value is not None:
        return value
    env = os.environ.get(_ENV_SEED)
    return int(env) if env else 0


# ---------------------------------------------------------------------------
# sample serialization (the CSV/JSON field names are fixed here)


def batch_to_csv(batch: SampleBatch) -> str:
    spec = batch.spec
    header = ",".join(
        ["family", "beta", "dims", "seed", "draw"]
        + [f"x{i}" for i in range(spec.m)]
    )
    lines = [
        f"# ensemble-forge {__version__} family={spec.family.value} beta={spec.beta} "
        f"dims={spec.dims_label()} path={batch.sampler_path} seed={batch.seed} "
        f"count={batch.draws}",
        header,
    ]
    for i, row in enumerate(batch.spectra):
        cells = [spec.family.value, str(spec.beta), spec.dims_label(), str(batch.seed), str(i)]
        cells += [repr(float(v)) for v in row]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def batch_to_json(batch: SampleBatch) -> str:
    spec = batch.spec
    payload = {
        "version": __version__,
        "family": spec.family.value,
        "beta": spec.beta,
        "dims": {k: v for k, v in _dims_dict(spec).items()},
        "path": batch.sampler_path,
        "seed": batch.seed,
        "draws": batch.draws,
        "spectra": [[float(v) for v in row] for row in batch.spectra],
    }
    return json.dumps(payload, indent=1) + "\n"


def _dims_dict(spec: EnsembleSpec) -> dict:
    if spec.family in (Family.Hermite, Family.Circular):
        return {"n": spec.n}
    if spec.family is Family.Laguerre:
        return {"p": spec.p, "q": spec.q}
    return {"p": spec.p, "q": spec.q, "s": spec.s}


def parse_sample_csv(text: str) -> SampleBatch:
    """Inverse of batch_to_csv (bit-exact: repr round-trips doubles)."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    m = len(header) - 5
    rows, meta = [], None
    for ln in lines[1:]:
        cells = ln.split(",")
        family, beta, dims, seed = cells[0], int(cells[1]), cells[2], int(cells[3])
        dims_kv = dict(kv.split("=") for kv in dims.split(";"))
        meta = (family, beta, {k: int(v) for k, v in dims_kv.items()}, seed)
        rows.append([float(v) for v in cells[5 : 5 + m]])
    family, beta, dims_kv, seed = meta
    spec = EnsembleSpec(Family(family), beta, **dims_kv)
    return SampleBatch(spec, seed, np.array(rows), sampler_path="file")


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ensemble-forge",
        description="Classical random matrix ensembles from matrix-factorization "
        "coordinate systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="sample an ensemble to a file")
    sp.add_argument("--family", required=True, choices=[f.value for f in Family])
    sp.add_argument("--beta", required=True, type=int, choices=[1, 2, 4])
    sp.add_argument("--n", type=int)
    sp.add_argument("-p", type=int)
    sp.add_argument("-q", type=int)
    sp.add_argument("-s", type=int)
    sp.add_argument("--path", help="sampler path (gsvd|csd, odo|uut_eig, eig, qdq|skewham_eig)")
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--seed", type=int)
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--format", choices=("csv", "json"), default=None)

    vp = sub.add_parser("verify", help="run a verification suite")
    vp.add_argument("--suite", required=True, choices=SUITE_NAMES)
    vp.add_argument("--fast", action="store_true", help="reduced sample sizes / rank-1 checks")
    vp.add_argument("--seed", type=int)
    vp.add_argument("-o", "--output", help="write the JSON report here")

    pp = sub.add_parser("params", help="emit Jacobi parameter-map rows")
    pp.add_argument("--beta", required=True, type=int, choices=[1, 2, 4])
    pp.add_argument("--bound", type=int, default=12)
    pp.add_argument("--types", help="comma-separated SpaceKind filter (e.g. AIII_III,CI_II)")
    pp.add_argument("-o", "--output", required=True)
    pp.add_argument("--format", choices=("csv", "json"), default=None)

    rp = sub.add_parser("roots", help="export a root-multiplicity table")
    rp.add_argument("--space", required=True, choices=[k.value for k in SpaceKind])
    rp.add_argument("--n", type=int)
    rp.add_argument("-p", type=int)
    rp.add_argument("-q", type=int)
    rp.add_argument("-s", type=int)
    rp.add_argument("--verify", action="store_true",
                    help="re-derive the table numerically and report agreement")
    rp.add_argument("--seed", type=int)
    rp.add_argument("-o", "--output")
    return parser


def _write_text(path: str, text: str) -> int:
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        return 3
    return 0


def _fmt_for(path: str, explicit: Optional[str]) -> str:
    if explicit:
        return explicit
    return "json" if path.endswith(".json") else "csv"


def cmd_sample(args) -> int:
    kw = {}
    for name in ("n", "p", "q", "s"):
        val = getattr(args, name)
        if val is not None:
            kw[name] = val
    try:
        spec = EnsembleSpec(Family(args.family), args.beta, sampler_path=args.path, **kw)
    except EnsembleForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    seed = _default_seed(args.seed)
    batch = sample_batch(spec, args.count, RngState(seed))
    fmt = _fmt_for(args.output, args.format)
    text = batch_to_csv(batch) if fmt == "csv" else batch_to_json(batch)
    return _write_text(args.output, text)


def cmd_verify(args) -> int:
    seed = _default_seed(args.seed)
    reports = run_suite(args.suite, seed=seed, fast=args.fast)
    ok = all(r["pass"] for r in reports)
    text = json.dumps({"suite": args.suite, "seed": seed, "pass": ok, "reports": reports}, indent=1)
    if args.output:
        code = _write_text(args.output, text + "\n")
        if code:
            return code
    else:
        print(text)
    for r in reports:
        mark = "PASS" if r["pass"] else "FAIL"
        print(f"[{mark}] {r['test']} ({r['spec']}): statistic {r['statistic']:.3e} "
              f"vs threshold {r['threshold']:.3e}", file=sys.stderr)
    return 0 if ok else 1


def cmd_params(args) -> int:
    kinds = args.types.split(",") if args.types else None
    try:
        rows = jacobi_parameter_rows(args.beta, args.bound, kinds)
    except KeyError:
        print(f"error: no Jacobi parameter map at beta={args.beta}", file=sys.stderr)
        return 2
    fmt = _fmt_for(args.output, args.format)
    if fmt == "json":
        text = json.dumps(rows, indent=1) + "\n"
    else:
        lines = ["space,params,family,beta,alpha1,alpha2,mirrored"]
        for r in rows:
            lines.append(
                f"{r['space']},{r['params']},{r['family']},{r['beta']},"
                f"{repr(float(r['alpha1']))},{repr(float(r['alpha2']))},{int(r['mirrored'])}"
            )
        text = "\n".join(lines) + "\n"
    return _write_text(args.output, text)


def cmd_roots(args) -> int:
    kw = {}
    for name in ("n", "p", "q", "s"):
        val = getattr(args, name)
        if val is not None:
            kw[name] = val
    try:
        space = SpaceType(SpaceKind(args.space), **kw)
    except EnsembleForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    datum = root_data(space)
    payload = {
        "space": space.kind.value,
        "params": space.params,
        "torus_rank": datum.torus_rank,
        "roots": [
            {"coeffs": list(r.coeffs), "m_plus": r.m_plus, "m_minus": r.m_minus}
            for r in datum.roots
        ],
        "printed_table": [
            {"family": fam, "m_plus": mp, "m_minus": mm}
            for fam, mp, mm in printed_table(space)
        ],
    }
    if args.verify:
        rng = RngState(_default_seed(args.seed))
        measured = measure_root_multiplicities(lie_algebra_spec(space), rng)
        payload["measured"] = [
            {"coeffs": list(r.coeffs), "m_plus": r.m_plus, "m_minus": r.m_minus}
            for r in measured.roots
        ]
        payload["measured_equal"] = measured.as_dict() == datum.as_dict()
    text = json.dumps(payload, indent=1) + "\n"
    if args.output:
        return _write_text(args.output, text)
    print(text)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {
        "sample": cmd_sample,
        "verify": cmd_verify,
        "params": cmd_params,
        "roots": cmd_roots,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
