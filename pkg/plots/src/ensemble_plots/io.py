"""Parsers for the ensemble-forge CLI file contracts (CSV and JSON).

This package consumes the sampling CLI purely through its emitted files; the
parsers here re-implement the contracts independently:

sample CSV   comment line, then header family,beta,dims,seed,draw,x0..x{m-1}
sample JSON  {family, beta, dims, seed, path, draws, spectra}
params CSV   header space,params,family,beta,alpha1,alpha2,mirrored
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List

import numpy as np


class ParseError(ValueError):
    """Malformed input file; the message names the offending line."""


@dataclass
class SampleFile:
    family: str
    beta: int
    dims: Dict[str, int]
    seed: int
    spectra: np.ndarray  # draws x m

    @property
    def m(self) -> int:
        return self.spectra.shape[1]


def read_sample_file(path: str) -> SampleFile:
    text = open(path).read()
    if text.lstrip().startswith("{"):
        return _read_sample_json(text, path)
    return _read_sample_csv(text, path)


def _read_sample_json(text: str, path: str) -> SampleFile:
    try:
        payload = json.loads(text)
        return SampleFile(
            family=payload["family"],
            beta=int(payload["beta"]),
            dims={k: int(v) for k, v in payload["dims"].items()},
            seed=int(payload["seed"]),
            spectra=np.asarray(payload["spectra"], dtype=float),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed sample JSON ({exc})") from exc


def _read_sample_csv(text: str, path: str) -> SampleFile:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError(f"{path}: no data lines")
    header = lines[0].split(",")
    if header[:5] != ["family", "beta", "dims", "seed", "draw"]:
        raise ParseError(f"{path}: line 1: unexpected header {lines[0]!r}")
    m = len(header) - 5
    rows: List[List[float]] = []
    meta = None
    for lineno, ln in enumerate(lines[1:], start=2):
        cells = ln.split(",")
        if len(cells) != 5 + m:
            raise ParseError(f"{path}: line {lineno}: expected {5 + m} cells")
        try:
            dims = dict(kv.split("=") for kv in cells[2].split(";"))
            meta = (cells[0], int(cells[1]), {k: int(v) for k, v in dims.items()}, int(cells[3]))
            rows.append([float(v) for v in cells[5:]])
        except ValueError as exc:
            raise ParseError(f"{path}: line {lineno}: {exc}") from exc
    family, beta, dims, seed = meta
    return SampleFile(family, beta, dims, seed, np.array(rows))


@dataclass
class ParamsFile:
    rows: List[Dict]


def read_params_file(path: str) -> ParamsFile:
    text = open(path).read()
    if text.lstrip().startswith("["):
        try:
            return ParamsFile(json.loads(text))
        except ValueError as exc:
            raise ParseError(f"{path}: malformed params JSON ({exc})") from exc
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("space,params,family,beta,alpha1,alpha2"):
        raise ParseError(f"{path}: line 1: not a params file")
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        cells = ln.split(",")
        if len(cells) < 6:
            raise ParseError(f"{path}: line {lineno}: expected >= 6 cells")
        try:
            rows.append(
                {
                    "space": cells[0],
                    "params": cells[1],
                    "family": cells[2],
                    "beta": int(cells[3]),
                    "alpha1": float(cells[4]),
                    "alpha2": float(cells[5]),
                }
            )
        except ValueError as exc:
            raise ParseError(f"{path}: line {lineno}: {exc}") from exc
    return ParamsFile(rows)
