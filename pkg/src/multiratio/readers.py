"""Readers for unit-level CSV files and summary-moment JSON documents.

CSV layout: a header row with a ``y`` column and attribute columns named
``phi1``, ``phi2``, ... (any column order; attributes are ordered by number).
Other columns are ignored.

Summary JSON: an object with ``N``, ``Ybar``, ``P``, ``S2y``, ``S2phi``,
``rho_pb`` and ``rho_phi`` (a matrix, or a scalar when k = 2, omitted when
k = 1). Optional keys: ``n``, ``reference`` (published bias/MSE values keyed
by estimator token), ``description``, ``derived`` and ``timestamp`` (ignored).
"""

from __future__ import annotations

import csv
import io
import json
import re
from importlib import resources
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .population import Population, PopulationMoments, build_population, moments_from_summary

_PHI = re.compile(r"^phi(\d+)$")
_REQUIRED = ("N", "Ybar", "P", "S2y", "S2phi", "rho_pb")
_OPTIONAL = ("rho_phi", "n", "reference", "description", "derived", "timestamp")


def parse_units_csv(text: str) -> tuple[np.ndarray, np.ndarray]:
    """Read ``y`` and the ``phi*`` columns without population-level checks.

    Returns ``(y, phi)`` with shapes ``(N,)`` and ``(N, k)``.
    """
    rows = [r for r in csv.reader(io.StringIO(text.lstrip("﻿"))) if any(c.strip() for c in r)]
    if not rows:
        raise ValidationError("empty CSV: header row required")
    header = [h.strip() for h in rows[0]]
    if "y" not in header:
        raise ValidationError("missing column y")
    phis = sorted((int(m.group(1)), j) for j, h in enumerate(header) if (m := _PHI.match(h)))
    if not phis:
        raise ValidationError("no phi columns (expected phi1, phi2, ...)")
    numbers = [num for num, _ in phis]
    if numbers != list(range(1, len(numbers) + 1)):
        raise ValidationError(f"phi columns must be numbered 1..k (found {numbers})")
    jy = header.index("y")
    body = rows[1:]
    if not body:
        raise ValidationError("CSV has no data rows")
    y = np.empty(len(body))
    phi = np.empty((len(body), len(phis)), dtype=np.int8)
    for r, row in enumerate(body, start=1):
        if len(row) != len(header):
            raise ValidationError(f"row {r} has {len(row)} fields, header has {len(header)}")
        try:
            y[r - 1] = float(row[jy])
        except ValueError:
            raise ValidationError(f"y must be numeric (row {r}: {row[jy]!r})") from None
        if not np.isfinite(y[r - 1]):
            raise ValidationError(f"y must be finite (row {r})")
        for c, (num, j) in enumerate(phis):
            v = row[j].strip()
            try:
                fv = float(v)
            except ValueError:
                fv = None
            if fv not in (0.0, 1.0):
                raise ValidationError(f"phi{num} must be 0 or 1 (row {r})")
            phi[r - 1, c] = int(fv)
    return y, phi


def parse_population_csv(text: str) -> Population:
    y, phi = parse_units_csv(text)
    return build_population(y, phi)


class SummaryInput(NamedTuple):
    moments: PopulationMoments
    n: int | None
    reference: dict


def parse_summary_file(text: str) -> SummaryInput:
    """Parse a summary-moment JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"summary is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ValidationError("summary must be a JSON object")
    for key in _REQUIRED:
        if key not in doc:
            raise ValidationError(f"missing field {key}")
    unknown = sorted(set(doc) - set(_REQUIRED) - set(_OPTIONAL))
    if unknown:
        raise ValidationError(f"unknown field(s): {', '.join(unknown)}")
    P = np.atleast_1d(np.asarray(doc["P"], dtype=float))
    for key in ("S2phi", "rho_pb"):
        if np.ndim(doc[key]) > 1:
            raise ValidationError(f"{key} must be a list with one entry per attribute")
    if P.ndim != 1:
        raise ValidationError("P must be a list with one entry per attribute")
    moments = moments_from_summary(
        N=doc["N"], Ybar=doc["Ybar"], P=P, S2y=doc["S2y"], S2phi=doc["S2phi"],
        rho_pb=doc["rho_pb"], rho_phi=doc.get("rho_phi"),
    )
    n = doc.get("n")
    if n is not None and (int(n) != n or not 1 <= n <= moments.N):
        raise ValidationError(f"n must be an integer in 1..N (got {n})")
    reference = doc.get("reference") or {}
    if not isinstance(reference, dict):
        raise ValidationError("reference must be an object keyed by estimator")
    return SummaryInput(moments, None if n is None else int(n), reference)


def wheat34_text() -> str:
    """Bundled summary document for the 34-farm wheat population."""
    return resources.files("multiratio").joinpath("data/wheat34_summary.json").read_text()


def load_wheat34() -> SummaryInput:
    return parse_summary_file(wheat34_text())
