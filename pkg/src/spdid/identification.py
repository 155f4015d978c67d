"""Subject identification rates over cross-distance matrices.

A subject is correctly identified when its within-subject distance (the
diagonal cell of its probe row) is the strict minimum of that row. Ties count
as misses: strict-minimum is the conservative, platform-stable choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pairwise import DistanceMatrix
from .core import LabelMismatch, NotSquare


@dataclass(frozen=True)
class IdReport:
    """Identification rates in both probe directions plus their mean."""

    id12: float
    id21: float
    mean: float
    n_subjects: int
    per_subject_hits12: tuple[bool, ...]
    per_subject_hits21: tuple[bool, ...]


@dataclass(frozen=True)
class NearestMatch:
    """Per-probe-row diagnostic: who is closest, and by how much."""

    probe_label: str
    closest_gallery_label: str
    within_distance: float
    best_other_distance: float
    ambiguous: bool


def _check_square_labels(d: DistanceMatrix) -> None:
    if len(d.probe_labels) != len(d.gallery_labels):
        raise NotSquare(
            f"distance matrix is {len(d.probe_labels)}x{len(d.gallery_labels)}, not square"
        )
    for i, (p, g) in enumerate(zip(d.probe_labels, d.gallery_labels)):
        if p != g:
            raise LabelMismatch(f"label mismatch at index {i}: probe {p!r} vs gallery {g!r}")


def compute_id_rate(d: DistanceMatrix) -> tuple[float, tuple[bool, ...]]:
    """Fraction of probe rows whose diagonal is the strict row minimum.

    Returns (rate, per-subject hit vector). A 1x1 matrix scores 1.0: with no
    competitors the diagonal is vacuously the strict minimum.
    """
    _check_square_labels(d)
    v = d.values
    n = v.shape[0]
    hits = []
    for i in range(n):
        off = np.delete(v[i], i)
        best_other = float(off.min()) if off.size else math.inf
        hits.append(bool(v[i, i] < best_other))
    rate = sum(hits) / n
    return rate, tuple(hits)


def id_report(d12: DistanceMatrix, d21: DistanceMatrix) -> IdReport:
    """Identification rates for both directions and their mean."""
    if d12.gallery_labels != d21.probe_labels:
        raise LabelMismatch("D21 probe labels must equal D12 gallery labels")
    id12, hits12 = compute_id_rate(d12)
    id21, hits21 = compute_id_rate(d21)
    return IdReport(
        id12=id12,
        id21=id21,
        mean=(id12 + id21) / 2,
        n_subjects=len(hits12),
        per_subject_hits12=hits12,
        per_subject_hits21=hits21,
    )


def nearest_match_table(d: DistanceMatrix) -> list[NearestMatch]:
    """Closest gallery subject per probe row, with the within/best-other split.

    Exact ties go to the lowest gallery index and are flagged ambiguous.
    """
    _check_square_labels(d)
    v = d.values
    rows = []
    for i in range(v.shape[0]):
        j_min = int(np.argmin(v[i]))
        ambiguous = int(np.sum(v[i] == v[i, j_min])) > 1
        off = np.delete(v[i], i)
        best_other = float(off.min()) if off.size else math.inf
        rows.append(
            NearestMatch(
                probe_label=d.probe_labels[i],
                closest_gallery_label=d.gallery_labels[j_min],
                within_distance=float(v[i, i]),
                best_other_distance=best_other,
                ambiguous=ambiguous,
            )
        )
    return rows
