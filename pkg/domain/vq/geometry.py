"""
Index stability of the codebook under small latent shifts.

A pair (h, h') is an original latent and the latent of an augmented view.
Its distance ratio d / r compares the shift with the Voronoi radius r, half
the smallest distance between two codes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy import stats
from scipy.spatial.distance import cdist, pdist, squareform

from .codebook import Codebook
from .errors import DegenerateCodebook, ShapeError

logger = logging.getLogger(__name__)

RATIO_STRATA = ((0.0, 0.2), (0.2, 0.5), (0.5, np.inf))


def _vectors(codebook: Codebook | np.ndarray) -> np.ndarray:
    return codebook.vectors.data if isinstance(codebook, Codebook) else np.asarray(codebook, dtype=np.float64)


def voronoi_radius(codebook: Codebook | np.ndarray) -> float:
    """
    Half the minimum pairwise Euclidean distance between codes.

    Raises:
        DegenerateCodebook: Fewer than two codes, or two identical codes.
    """
    vectors = _vectors(codebook)
    if vectors.shape[0] < 2:
        raise DegenerateCodebook("the Voronoi radius needs at least two codes")
    smallest = float(pdist(vectors).min())
    if smallest == 0.0:
        raise DegenerateCodebook("codebook contains duplicate vectors")
    return 0.5 * smallest


def nearest_code_distance(codebook: Codebook | np.ndarray) -> np.ndarray:
    """For every code, the distance to its closest other code."""
    distances = squareform(pdist(_vectors(codebook)))
    np.fill_diagonal(distances, np.inf)
    return distances.min(axis=1)


@dataclass(frozen=True, eq=False)
class GeometryReport:
    voronoi_radius: float
    distances: np.ndarray
    ratios: np.ndarray
    consistent: np.ndarray
    icr: float
    icr_by_quartile: list[float | None]
    strata: list[dict[str, Any]] = field(default_factory=list)
    spearman: float | None = None

    @property
    def mean_ratio(self) -> float:
        return float(self.ratios.mean())

    def summary(self) -> dict[str, Any]:
        ratio_skew = float(stats.skew(self.ratios)) if np.ptp(self.ratios) > 0 else None
        return {
            "voronoi_radius": self.voronoi_radius,
            "n_pairs": int(self.ratios.size),
            "icr": self.icr,
            "mean_ratio": self.mean_ratio,
            "std_ratio": float(self.ratios.std()),
            "skew_ratio": ratio_skew,
            "mean_distance": float(self.distances.mean()),
            "std_distance": float(self.distances.std()),
            "icr_by_quartile": self.icr_by_quartile,
            "strata": self.strata,
            "spearman_distance_consistency": self.spearman,
        }


def _rate(flags: np.ndarray) -> float | None:
    return float(flags.mean()) if flags.size else None


def geometry_report(h: np.ndarray, h_prime: np.ndarray, codebook: Codebook | np.ndarray) -> GeometryReport:
    """
    Distances, ratios and index consistency of latent pairs.

    Pairs are also grouped by the density around their original code: codes
    are split into quartiles of nearest-other-code distance (quartile 0 is the
    densest) and the ICR is reported per quartile, None where a quartile is
    empty.

    Args:
        h: (P, D) original latents, P >= 1.
        h_prime: (P, D) latents of the augmented views.
        codebook: Codebook or (K, D) code vectors.
    """
    h = np.asarray(h, dtype=np.float64)
    h_prime = np.asarray(h_prime, dtype=np.float64)
    if h.shape != h_prime.shape or h.ndim != 2 or h.shape[0] < 1:
        raise ShapeError(f"expected two equal (P, D) latent arrays, got {h.shape} and {h_prime.shape}")
    vectors = _vectors(codebook)
    radius = voronoi_radius(vectors)
    distances = np.linalg.norm(h - h_prime, axis=1)
    ratios = distances / radius
    z = _nearest(h, vectors)
    z_prime = _nearest(h_prime, vectors)
    consistent = z == z_prime

    density = nearest_code_distance(vectors)
    edges = np.quantile(density, [0.25, 0.5, 0.75])
    quartile = np.searchsorted(edges, density[z], side="right")
    icr_by_quartile = [_rate(consistent[quartile == q]) for q in range(4)]

    strata = []
    for low, high in RATIO_STRATA:
        inside = (ratios >= low) & (ratios < high)
        strata.append(
            {
                "low": low,
                "high": None if np.isinf(high) else high,
                "share": float(inside.mean()),
                "icr": _rate(consistent[inside]),
            }
        )

    spearman = None
    if np.ptp(distances) > 0 and np.ptp(consistent.astype(float)) > 0:
        spearman = float(stats.spearmanr(distances, consistent.astype(float)).statistic)
    report = GeometryReport(
        voronoi_radius=radius,
        distances=distances,
        ratios=ratios,
        consistent=consistent,
        icr=float(consistent.mean()),
        icr_by_quartile=icr_by_quartile,
        strata=strata,
        spearman=spearman,
    )
    logger.info(
        "geometry: r=%.4g, mean d/r=%.4g, ICR=%.4f over %d pairs", radius, report.mean_ratio, report.icr, distances.size
    )
    return report


def _nearest(latents: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    return np.argmin(cdist(latents, vectors, metric="sqeuclidean"), axis=1)
