import io
import csv
import logging
import math
from typing import List, Literal, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from exceptions import InvalidCounts, InvalidRange
from groverlong import compute_tmax, rotation_angle
from minsearch import SearchTrace, dha_budget

logger = logging.getLogger(__name__)

# (pi/2)(sqrt(2) + 1), the prefactor of the closed-form iteration total
_RG_PREFACTOR = (math.pi / 2) * (math.sqrt(2) + 1)


class ComplexityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_size: int
    m0: int
    t_max: float
    t_max_asymptotic: float
    r_g: float
    r_g_series: float
    series_gap: float
    r_init: float
    r_total: float
    dha_bound: float


class CurveRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    N: int
    r_total: float
    dha_bound: float


class DiagnosticRow(BaseModel):
    round: int
    est_ratio: float
    actual_ratio: float
    gap: float
    rotation: float = 0.0
    matched_rotation: float = 0.0
    flagged: bool = False


def _halving_series(n_size: int, m0: int) -> float:
    """(pi/2) sum_k sqrt(N / M_k), M_{k+1} = M_k / 2, while M_k >= 1."""
    total = 0.0
    m_k = float(m0)
    while m_k >= 1.0:
        total += math.sqrt(n_size / m_k)
        m_k /= 2.0
    return (math.pi / 2) * total


def complexity_report(n_size: int, m0: int) -> ComplexityReport:
    """
    Purpose:
        Evaluate the analytic cost model for a database of N items whose first
        main loop has M0 marked states:

            t_max      = floor((pi/2 - b)/b) + 1,  b = arcsin(sqrt(M0/N))
            t_max_asym = (pi/2) sqrt(N/M0)
            R_G        = (pi/2)(sqrt2 + 1)(sqrt(2N) - sqrt(N/M0))
            R_init     = (log2 N)^2
            R          = R_G + R_init
            DHA bound  = 22.5 sqrt(N) + 1.4 (log2 N)^2

        R_G is also summed explicitly under the halving assumption; the
        relative difference is reported as `series_gap`.

    Raises:
        InvalidCounts: unless 1 <= m0 <= n_size and n_size >= 2.
    """
    if n_size < 2 or m0 < 1 or m0 > n_size:
        raise InvalidCounts(f"Need N >= 2 and 1 <= M0 <= N, got N={n_size}, M0={m0}", n_size=n_size, m0=m0)

    r_g = _RG_PREFACTOR * (math.sqrt(2 * n_size) - math.sqrt(n_size / m0))
    r_g_series = _halving_series(n_size, m0)
    r_init = math.log2(n_size) ** 2
    series_gap = abs(r_g_series - r_g) / r_g if r_g > 0 else math.inf
    if series_gap > 0.05:
        logger.info(f"Closed-form R_G differs from the halving sum by {series_gap:.1%} (N={n_size}, M0={m0})")

    return ComplexityReport(
        n_size=n_size,
        m0=m0,
        t_max=float(compute_tmax(m0, n_size)),
        t_max_asymptotic=(math.pi / 2) * math.sqrt(n_size / m0),
        r_g=r_g,
        r_g_series=r_g_series,
        series_gap=series_gap,
        r_init=r_init,
        r_total=r_g + r_init,
        dha_bound=dha_budget(n_size),
    )


def complexity_curve(n_min: int, n_max: int, m0_rule: Literal["half", "one"] = "half") -> List[CurveRow]:
    """One row per qubit count n in [n_min, n_max], N = 2**n."""
    if not (2 <= n_min <= n_max <= 40):
        raise InvalidRange(f"Need 2 <= from <= to <= 40, got from={n_min}, to={n_max}", n_min=n_min, n_max=n_max)
    if m0_rule not in ("half", "one"):
        raise InvalidRange(f"Unknown M0 rule: {m0_rule!r}", m0_rule=m0_rule)

    rows = []
    for n in range(n_min, n_max + 1):
        n_size = 2 ** n
        report = complexity_report(n_size, n_size // 2 if m0_rule == "half" else 1)
        rows.append(CurveRow(N=n_size, r_total=report.r_total, dha_bound=report.dha_bound))
    return rows


def curve_to_csv(rows: Sequence[CurveRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["N", "r_total", "dha_bound"])
    for row in rows:
        writer.writerow([row.N, f"{row.r_total:.6f}", f"{row.dha_bound:.6f}"])
    return buffer.getvalue()


def estimation_diagnostic(trace: SearchTrace) -> List[DiagnosticRow]:
    """
    Per-round ratio of the estimated marked fraction (d'+1)/2**n to the actual
    M/size, plus the per-iteration rotation of the round's phase under the
    actual fraction (`rotation`) and under the estimate (`matched_rotation`).
    """
    rows = []
    for i, rec in enumerate(trace.rounds):
        matched = rotation_angle(math.asin(math.sqrt(min(1.0, rec.est_ratio))), rec.phi)
        if rec.actual_ratio > 0:
            rows.append(
                DiagnosticRow(
                    round=i,
                    est_ratio=rec.est_ratio,
                    actual_ratio=rec.actual_ratio,
                    gap=rec.est_ratio / rec.actual_ratio,
                    rotation=rotation_angle(math.asin(math.sqrt(rec.actual_ratio)), rec.phi),
                    matched_rotation=matched,
                )
            )
        else:
            rows.append(
                DiagnosticRow(
                    round=i,
                    est_ratio=rec.est_ratio,
                    actual_ratio=0.0,
                    gap=math.inf,
                    matched_rotation=matched,
                    flagged=True,
                )
            )
    return rows


def fit_growth_exponent(sizes: Sequence[float], costs: Sequence[float]) -> float:
    """Least-squares slope of log(cost) against log(N)."""
    if len(sizes) != len(costs) or len(sizes) < 2:
        raise InvalidCounts("Need at least two (N, cost) points of equal length")
    slope, _ = np.polyfit(np.log(np.asarray(sizes, dtype=float)), np.log(np.asarray(costs, dtype=float)), 1)
    return float(slope)
