"""Analysis reports: one typed artifact, three renderings plus SVG charts.

Every numeric field carries its exactness marker: integer tables are exact
by construction, floating values state the tolerance they were computed
under.  The exact (drift) verdict and the empirical (return-series)
verdict always appear side by side; a disagreement between them is
rendered loudly rather than reconciled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .intmatrix import IntMatrix
from .lifting import ShiftChain

SCHEMA_VERSION = "1"
TOOL_VERSION = "0.1.0"


@dataclass(frozen=True)
class Report:
    input_name: str
    input_mode: str
    input_digest: str
    seed: int | None = None
    validation_ok: bool = True
    validation_issues: tuple[str, ...] = ()
    m_f: IntMatrix | None = None
    stretch_factor: float | None = None
    stretch_tolerance: float | None = None
    entropy: float | None = None
    chain: ShiftChain | None = None
    banded: str | None = None
    period: int | None = None
    drift_left: float | None = None
    drift_right: float | None = None
    drift_tolerance: float | None = None
    exact_balance: bool | None = None
    verdict_exact: str | None = None
    series_state: tuple[int, int] | None = None
    series_rows: tuple[tuple[int, int, int, float], ...] | None = None
    verdict_series: str | None = None
    simulation: dict | None = None

    @property
    def discrepancy(self) -> bool:
        """True when the exact and empirical verdicts both exist, both
        take a definite recurrence value, and disagree."""
        definite = ("NullRecurrent", "Transient")
        return (self.verdict_exact in definite
                and self.verdict_series in definite
                and self.verdict_exact != self.verdict_series)


def _float_entry(value: float, tolerance: float | None) -> dict:
    entry: dict = {"value": value}
    if tolerance is not None:
        entry["tolerance"] = tolerance
    return entry


def to_json_obj(report: Report) -> dict:
    obj: dict = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": TOOL_VERSION,
        "input": {
            "name": report.input_name,
            "mode": report.input_mode,
            "sha256": report.input_digest,
        },
        "seed": report.seed,
        "validation": {
            "ok": report.validation_ok,
            "issues": list(report.validation_issues),
        },
        "transition_matrix": None,
        "stretch_factor": None,
        "entropy": None,
        "chain": None,
        "banded": None,
        "classification": None,
        "return_series": None,
        "simulation": report.simulation,
        "verdicts": None,
    }
    if report.m_f is not None:
        obj["transition_matrix"] = {"exact": True, "rows": report.m_f.to_lists()}
    if report.stretch_factor is not None:
        obj["stretch_factor"] = _float_entry(report.stretch_factor,
                                             report.stretch_tolerance)
        obj["entropy"] = _float_entry(report.entropy,
                                      report.stretch_tolerance)
    if report.chain is not None:
        obj["chain"] = {
            "exact": True,
            "block_dim": report.chain.block_dim,
            "a_minus": report.chain.a_minus.to_lists(),
            "a_zero": report.chain.a_zero.to_lists(),
            "a_plus": report.chain.a_plus.to_lists(),
        }
    if report.banded is not None:
        obj["banded"] = {"irreducible": report.banded,
                         "period": report.period}
    if report.verdict_exact is not None:
        obj["classification"] = {
            "verdict": report.verdict_exact,
            "drift_left": _float_entry(report.drift_left,
                                       report.drift_tolerance),
            "drift_right": _float_entry(report.drift_right,
                                        report.drift_tolerance),
            "exact_balance": bool(report.exact_balance),
            "positive_recurrent_note":
                "positive recurrence is impossible for level-homogeneous "
                "chains (stationary weights repeat on every level)",
        }
    if report.series_rows is not None:
        obj["return_series"] = {
            "state": list(report.series_state),
            "rows": [[n, a, f, s] for n, a, f, s in report.series_rows],
            "verdict": report.verdict_series,
        }
    if report.verdict_exact is not None and report.verdict_series is not None:
        obj["verdicts"] = {
            "exact": report.verdict_exact,
            "empirical": report.verdict_series,
            "discrepancy": report.discrepancy,
        }
    return obj


def render_json(report: Report) -> str:
    return json.dumps(to_json_obj(report), indent=2, sort_keys=False) + "\n"


def _grid_lines(m: IntMatrix, indent: str = "  ") -> list[str]:
    width = max(len(str(x)) for row in m.entries for x in row)
    return [indent + " ".join(f"{x:>{width}}" for x in row)
            for row in m.entries]


def render_text(report: Report) -> str:
    lines = [f"pennerlift report (tool {TOOL_VERSION})"]
    lines.append(f"input: {report.input_name} ({report.input_mode}), "
                 f"sha256 {report.input_digest[:16]}...")
    if report.seed is not None:
        lines.append(f"seed: {report.seed}")
    if report.validation_ok:
        lines.append("validation: ok")
    else:
        lines.append("validation: FAILED")
    for issue in report.validation_issues:
        lines.append(f"  - {issue}")
    if report.m_f is not None:
        lines.append("transition matrix (exact integers):")
        lines.extend(_grid_lines(report.m_f))
    if report.stretch_factor is not None:
        tol = report.stretch_tolerance
        marker = f" (tol {tol:g})" if tol is not None else ""
        lines.append(f"stretch factor: {report.stretch_factor!r}{marker}")
        lines.append(f"entropy: {report.entropy!r} (natural log)")
    if report.chain is not None:
        d = report.chain.block_dim
        lines.append(f"level blocks (exact integers, d={d}):")
        for name, block in (("a_minus", report.chain.a_minus),
                            ("a_zero", report.chain.a_zero),
                            ("a_plus", report.chain.a_plus)):
            lines.append(f"  {name}:")
            lines.extend(_grid_lines(block, indent="    "))
    if report.banded is not None:
        lines.append(f"banded checks: irreducible={report.banded} "
                     f"period={report.period}")
    if report.verdict_exact is not None:
        lines.append(f"drift: left={report.drift_left!r} "
                     f"right={report.drift_right!r} "
                     f"(tol {report.drift_tolerance:g}"
                     + (", exact balance)" if report.exact_balance else ")"))
        lines.append("note: positive recurrence impossible "
                     "(level-homogeneous stationary weights)")
        lines.append(f"verdict (exact drift):   {report.verdict_exact}")
    if report.verdict_series is not None:
        state = report.series_state
        lines.append(f"verdict (return series): {report.verdict_series}"
                     f"   [state ({state[0]},{state[1]}), "
                     f"N={len(report.series_rows)}]")
    if report.verdict_exact is not None and report.verdict_series is not None:
        if report.discrepancy:
            lines.append(f"agreement: *** DISCREPANCY: exact "
                         f"{report.verdict_exact} vs empirical "
                         f"{report.verdict_series} ***")
        else:
            lines.append("agreement: ok")
    if report.series_rows is not None:
        lines.append("return series (n, a_n, f_n, partial_sum):")
        for n, a, f, s in report.series_rows:
            lines.append(f"  {n} {a} {f} {s!r}")
    if report.simulation is not None:
        lines.append("simulation:")
        for key, value in report.simulation.items():
            lines.append(f"  {key}: {value!r}")
    return "\n".join(lines) + "\n"


def render_csv(report: Report) -> str:
    """Flat key,value rows, then the return-series table if present."""
    rows = [("schema_version", SCHEMA_VERSION),
            ("tool_version", TOOL_VERSION),
            ("input_name", report.input_name),
            ("input_mode", report.input_mode),
            ("input_sha256", report.input_digest),
            ("validation_ok", str(report.validation_ok).lower())]
    if report.stretch_factor is not None:
        rows.append(("stretch_factor", repr(report.stretch_factor)))
        rows.append(("stretch_tolerance", f"{report.stretch_tolerance:g}"))
        rows.append(("entropy", repr(report.entropy)))
    if report.banded is not None:
        rows.append(("banded_irreducible", report.banded))
        rows.append(("period", str(report.period)))
    if report.verdict_exact is not None:
        rows.append(("drift_left", repr(report.drift_left)))
        rows.append(("drift_right", repr(report.drift_right)))
        rows.append(("verdict_exact", report.verdict_exact))
    if report.verdict_series is not None:
        rows.append(("verdict_series", report.verdict_series))
        rows.append(("discrepancy", str(report.discrepancy).lower()))
    out = ["key,value"]
    out.extend(f"{k},{v}" for k, v in rows)
    if report.series_rows is not None:
        out.append("")
        out.append("n,a_n,f_n,partial_sum")
        for n, a, f, s in report.series_rows:
            out.append(f"{n},{a},{f},{s!r}")
    return "\n".join(out) + "\n"


# -- minimal deterministic SVG charts -----------------------------------------


def _polyline(points: list[tuple[float, float]], x0: float, y0: float,
              w: float, h: float) -> str:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0
    coords = []
    for x, y in points:
        px = x0 + (x - x_lo) / x_span * w
        py = y0 + h - (y - y_lo) / y_span * h
        coords.append(f"{px:.2f},{py:.2f}")
    return ("<polyline fill='none' stroke='black' stroke-width='1' "
            f"points='{' '.join(coords)}'/>")


def svg_chart(panels: list[tuple[str, list[tuple[float, float]]]]) -> str:
    """Side-by-side line panels; output is a pure function of the input."""
    width, height, margin = 320, 240, 40
    total_w = len(panels) * width
    parts = [f"<svg xmlns='http://www.w3.org/2000/svg' "
             f"width='{total_w}' height='{height}'>"]
    for k, (title, points) in enumerate(panels):
        x0 = k * width + margin
        y0 = margin
        w = width - 2 * margin
        h = height - 2 * margin
        parts.append(f"<rect x='{x0}' y='{y0}' width='{w}' height='{h}' "
                     "fill='none' stroke='gray' stroke-width='0.5'/>")
        parts.append(f"<text x='{x0}' y='{margin - 10}' "
                     f"font-size='12'>{title}</text>")
        if len(points) >= 2:
            parts.append(_polyline(points, x0, y0, w, h))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
