#!/usr/bin/env python3
"""Regenerate the pinned corpus outputs under src/promisegraph/corpus/golden/.

Run after any deliberate change to the corpus or the analysis rules, then
review the diff by hand before committing. Tests compare against these bytes
exactly, so an unreviewed regeneration can silently bless a regression.
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from promisegraph import ReportFormat, analyze_all, render_report, to_dot, viewpoint
from promisegraph import corpus


def main() -> None:
    golden = pathlib.Path(__file__).resolve().parents[1] \
        / "src" / "promisegraph" / "corpus" / "golden"
    golden.mkdir(parents=True, exist_ok=True)

    graph = corpus.load_graph()

    report = analyze_all(graph)
    report_bytes = render_report(report, ReportFormat.JSON).encode("utf-8")
    (golden / "report.json").write_bytes(report_bytes)
    print("wrote report.json (%d bytes, %d findings)"
          % (len(report_bytes), len(report.findings)))

    dot = to_dot(viewpoint(graph, "Public").graph).encode("utf-8")
    (golden / "public-view.dot").write_bytes(dot)
    print("wrote public-view.dot (%d bytes)" % len(dot))


if __name__ == "__main__":
    main()
