#!/usr/bin/env python3
"""Walk the bundled 737 Max model: print the findings, then contrast what
the Public can see against what the FAA was told.

Usage: python scripts/case_walkthrough.py
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from promisegraph import analyze_all, viewpoint
from promisegraph import corpus


def main() -> None:
    graph = corpus.load_graph()
    report = analyze_all(graph)

    print("model: %d agents, %d promises, %d impositions, %d assessments"
          % (len(graph.agents), len(graph.promises),
             len(graph.impositions), len(graph.assessments)))
    print()

    print("violations:")
    for finding in report.findings:
        if finding.severity.value != "violation":
            continue
        print("  %-24s %s" % (finding.rule.value, finding.message))
    print()

    print("census around the flight-control loop:")
    for (agent, topic), (offers_in, accepts_out) in sorted(report.census.items()):
        if agent != "MCAS":
            continue
        print("  %s/%s: %d offered in, %d accepted out"
              % (agent, topic, offers_in, accepts_out))
    print()

    public = {p.id for p in viewpoint(graph, "Public").graph.promises}
    faa = {p.id for p in viewpoint(graph, "FAA").graph.promises}
    print("promises the FAA saw that the Public never did:")
    for promise in graph.promises:
        if promise.id in faa and promise.id not in public:
            print("  %-28s %s -> %s" % (promise.id, promise.promiser,
                                        ", ".join(sorted(promise.promisees))))
    print()

    print("trust after the public assessments:")
    for (assessor, subject), value in sorted(report.trust.entries.items()):
        print("  %s -> %s: %.2f (from %.2f)"
              % (assessor, subject, value, report.trust.initial))


if __name__ == "__main__":
    main()
