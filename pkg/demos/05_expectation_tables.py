#!/usr/bin/env python3
"""Tour of the benchmark harness: manifests of expected verdicts.

The package ships CSV manifests pairing model instances with the verdicts
they must produce.  The harness runs them and reports any drift.  This demo
runs the headline manifest (21 cases across all four fault models).
"""

import time
from importlib import resources

from tgmc.harness import run_manifest, summarize

manifest = str(resources.files("tgmc") / "tables" / "table1.csv")

print("=== headline expectations ===")
started = time.monotonic()
records = run_manifest(manifest)
elapsed = time.monotonic() - started

current = None
for r in records:
    key = (r.case.model, r.case.params)
    if key != current:
        current = key
        print(f"{r.case.model} {r.case.params}")
    mark = "ok " if r.match else "BAD"
    print(f"    {r.case.spec:<6} expected {r.case.expected:<9} "
          f"got {r.verdict:<9} {mark} "
          f"({r.states_stored} states, {r.elapsed_ms} ms)")

print()
print(summarize(records))
print(f"total wall time: {elapsed:.2f} s")
