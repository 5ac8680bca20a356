"""Run the bundled sample directory and print the summary table.

    python demos/batch_statistics.py [--format csv]
"""

import sys
from pathlib import Path

from subtropical.cli import batch_run, format_batch

SAMPLES = Path(__file__).resolve().parent.parent / "data" / "sample_instances"

fmt = "csv" if "--format" in sys.argv and sys.argv[-1] == "csv" else "table"
result = batch_run(SAMPLES, jobs=1)
print(format_batch(result, fmt))

s = result.summary
print(f"definite + remaining = {s.definite} + {s.remaining} = {s.instances} instances")
print(f"found + failed = {s.found} + {s.failed} = {s.remaining} remaining")
