"""Error and tau-norm decay for the two examples with transcendental solutions.

One canonical table per problem serves every N of the sweep. CSV files go
to the current directory.
"""
from pathlib import Path

from abeltau.cli import format_csv, format_table, sweep_rows
from abeltau.problems import example

for k, ns in ((3, [4, 8, 10, 12, 14, 16, 18, 20]), (4, [2, 4, 6, 8, 10, 12, 14])):
    p = example(k)
    rows = sweep_rows(p, ns)
    print(f"\n{p.name}")
    print(format_table(rows, p.n))
    Path(f"{p.name}_sweep.csv").write_text(format_csv(rows, p.n))
