"""
Timing sweep
============

Bulletproof prove/verify times as n and m grow, written as the same CSV
rows the ``fort bench`` command prints.
"""

import sys

from fort.bench import bench_bulletproof, to_csv

rows = []
for n, m in ((8, 1), (16, 1), (32, 1), (64, 1), (64, 2)):
    rows += bench_bulletproof(n, m, repeat=2)
sys.stdout.write(to_csv(rows))

prove = [r.seconds for r in rows if r.operation == "bulletproof_prove"]
print("prove time grows with n*m:", prove == sorted(prove))
