#!/usr/bin/env python3
"""Refresh the vendored rate series from the primary source.

Downloads the monthly TB3MS (3-month Treasury bill, secondary market) and
FEDFUNDS (effective federal funds rate) series from the St. Louis Fed,
clips them to 1954-07 .. 2019-07 and rewrites

    data/tb3ms.csv
    data/fedfunds.csv
    data/tbff_spread_1954_2019.csv   (value = TB3MS - FEDFUNDS, 781 rows)

Requires network access. Without it, the repository falls back on the
reconstructed snapshot produced by data/reconstruct_snapshot.py; see
data/README_data.md for what that entails.
"""

import csv
import io
import os
import sys
import urllib.request

HERE = os.path.dirname(os.path.abspath(__file__))
FRED = "https://fred.stlouisfed.org/graph/fredgraph.csv?id={sid}"
FIRST, LAST = "1954-07", "2019-07"


def fetch(series_id):
    with urllib.request.urlopen(FRED.format(sid=series_id), timeout=60) as resp:
        text = resp.read().decode("utf-8")
    rows = {}
    for rec in csv.DictReader(io.StringIO(text)):
        date = rec.get("DATE") or rec.get("observation_date")
        value = rec.get(series_id)
        if not date or value in (None, "", "."):
            continue
        ym = date[:7]
        if FIRST <= ym <= LAST:
            rows[ym] = float(value)
    return rows


def write_series(path, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["date", "value"])
        for ym in sorted(rows):
            w.writerow([ym, f"{rows[ym]:.4f}"])


def main():
    tb = fetch("TB3MS")
    ff = fetch("FEDFUNDS")
    common = sorted(set(tb) & set(ff))
    if len(common) != 781:
        sys.exit(f"expected 781 overlapping months in {FIRST}..{LAST}, "
                 f"got {len(common)}")
    write_series(os.path.join(HERE, "tb3ms.csv"), tb)
    write_series(os.path.join(HERE, "fedfunds.csv"), ff)
    spread = {ym: tb[ym] - ff[ym] for ym in common}
    write_series(os.path.join(HERE, "tbff_spread_1954_2019.csv"), spread)
    print(f"refreshed {len(common)} months from FRED")


if __name__ == "__main__":
    main()
