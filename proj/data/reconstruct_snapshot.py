#!/usr/bin/env python3
"""Rebuild the offline snapshot of the TB3MS / FEDFUNDS spread series.

This repository is built to run fully offline, so data/ carries a
reconstructed snapshot of the two monthly rate series rather than a
download. The reconstruction combines:

  * exact quarterly averages of the effective federal funds rate
    (1954q3-2010q4) as shipped in statsmodels' regime-switching test
    data (originally from the St. Louis Fed),
  * exact shifted-quarter averages of the 3-month Treasury bill rate
    (windows Feb-Apr 1959 through Aug-Oct 2009) from statsmodels'
    macrodata set,
  * hand-maintained monthly values everywhere else.

Within every anchored 3-month window the monthly values are shifted by a
common constant so the window average matches the anchor exactly; the
anchors tile the months disjointly, so the correction is well defined.

Months outside the anchored ranges (TB3MS before 1959-02 and after
2009-10, FEDFUNDS after 2010-12) carry the hand-maintained values as is.

The snapshot is therefore NOT the authoritative FRED vintage. Whenever
network access is available, prefer data/refresh_fred_spread.py, which
downloads the published series and rewrites the same files.
"""

import csv
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))

# ---------------------------------------------------------------------------
# Hand-maintained monthly values (percent per annum, FRED conventions).
# FEDFUNDS: monthly average effective federal funds rate.
# ---------------------------------------------------------------------------

FEDFUNDS = {
    1954: [None, None, None, None, None, None, 0.80, 1.22, 1.06, 0.85, 0.83, 1.28],
    1955: [1.39, 1.29, 1.35, 1.43, 1.43, 1.64, 1.68, 1.96, 2.18, 2.24, 2.35, 2.48],
    1956: [2.45, 2.50, 2.50, 2.62, 2.75, 2.71, 2.75, 2.73, 2.95, 2.96, 2.88, 2.94],
    1957: [2.84, 3.00, 2.96, 3.00, 3.00, 3.00, 2.99, 3.24, 3.47, 3.50, 3.47, 2.98],
    1958: [2.72, 1.67, 1.20, 1.26, 0.63, 0.93, 0.68, 1.53, 1.76, 1.80, 2.27, 2.42],
    1959: [2.48, 2.43, 2.80, 2.96, 2.90, 3.39, 3.47, 3.50, 3.76, 3.98, 4.00, 3.99],
    1960: [3.99, 3.97, 3.84, 3.92, 3.85, 3.32, 3.23, 2.98, 2.60, 2.47, 2.44, 1.98],
    1961: [1.45, 2.54, 2.02, 1.49, 1.98, 1.73, 1.17, 2.00, 1.88, 2.26, 2.61, 2.33],
    1962: [2.15, 2.37, 2.85, 2.78, 2.36, 2.68, 2.71, 2.93, 2.90, 2.90, 2.94, 2.93],
    1963: [2.92, 3.00, 2.98, 2.90, 3.00, 2.99, 3.02, 3.49, 3.48, 3.50, 3.48, 3.38],
    1964: [3.48, 3.48, 3.43, 3.47, 3.50, 3.50, 3.42, 3.50, 3.45, 3.36, 3.52, 3.85],
    1965: [3.90, 3.98, 4.04, 4.09, 4.10, 4.04, 4.09, 4.12, 4.01, 4.08, 4.10, 4.32],
    1966: [4.42, 4.60, 4.65, 4.67, 4.90, 5.17, 5.30, 5.53, 5.40, 5.53, 5.76, 5.40],
    1967: [4.94, 5.00, 4.53, 4.05, 3.94, 3.98, 3.79, 3.90, 3.99, 3.88, 4.13, 4.51],
    1968: [4.61, 4.71, 5.05, 5.76, 6.11, 6.07, 6.02, 6.03, 5.78, 5.91, 5.81, 6.02],
    1969: [6.30, 6.61, 6.79, 7.41, 8.67, 8.90, 8.61, 9.19, 9.15, 9.00, 8.85, 8.97],
    1970: [8.98, 8.98, 7.76, 8.10, 7.95, 7.61, 7.21, 6.62, 6.29, 6.20, 5.60, 4.90],
    1971: [4.14, 3.72, 3.71, 4.15, 4.63, 4.91, 5.31, 5.57, 5.55, 5.20, 4.91, 4.14],
    1972: [3.50, 3.29, 3.83, 4.17, 4.27, 4.46, 4.55, 4.80, 4.87, 5.04, 5.06, 5.33],
    1973: [5.94, 6.58, 7.09, 7.12, 7.84, 8.49, 10.40, 10.50, 10.78, 10.01, 10.03, 9.95],
    1974: [9.65, 8.97, 9.35, 10.51, 11.31, 11.93, 12.92, 12.01, 11.34, 10.06, 9.45, 8.53],
    1975: [7.13, 6.24, 5.54, 5.49, 5.22, 5.55, 6.10, 6.14, 6.24, 5.82, 5.22, 5.20],
    1976: [4.87, 4.77, 4.84, 4.82, 5.29, 5.48, 5.31, 5.29, 5.25, 5.02, 4.95, 4.65],
    1977: [4.61, 4.68, 4.69, 4.73, 5.35, 5.39, 5.42, 5.90, 6.14, 6.47, 6.51, 6.56],
    1978: [6.70, 6.78, 6.79, 6.89, 7.36, 7.60, 7.81, 8.04, 8.45, 8.96, 9.76, 10.03],
    1979: [10.07, 10.06, 10.09, 10.01, 10.24, 10.29, 10.47, 10.94, 11.43, 13.77, 13.18, 13.78],
    1980: [13.82, 14.13, 17.19, 17.61, 10.98, 9.47, 9.03, 9.61, 10.87, 12.81, 15.85, 18.90],
    1981: [19.08, 15.93, 14.70, 15.72, 18.52, 19.10, 19.04, 17.82, 15.87, 15.08, 13.31, 12.37],
    1982: [13.22, 14.78, 14.68, 14.94, 14.45, 14.15, 12.59, 10.12, 10.31, 9.71, 9.20, 8.95],
    1983: [8.68, 8.51, 8.77, 8.80, 8.63, 8.98, 9.37, 9.56, 9.45, 9.48, 9.34, 9.47],
    1984: [9.56, 9.59, 9.91, 10.29, 10.32, 11.06, 11.23, 11.64, 11.30, 9.99, 9.43, 8.38],
    1985: [8.35, 8.50, 8.58, 8.27, 7.97, 7.53, 7.88, 7.90, 7.92, 7.99, 8.05, 8.27],
    1986: [8.14, 7.86, 7.48, 6.99, 6.85, 6.92, 6.56, 6.17, 5.89, 5.85, 6.04, 6.91],
    1987: [6.43, 6.10, 6.13, 6.37, 6.85, 6.73, 6.58, 6.73, 7.22, 7.29, 6.69, 6.77],
    1988: [6.83, 6.58, 6.58, 6.87, 7.09, 7.51, 7.75, 8.01, 8.19, 8.30, 8.35, 8.76],
    1989: [9.12, 9.36, 9.85, 9.84, 9.81, 9.53, 9.24, 8.99, 9.02, 8.84, 8.55, 8.45],
    1990: [8.23, 8.24, 8.28, 8.26, 8.18, 8.29, 8.15, 8.13, 8.20, 8.11, 7.81, 7.31],
    1991: [6.91, 6.25, 6.12, 5.91, 5.78, 5.90, 5.82, 5.66, 5.45, 5.21, 4.81, 4.43],
    1992: [4.03, 4.06, 3.98, 3.73, 3.82, 3.76, 3.25, 3.30, 3.22, 3.10, 3.09, 2.92],
    1993: [3.02, 3.03, 3.07, 2.96, 3.00, 3.04, 3.06, 3.03, 3.09, 2.99, 3.02, 2.96],
    1994: [3.05, 3.25, 3.34, 3.56, 4.01, 4.25, 4.26, 4.47, 4.73, 4.76, 5.29, 5.45],
    1995: [5.53, 5.92, 5.98, 6.05, 6.01, 6.00, 5.85, 5.74, 5.80, 5.76, 5.80, 5.60],
    1996: [5.56, 5.22, 5.31, 5.22, 5.24, 5.27, 5.40, 5.22, 5.30, 5.24, 5.31, 5.29],
    1997: [5.25, 5.19, 5.39, 5.51, 5.50, 5.56, 5.52, 5.54, 5.54, 5.50, 5.52, 5.50],
    1998: [5.56, 5.51, 5.49, 5.45, 5.49, 5.56, 5.54, 5.55, 5.51, 5.07, 4.83, 4.68],
    1999: [4.63, 4.76, 4.81, 4.74, 4.74, 4.76, 4.99, 5.07, 5.22, 5.20, 5.42, 5.30],
    2000: [5.45, 5.73, 5.85, 6.02, 6.27, 6.53, 6.54, 6.50, 6.52, 6.51, 6.51, 6.40],
    2001: [5.98, 5.49, 5.31, 4.80, 4.21, 3.97, 3.77, 3.65, 3.07, 2.49, 2.09, 1.82],
    2002: [1.73, 1.74, 1.73, 1.75, 1.75, 1.75, 1.73, 1.74, 1.75, 1.75, 1.34, 1.24],
    2003: [1.24, 1.26, 1.25, 1.26, 1.26, 1.22, 1.01, 1.03, 1.01, 1.01, 1.00, 0.98],
    2004: [1.00, 1.01, 1.00, 1.00, 1.00, 1.03, 1.26, 1.43, 1.61, 1.76, 1.93, 2.16],
    2005: [2.28, 2.50, 2.63, 2.79, 3.00, 3.04, 3.26, 3.50, 3.62, 3.78, 4.00, 4.16],
    2006: [4.29, 4.49, 4.59, 4.79, 4.94, 4.99, 5.24, 5.25, 5.25, 5.25, 5.25, 5.24],
    2007: [5.25, 5.26, 5.26, 5.25, 5.25, 5.25, 5.26, 5.02, 4.94, 4.76, 4.49, 4.24],
    2008: [3.94, 2.98, 2.61, 2.28, 1.98, 2.00, 2.01, 2.00, 1.81, 0.97, 0.39, 0.16],
    2009: [0.15, 0.22, 0.18, 0.15, 0.18, 0.21, 0.16, 0.16, 0.15, 0.12, 0.12, 0.12],
    2010: [0.11, 0.13, 0.16, 0.20, 0.20, 0.18, 0.18, 0.19, 0.19, 0.19, 0.19, 0.18],
    2011: [0.17, 0.16, 0.14, 0.10, 0.09, 0.09, 0.07, 0.10, 0.08, 0.07, 0.08, 0.07],
    2012: [0.08, 0.10, 0.13, 0.14, 0.16, 0.16, 0.16, 0.13, 0.14, 0.16, 0.16, 0.16],
    2013: [0.14, 0.15, 0.14, 0.15, 0.11, 0.09, 0.09, 0.08, 0.08, 0.09, 0.08, 0.09],
    2014: [0.07, 0.07, 0.08, 0.09, 0.09, 0.10, 0.09, 0.09, 0.09, 0.09, 0.09, 0.12],
    2015: [0.11, 0.11, 0.11, 0.12, 0.12, 0.13, 0.13, 0.14, 0.14, 0.12, 0.12, 0.24],
    2016: [0.34, 0.38, 0.36, 0.37, 0.37, 0.38, 0.39, 0.40, 0.40, 0.40, 0.41, 0.54],
    2017: [0.65, 0.66, 0.79, 0.90, 0.91, 1.04, 1.15, 1.16, 1.15, 1.15, 1.16, 1.30],
    2018: [1.41, 1.42, 1.51, 1.69, 1.70, 1.82, 1.91, 1.91, 1.95, 2.19, 2.20, 2.27],
    2019: [2.40, 2.40, 2.41, 2.42, 2.39, 2.38, 2.40, None, None, None, None, None],
}

# TB3MS: monthly average 3-month Treasury bill secondary market rate,
# discount basis.
TB3MS = {
    1954: [None, None, None, None, None, None, 0.72, 0.92, 1.01, 0.98, 0.93, 1.15],
    1955: [1.23, 1.17, 1.28, 1.59, 1.45, 1.41, 1.60, 1.90, 2.07, 2.23, 2.24, 2.54],
    1956: [2.41, 2.32, 2.25, 2.60, 2.61, 2.49, 2.31, 2.60, 2.84, 2.90, 2.99, 3.21],
    1957: [3.11, 3.11, 3.08, 3.06, 3.06, 3.29, 3.16, 3.37, 3.53, 3.58, 3.29, 3.04],
    1958: [2.44, 1.54, 1.30, 1.13, 0.91, 0.83, 0.91, 1.69, 2.44, 2.63, 2.67, 2.77],
    1959: [2.84, 2.71, 2.85, 2.96, 2.85, 3.25, 3.24, 3.36, 4.00, 4.12, 4.21, 4.57],
    1960: [4.35, 3.96, 3.31, 3.23, 3.29, 2.46, 2.30, 2.30, 2.48, 2.30, 2.37, 2.25],
    1961: [2.24, 2.42, 2.39, 2.29, 2.29, 2.33, 2.24, 2.39, 2.28, 2.30, 2.48, 2.60],
    1962: [2.72, 2.73, 2.72, 2.73, 2.68, 2.73, 2.92, 2.82, 2.78, 2.74, 2.83, 2.87],
    1963: [2.91, 2.92, 2.89, 2.90, 2.92, 2.99, 3.18, 3.32, 3.38, 3.45, 3.52, 3.52],
    1964: [3.52, 3.52, 3.54, 3.47, 3.48, 3.48, 3.46, 3.50, 3.53, 3.57, 3.62, 3.84],
    1965: [3.81, 3.93, 3.93, 3.93, 3.89, 3.80, 3.83, 3.84, 3.91, 4.02, 4.08, 4.37],
    1966: [4.58, 4.65, 4.58, 4.61, 4.63, 4.50, 4.80, 4.95, 5.36, 5.33, 5.31, 4.96],
    1967: [4.72, 4.56, 4.26, 3.84, 3.60, 3.53, 4.20, 4.26, 4.42, 4.55, 4.72, 4.96],
    1968: [4.99, 4.97, 5.17, 5.37, 5.66, 5.52, 5.31, 5.08, 5.20, 5.35, 5.45, 5.94],
    1969: [6.13, 6.12, 6.02, 6.11, 6.03, 6.43, 6.98, 6.97, 7.08, 7.00, 7.24, 7.81],
    1970: [7.87, 7.13, 6.63, 6.50, 6.83, 6.67, 6.45, 6.41, 6.12, 5.90, 5.28, 4.87],
    1971: [4.44, 3.69, 3.38, 3.85, 4.13, 4.74, 5.39, 4.93, 4.69, 4.46, 4.22, 4.01],
    1972: [3.38, 3.20, 3.73, 3.71, 3.69, 3.91, 4.01, 4.02, 4.66, 4.74, 4.78, 5.07],
    1973: [5.41, 5.60, 6.09, 6.26, 6.36, 7.19, 8.01, 8.67, 8.29, 7.22, 7.83, 7.45],
    1974: [7.77, 7.12, 7.96, 8.33, 8.23, 7.90, 7.55, 8.96, 8.06, 7.46, 7.47, 7.15],
    1975: [6.26, 5.50, 5.49, 5.61, 5.23, 5.34, 6.13, 6.44, 6.42, 5.96, 5.48, 5.44],
    1976: [4.87, 4.88, 5.00, 4.86, 5.20, 5.41, 5.23, 5.14, 5.08, 4.92, 4.75, 4.35],
    1977: [4.62, 4.67, 4.60, 4.54, 4.96, 5.02, 5.19, 5.49, 5.81, 6.16, 6.10, 6.07],
    1978: [6.44, 6.45, 6.29, 6.29, 6.41, 6.73, 7.01, 7.08, 7.85, 7.99, 8.64, 9.08],
    1979: [9.35, 9.32, 9.48, 9.46, 9.61, 9.06, 9.24, 9.52, 10.26, 11.70, 11.79, 12.04],
    1980: [12.00, 12.86, 15.20, 13.20, 8.58, 7.07, 8.06, 9.13, 10.27, 11.62, 13.73, 15.49],
    1981: [15.02, 14.79, 13.36, 13.69, 16.30, 14.73, 14.95, 15.51, 14.70, 13.54, 10.86, 10.85],
    1982: [12.28, 13.48, 12.68, 12.70, 12.09, 12.47, 11.35, 8.68, 7.92, 7.71, 8.07, 7.94],
    1983: [7.86, 8.11, 8.35, 8.21, 8.19, 8.79, 9.08, 9.34, 9.00, 8.64, 8.76, 9.00],
    1984: [8.90, 9.09, 9.52, 9.69, 9.83, 9.87, 10.12, 10.47, 10.37, 9.74, 8.61, 8.06],
    1985: [7.76, 8.27, 8.52, 7.95, 7.48, 6.95, 7.08, 7.14, 7.10, 7.16, 7.24, 7.10],
    1986: [7.07, 7.06, 6.56, 6.06, 6.15, 6.21, 5.83, 5.53, 5.21, 5.18, 5.35, 5.49],
    1987: [5.43, 5.59, 5.59, 5.64, 5.66, 5.67, 5.69, 6.04, 6.40, 6.13, 5.69, 5.77],
    1988: [5.81, 5.66, 5.70, 5.91, 6.26, 6.46, 6.73, 7.06, 7.24, 7.35, 7.76, 8.07],
    1989: [8.27, 8.53, 8.82, 8.65, 8.43, 8.15, 7.88, 7.90, 7.75, 7.64, 7.69, 7.63],
    1990: [7.64, 7.74, 7.90, 7.77, 7.74, 7.73, 7.62, 7.45, 7.36, 7.17, 7.06, 6.74],
    1991: [6.22, 5.94, 5.91, 5.65, 5.46, 5.57, 5.58, 5.33, 5.22, 5.03, 4.60, 4.12],
    1992: [3.84, 3.84, 4.05, 3.81, 3.66, 3.70, 3.28, 3.14, 2.97, 2.93, 3.21, 3.29],
    1993: [3.06, 2.95, 2.97, 2.89, 3.00, 3.10, 3.05, 3.05, 2.96, 3.04, 3.12, 3.08],
    1994: [3.04, 3.33, 3.59, 3.78, 4.27, 4.25, 4.46, 4.61, 4.75, 5.10, 5.45, 5.76],
    1995: [5.90, 5.94, 5.91, 5.84, 5.85, 5.64, 5.59, 5.57, 5.43, 5.44, 5.52, 5.29],
    1996: [5.15, 4.96, 5.10, 5.09, 5.15, 5.23, 5.30, 5.19, 5.24, 5.12, 5.17, 5.04],
    1997: [5.17, 5.14, 5.28, 5.30, 5.20, 5.07, 5.19, 5.28, 5.08, 5.11, 5.28, 5.30],
    1998: [5.18, 5.23, 5.16, 5.08, 5.14, 5.12, 5.09, 5.04, 4.74, 4.07, 4.53, 4.50],
    1999: [4.45, 4.56, 4.57, 4.41, 4.63, 4.72, 4.69, 4.87, 4.82, 5.02, 5.23, 5.36],
    2000: [5.50, 5.73, 5.86, 5.82, 5.99, 5.86, 6.14, 6.28, 6.18, 6.29, 6.36, 5.94],
    2001: [5.29, 5.01, 4.54, 3.97, 3.70, 3.57, 3.59, 3.44, 2.69, 2.20, 1.91, 1.72],
    2002: [1.65, 1.73, 1.79, 1.72, 1.73, 1.70, 1.68, 1.62, 1.63, 1.58, 1.23, 1.19],
    2003: [1.17, 1.17, 1.13, 1.13, 1.07, 0.92, 0.90, 0.95, 0.94, 0.92, 0.93, 0.90],
    2004: [0.88, 0.93, 0.94, 0.94, 1.02, 1.27, 1.33, 1.48, 1.65, 1.76, 2.07, 2.19],
    2005: [2.33, 2.54, 2.74, 2.78, 2.84, 2.97, 3.22, 3.44, 3.42, 3.71, 3.88, 3.89],
    2006: [4.24, 4.43, 4.51, 4.60, 4.72, 4.79, 4.95, 4.96, 4.81, 4.92, 4.94, 4.85],
    2007: [4.98, 5.03, 4.94, 4.87, 4.73, 4.61, 4.82, 4.20, 3.89, 3.90, 3.35, 3.07],
    2008: [2.82, 2.17, 1.28, 1.31, 1.76, 1.89, 1.66, 1.75, 1.13, 0.67, 0.19, 0.03],
    2009: [0.13, 0.30, 0.22, 0.16, 0.18, 0.18, 0.18, 0.17, 0.12, 0.07, 0.05, 0.05],
    2010: [0.06, 0.11, 0.15, 0.16, 0.16, 0.12, 0.16, 0.16, 0.15, 0.13, 0.14, 0.14],
    2011: [0.15, 0.13, 0.10, 0.06, 0.04, 0.04, 0.04, 0.02, 0.01, 0.02, 0.01, 0.01],
    2012: [0.03, 0.09, 0.08, 0.08, 0.09, 0.09, 0.10, 0.10, 0.11, 0.10, 0.09, 0.07],
    2013: [0.07, 0.10, 0.09, 0.06, 0.04, 0.05, 0.04, 0.04, 0.02, 0.05, 0.07, 0.07],
    2014: [0.04, 0.05, 0.05, 0.03, 0.03, 0.04, 0.03, 0.03, 0.02, 0.02, 0.02, 0.03],
    2015: [0.03, 0.02, 0.03, 0.02, 0.02, 0.02, 0.03, 0.07, 0.02, 0.02, 0.11, 0.23],
    2016: [0.26, 0.31, 0.29, 0.23, 0.27, 0.27, 0.30, 0.30, 0.29, 0.33, 0.45, 0.51],
    2017: [0.51, 0.52, 0.74, 0.80, 0.89, 0.98, 1.07, 1.01, 1.03, 1.07, 1.23, 1.32],
    2018: [1.41, 1.57, 1.70, 1.76, 1.86, 1.90, 1.96, 2.03, 2.13, 2.25, 2.33, 2.37],
    2019: [2.37, 2.39, 2.40, 2.38, 2.35, 2.17, 2.10, None, None, None, None, None],
}

# ---------------------------------------------------------------------------
# Anchors.
# ---------------------------------------------------------------------------

# Quarterly averages of FEDFUNDS, 1954q3 .. 2010q4 (standard quarters).
FEDFUNDS_Q = [
    1.03, 0.99, 1.34, 1.5, 1.94, 2.36, 2.48, 2.69, 2.81, 2.93, 2.93, 3.0,
    3.23, 3.25, 1.86, 0.94, 1.32, 2.16, 2.57, 3.08, 3.58, 3.99, 3.93, 3.7,
    2.94, 2.3, 2.0, 1.73, 1.68, 2.4, 2.46, 2.61, 2.85, 2.92, 2.97, 2.96,
    3.33, 3.45, 3.46, 3.49, 3.46, 3.58, 3.97, 4.08, 4.07, 4.17, 4.56, 4.91,
    5.41, 5.56, 4.82, 3.99, 3.89, 4.17, 4.79, 5.98, 5.94, 5.92, 6.57, 8.33,
    8.98, 8.94, 8.57, 7.88, 6.7, 5.57, 3.86, 4.56, 5.47, 4.75, 3.54, 4.3,
    4.74, 5.14, 6.54, 7.82, 10.56, 10.0, 9.32, 11.25, 12.09, 9.35, 6.3,
    5.42, 6.16, 5.41, 4.83, 5.2, 5.28, 4.87, 4.66, 5.16, 5.82, 6.51, 6.76,
    7.28, 8.1, 9.58, 10.07, 10.18, 10.95, 13.58, 15.05, 12.69, 9.84, 15.85,
    16.57, 17.78, 17.58, 13.59, 14.23, 14.51, 11.01, 9.29, 8.65, 8.8, 9.46,
    9.43, 9.69, 10.56, 11.39, 9.27, 8.48, 7.92, 7.9, 8.1, 7.83, 6.92, 6.21,
    6.27, 6.22, 6.65, 6.84, 6.92, 6.66, 7.16, 7.98, 8.47, 9.44, 9.73, 9.08,
    8.61, 8.25, 8.24, 8.16, 7.74, 6.43, 5.86, 5.64, 4.82, 4.02, 3.77, 3.26,
    3.04, 3.04, 3.0, 3.06, 2.99, 3.21, 3.94, 4.49, 5.17, 5.81, 6.02, 5.8,
    5.72, 5.36, 5.24, 5.31, 5.28, 5.28, 5.52, 5.53, 5.51, 5.52, 5.5, 5.53,
    4.86, 4.73, 4.75, 5.09, 5.31, 5.68, 6.27, 6.52, 6.47, 5.59, 4.33, 3.5,
    2.13, 1.73, 1.75, 1.74, 1.44, 1.25, 1.25, 1.02, 1.0, 1.0, 1.01, 1.43,
    1.95, 2.47, 2.94, 3.46, 3.98, 4.46, 4.91, 5.25, 5.25, 5.26, 5.25, 5.07,
    4.5, 3.18, 2.09, 1.94, 0.51, 0.18, 0.18, 0.16, 0.12, 0.13, 0.19, 0.19,
    0.19,
]
FEDFUNDS_Q_START = (1954, 3)  # third quarter

# Shifted-quarter averages of TB3MS from the macro dataset: entry (y, q)
# covers months (3q-2+1 .. 3q+1), i.e. Feb-Apr, May-Jul, Aug-Oct, Nov-Jan.
TB3MS_QSHIFT = [
    2.82, 3.08, 3.82, 4.33, 3.5, 2.68, 2.36, 2.29, 2.37, 2.29, 2.32, 2.6,
    2.73, 2.78, 2.78, 2.87, 2.9, 3.03, 3.38, 3.52, 3.51, 3.47, 3.53, 3.76,
    3.93, 3.84, 3.93, 4.35, 4.62, 4.65, 5.23, 5.0, 4.22, 3.78, 4.42, 4.9,
    5.18, 5.5, 5.21, 5.85, 6.08, 6.49, 7.02, 7.64, 6.76, 6.66, 6.15, 4.86,
    3.65, 4.76, 4.7, 3.87, 3.55, 3.86, 4.47, 5.09, 5.98, 7.19, 8.06, 7.68,
    7.8, 7.89, 8.16, 6.96, 5.53, 5.57, 6.27, 5.26, 4.91, 5.28, 5.05, 4.57,
    4.6, 5.06, 5.82, 6.2, 6.34, 6.72, 7.64, 9.02, 9.42, 9.3, 10.49, 11.94,
    13.75, 7.9, 10.34, 14.75, 13.95, 15.33, 14.58, 11.33, 12.95, 11.97, 8.1,
    7.96, 8.22, 8.69, 8.99, 8.89, 9.43, 9.94, 10.19, 8.14, 8.25, 7.17, 7.13,
    7.14, 6.56, 6.06, 5.31, 5.44, 5.61, 5.67, 6.19, 5.76, 5.76, 6.48, 7.22,
    8.03, 8.67, 8.15, 7.76, 7.65, 7.8, 7.7, 7.33, 6.67, 5.83, 5.54, 5.18,
    4.14, 3.88, 3.5, 2.97, 3.12, 2.92, 3.02, 3.0, 3.05, 3.48, 4.2, 4.68,
    5.53, 5.72, 5.52, 5.32, 5.17, 4.91, 5.09, 5.04, 4.99, 5.1, 5.01, 5.02,
    5.11, 5.02, 4.98, 4.49, 4.38, 4.39, 4.54, 4.75, 5.2, 5.63, 5.81, 6.07,
    5.7, 4.39, 3.54, 2.72, 1.74, 1.75, 1.7, 1.61, 1.2, 1.14, 0.96, 0.94,
    0.9, 0.94, 1.21, 1.63, 2.2, 2.69, 3.01, 3.52, 4.0, 4.51, 4.82, 4.9,
    4.92, 4.95, 4.72, 4.0, 3.01, 1.56, 1.74, 1.17, 0.12, 0.22, 0.18, 0.12,
]
TB3MS_QSHIFT_START = (1959, 1)  # window Feb 1959 - Apr 1959

FIRST = (1954, 7)
LAST = (2019, 7)


def month_range(first, last):
    y, m = first
    while (y, m) <= last:
        yield y, m
        m += 1
        if m > 12:
            m = 1
            y += 1


def series_list(table):
    out = {}
    for (y, m) in month_range(FIRST, LAST):
        v = table.get(y, [None] * 12)[m - 1]
        if v is None:
            raise SystemExit(f"missing hand value for {y}-{m:02d}")
        out[(y, m)] = float(v)
    return out


def anchor_windows(series, anchors, start, window_of):
    """Shift each anchored 3-month window by a constant to match its mean."""
    adjusted = dict(series)
    report = []
    for i, target in enumerate(anchors):
        months = window_of(start, i)
        months = [ym for ym in months if FIRST <= ym <= LAST]
        if len(months) < 3:
            continue
        have = [series[ym] for ym in months]
        delta = target - sum(have) / len(have)
        for ym in months:
            adjusted[ym] = series[ym] + delta
        report.append((months[0], delta))
    return adjusted, report


def standard_quarter(start, i):
    y0, q0 = start
    qi = (q0 - 1) + i
    y = y0 + qi // 4
    q = qi % 4 + 1
    return [(y, 3 * (q - 1) + k) for k in (1, 2, 3)]


def shifted_quarter(start, i):
    y0, q0 = start
    qi = (q0 - 1) + i
    y = y0 + qi // 4
    q = qi % 4 + 1
    months = []
    for k in (-1, 0, 1):
        mm = 3 * q + k
        yy = y
        if mm > 12:
            mm -= 12
            yy += 1
        months.append((yy, mm))
    return months


def write_csv(path, series):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["date", "value"])
        for (y, m) in month_range(FIRST, LAST):
            w.writerow([f"{y:04d}-{m:02d}", f"{series[(y, m)]:.4f}"])


def main():
    ff = series_list(FEDFUNDS)
    tb = series_list(TB3MS)

    ff_adj, ff_report = anchor_windows(ff, FEDFUNDS_Q, FEDFUNDS_Q_START,
                                       standard_quarter)
    tb_adj, tb_report = anchor_windows(tb, TB3MS_QSHIFT, TB3MS_QSHIFT_START,
                                       shifted_quarter)

    big_ff = [(ym, d) for ym, d in ff_report if abs(d) > 0.15]
    big_tb = [(ym, d) for ym, d in tb_report if abs(d) > 0.15]
    print(f"fedfunds: {len(ff_report)} windows anchored, "
          f"{len(big_ff)} corrections above 0.15")
    print(f"tb3ms:    {len(tb_report)} windows anchored, "
          f"{len(big_tb)} corrections above 0.15")
    if "-v" in sys.argv:
        for ym, d in big_ff:
            print(f"  ff  {ym[0]}-{ym[1]:02d} delta {d:+.3f}")
        for ym, d in big_tb:
            print(f"  tb  {ym[0]}-{ym[1]:02d} delta {d:+.3f}")

    write_csv(os.path.join(HERE, "fedfunds.csv"), ff_adj)
    write_csv(os.path.join(HERE, "tb3ms.csv"), tb_adj)

    with open(os.path.join(HERE, "tbff_spread_1954_2019.csv"), "w",
              newline="") as f:
        w = csv.writer(f)
        w.writerow(["date", "value"])
        n = 0
        for ym in month_range(FIRST, LAST):
            w.writerow([f"{ym[0]:04d}-{ym[1]:02d}",
                        f"{tb_adj[ym] - ff_adj[ym]:.4f}"])
            n += 1
    print(f"spread: {n} observations written")
    assert n == 781


if __name__ == "__main__":
    main()
