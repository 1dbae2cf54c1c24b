"""Coherent-incoherent and under/overdamped boundaries versus delta.

Usage: python3 scripts/phase_boundaries.py
"""
from spinboson import locate_alpha_c, locate_alpha_star
from spinboson.io import write_csv

rows = []
for delta in (0.1, 0.03, 0.01, 0.003, 0.001):
    ac = locate_alpha_c(delta)
    ast = locate_alpha_star(delta, alpha_c=ac)
    rows.append((delta, ac, ast))
    print(f"delta={delta:<6g} alpha_c={ac:.5f} alpha_star={ast:.5f}")
write_csv("results/phase_boundaries.csv", ("delta", "alpha_c", "alpha_star"), rows)
