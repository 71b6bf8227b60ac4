"""
Higher elliptic genera of a torus
=================================

Pairing the elliptic class with a class pulled back from the classifying
space of the fundamental group gives a Jacobi form of negative weight.
"""

from genuslab import catalog
from genuslab.cli import coefficient_table
from genuslab.genus import elliptic_genus
from genuslab.jacobi import generator_expansion, membership

T = catalog.get("torus2")

# Without a pulled-back class the genus of a torus vanishes.
print("Ell(T2) is zero:", elliptic_genus(T).series.is_zero())

r = elliptic_genus(T, alpha="omega", qorder=3)
print(f"weight {r.weight}, index {r.index}")
print(coefficient_table(r.series))

phi = generator_expansion("phiM1half", r.series.trunc, r.series.profile)
print("Ell_omega(T2) = -phiM1half:", r.series == phi * -1)
print("membership:", {k: str(v) for k, v in membership(r).compact().items()})
