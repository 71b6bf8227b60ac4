"""
Blow-ups and K-equivalence
==========================

Blowing up a point of P^2 changes the elliptic genus, unless the
exceptional curve is recorded as a boundary divisor with the discrepancy
coefficient.  With it, the pair has the same genus as P^2.
"""

from genuslab import catalog
from genuslab.cli import coefficient_table
from genuslab.genus import elliptic_genus, specialize

p2 = elliptic_genus(catalog.get("p2"), qorder=2)
smooth = elliptic_genus(catalog.get("blowup-p2-smooth"), qorder=2)
pair = elliptic_genus(catalog.get("blowup-p2"), qorder=2)
twice = elliptic_genus(catalog.get("blowup-p2-twice"), qorder=2)

print("P2:")
print(coefficient_table(p2.series))
print("blow-up without boundary:")
print(coefficient_table(smooth.series))

print("pair equals P2:", pair.series == p2.series)
print("iterated blow-up pair equals P2:", twice.series == p2.series)

# The Todd genus does not see the boundary at all.
print("todd:", *(specialize(r, "todd") for r in (p2, smooth, pair, twice)))
print("euler:", *(specialize(r, "euler") for r in (p2, smooth, pair, twice)))
