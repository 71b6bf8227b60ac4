"""Exact elliptic genera of varieties, pairs and orbifolds as q,y-expansions."""
from .genus import elliptic_genus, functional_equation_check, specialize
from .jacobi import membership

__version__ = "0.1.0"

__all__ = ["elliptic_genus", "functional_equation_check", "specialize", "membership", "__version__"]
