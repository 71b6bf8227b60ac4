"""Exact coefficient arithmetic: cyclotomic fields, rational functions in y, truncated series."""
