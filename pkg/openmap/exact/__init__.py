"""Exact rational arithmetic, intervals, geometry, expressions and certified linear algebra."""
