"""Semi-algebraic sets and maps: exact signs, formulas, quantifier elimination and openness certificates."""
