"""Names for open sets and real points, budgets, and coverage semidecisions."""
