"""Effective openness: moduli of openness, image operators, and the effective inverse function theorem."""
