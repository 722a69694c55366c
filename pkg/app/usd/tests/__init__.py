import math


OMEGAS = (0.1, 0.2, 0.4, math.pi / 6, math.pi / 4)
"""Angles the closed-form results are checked on."""
