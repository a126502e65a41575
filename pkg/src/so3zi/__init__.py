"""Exact arithmetic for SO3(Z[i]) and reduction in hyperbolic 3-space."""
