"""Exact verification of local-global divisibility counterexamples on elliptic curves over Q."""
