"""Exterior derivative regression on manifolds."""
