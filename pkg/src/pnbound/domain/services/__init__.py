"""Numerical domain services."""
