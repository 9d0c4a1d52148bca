"""Configuration package for pnbound."""
