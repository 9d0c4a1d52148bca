"""Command-line interface for pnbound."""
