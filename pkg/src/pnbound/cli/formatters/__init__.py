"""Output formatters for CLI commands."""
