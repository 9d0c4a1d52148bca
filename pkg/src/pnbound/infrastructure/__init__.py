"""Infrastructure layer: spec files, result files and plot scripts."""
