"""Application layer: experiment specs, sweeps and use cases."""
