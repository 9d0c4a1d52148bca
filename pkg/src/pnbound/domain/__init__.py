"""Domain layer: phase-noise model, likelihoods and bound computations."""
