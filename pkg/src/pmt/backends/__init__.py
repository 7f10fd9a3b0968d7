"""Raw power-source backends consumed by the sampler."""
