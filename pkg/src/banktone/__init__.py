"""Central-bank minutes sentiment, bounded-rationality gaps, spectral lead-lag."""

__version__ = "0.1.0"
