"""Real Cremona Involutions Package."""

__version__ = "1.0.0"
