"""pitchlab: population-based self-play training, empirical-game analytics
and match tooling around a deterministic gridworld football game."""

__version__ = "0.1.0"
