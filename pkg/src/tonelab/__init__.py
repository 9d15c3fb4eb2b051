"""tonelab: fundamental tones of geodesic balls and numerical checks of
eigenvalue comparison theorems."""

__version__ = "0.1.0"
