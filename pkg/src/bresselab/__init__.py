"""bresselab - Fourier-space laboratory for thermoelastic Bresse systems.

Simulates the Type I and Type III thermoelastic Bresse systems mode by mode,
certifies energy identities and Lyapunov inequalities along trajectories and
measures the resulting decay rates.
"""

__version__ = "0.1.0"
