"""weaktile: exact tiling / spectrality / weak-tiling certificates on
finite abelian groups, and the lonely-weak-tile construction."""

__version__ = "0.1.0"
