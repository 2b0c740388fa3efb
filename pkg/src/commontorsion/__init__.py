"""Common torsion x-coordinates of elliptic double covers and genus-2 packets."""

__version__ = "0.1.0"
