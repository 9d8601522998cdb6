"""
zc-help

Exact HeLP / Luthar-Passi engine for torsion units of integral group rings.
"""

__version__ = "0.1.0"
