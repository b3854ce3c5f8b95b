"""
Hybrid quantum-classical land-use classification on EuroSAT-style imagery
"""

__version__ = "0.3.0"
