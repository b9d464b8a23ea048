"""
tiletree - desk-scale time-frequency tile toolkit
"""

__version__ = "0.1.0"
