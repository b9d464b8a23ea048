"""
Operators and inequality checks
"""
