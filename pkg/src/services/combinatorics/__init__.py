"""
Tile combinatorics: universe, trees, window partitions
"""
