"""
Selection: mass and energy pruning, main decomposition
"""
