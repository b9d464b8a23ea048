"""
Size functionals: mass, energy, G_J
"""
