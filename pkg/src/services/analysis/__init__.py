"""
Sampled Fourier analysis: bump, packets, transforms, multipliers, quadrature
"""
