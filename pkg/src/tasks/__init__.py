"""
Experiment Tasks
"""
