# Test package for Agent/Skill Optimizer
