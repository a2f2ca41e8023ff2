# Parallel Robot Adaptive Control Package
