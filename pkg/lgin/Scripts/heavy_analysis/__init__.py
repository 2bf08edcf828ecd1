"""
Heavy Analysis Module

Computationally intensive sweeps over parameter space.

Modules:
- parameter_scan: randomized and grid scans producing one ScanRecord per draw
"""
