"""
Instance I/O, solver runs, benchmarks and analytics.
"""
