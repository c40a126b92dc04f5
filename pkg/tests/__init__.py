"""
Test suite for the connected subgraph solvers.
"""
