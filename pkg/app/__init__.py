"""
Minimum cost connected subgraph solver suite

Solvers, a benchmark harness, a command line interface and a FastAPI
service that records solver runs in SQLite.
"""
