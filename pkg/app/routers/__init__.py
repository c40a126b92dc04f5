"""
API routers for the solver service.
"""
