"""Group git repositories into related-project clusters via shared commits."""

__version__ = "0.1.0"
