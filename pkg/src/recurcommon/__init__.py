"""Common values of linear recurrences: hypothesis checks, bound certificates, search."""

__version__ = "0.1.0"
