"""Numerical engine and verification harness for generalized Rogers generating functions."""

ROGERS_ENGINE_VERSION = "1.0.0"

__all__ = ["ROGERS_ENGINE_VERSION"]
