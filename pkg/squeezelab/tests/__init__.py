"""Unit tests for squeezelab."""
