"""Helpers shared across the squeezelab modules."""
