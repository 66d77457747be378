"""Configuration, constants and shared types."""
