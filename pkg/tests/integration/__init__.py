"""Integration tests for absentia."""
