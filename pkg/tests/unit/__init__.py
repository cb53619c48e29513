"""Unit tests for absentia."""
