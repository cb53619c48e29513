"""absentia test suite."""
