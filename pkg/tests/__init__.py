"""boxkit test suite."""
