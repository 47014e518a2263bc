"""Test package marker so absolute imports like tests.integration work in pytest."""
