"""End-to-end tests for the check suites and figure presets."""
