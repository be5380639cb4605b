"""Contract tests for the artifact formats and the command line."""
