"""Test suite for the accelerating beam toolkit."""
