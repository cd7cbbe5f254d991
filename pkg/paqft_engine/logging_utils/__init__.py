"""Logging utilities for paqft_engine."""
