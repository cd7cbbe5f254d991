"""Rewrite and pipeline counters for paqft_engine."""
