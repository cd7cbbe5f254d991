"""Configuration utilities for paqft_engine."""
