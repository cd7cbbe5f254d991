"""Utility helpers for paqft_engine."""
