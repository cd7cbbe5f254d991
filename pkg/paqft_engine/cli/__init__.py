"""Command-line driver for paqft_engine."""
