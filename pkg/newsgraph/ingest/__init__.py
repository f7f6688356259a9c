"""Label merging, blocklist audits, parked-page detection, and synthetic data."""
