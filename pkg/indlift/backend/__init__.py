"""Backend package for the indlift system."""
