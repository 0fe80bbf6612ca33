"""Frontend package for the indlift system."""
