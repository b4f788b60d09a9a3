"""Bundled scenario files for the figure-reproduction commands."""
