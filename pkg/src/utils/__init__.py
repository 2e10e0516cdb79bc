"""Shared utilities: logging, progress output, files and seeding."""
