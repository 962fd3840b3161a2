"""Argument parsing, document loading and logging for the command line."""
