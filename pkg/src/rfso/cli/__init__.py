"""Command-line front end: configuration parsing, sweeps and output writers."""
