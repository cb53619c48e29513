"""Command line interface: scenario files, tasks and reports."""
