"""Command-line layer: documents, tasks, reports."""
