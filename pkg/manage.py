#!/usr/bin/env python
"""Command-line entry point: solve, sweep, wavefunction and verify live here."""
import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'wells_project.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the packages in requirements.txt "
            "into the active environment before running the well solver."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
