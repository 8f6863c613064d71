#!/usr/bin/env python
"""Command-line entry point of the testproject.

Runs the django_utility_space commands, for example

    python manage.py generate --culture uniform --m 4 --n 1000 --seed 7 --out agents.jsonl
"""
import os
import sys


def main():
    """Run a management command, using the testproject settings by default."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "testproject.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the project with 'poetry install' "
            "and run the commands through 'poetry run python manage.py'."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
