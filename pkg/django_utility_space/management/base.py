"""Shared plumbing for the django_utility_space management commands."""

import logging
from typing import Any, Dict, List, Type

from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

logger = logging.getLogger(__name__)

# Exit codes of the commands.
EXIT_INVALID = 2
EXIT_IO = 3


def split_csv(text: str) -> List[str]:
    """Split a comma separated list of numbers, keeping the entries as text."""
    return [part.strip() for part in str(text).split(",")]


def format_errors(detail: Any) -> str:
    """Flatten the detail of a DRF ValidationError into one line."""
    if isinstance(detail, dict):
        return "; ".join(
            format_errors(value)
            if field == "non_field_errors"
            else f"{field}: {format_errors(value)}"
            for field, value in detail.items()
        )
    if isinstance(detail, list):
        return " ".join(format_errors(item) for item in detail)
    return str(detail)


class UtilitySpaceCommand(BaseCommand):
    """Base class translating errors into exit codes.

    Invalid input exits with 2 and input/output failures exit with 3. All
    diagnostics go to standard error, data to standard output or files.
    """

    def run(self, **options: Any) -> None:
        """Do the work of the command."""
        raise NotImplementedError

    def validate(
        self,
        serializer_class: Type[serializers.Serializer],
        data: Dict[str, Any],
        **kwargs: Any,
    ) -> Dict[str, Any]:
        """Validate options with a serializer and return the validated data."""
        serializer = serializer_class(data=data, **kwargs)
        serializer.is_valid(raise_exception=True)
        return serializer.validated_data

    def handle(self, *args: Any, **options: Any) -> None:
        """Run the command and map failures to exit codes."""
        try:
            self.run(**options)
        except serializers.ValidationError as exc:
            raise CommandError(format_errors(exc.detail), returncode=EXIT_INVALID) from exc
        except ValueError as exc:
            raise CommandError(str(exc), returncode=EXIT_INVALID) from exc
        except OSError as exc:
            raise CommandError(f"I/O error: {exc}", returncode=EXIT_IO) from exc
