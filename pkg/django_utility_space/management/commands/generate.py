"""Generate a population of agents and write it as JSONL or CSV records."""

import logging
from typing import Any

from django.core.management.base import CommandParser

from django_utility_space.conf import get_setting
from django_utility_space.constants import CultureKind, MallowsMethod, RecordFormat
from django_utility_space.cultures import sample_population
from django_utility_space.management.base import UtilitySpaceCommand
from django_utility_space.population import Population
from django_utility_space.records import (
    guess_format,
    records_from_orders,
    records_from_population,
    write_records,
)
from django_utility_space.serializers import GenerateSerializer

logger = logging.getLogger(__name__)


class Command(UtilitySpaceCommand):
    """manage.py generate --culture uniform --m 4 --n 100 --seed 7 --out agents.jsonl"""

    help = "Draw n agents from a culture and write one record per agent."

    def add_arguments(self, parser: CommandParser) -> None:
        """Add the generation flags."""
        parser.add_argument(
            "--culture", required=True, choices=[kind.value for kind in CultureKind]
        )
        parser.add_argument("--m", required=True, type=int, help="Number of candidates.")
        parser.add_argument("--n", required=True, type=int, help="Number of agents.")
        parser.add_argument("--seed", required=True, type=int, help="Unsigned 64-bit seed.")
        parser.add_argument(
            "--kappa", type=float, default=0.0, help="Concentration of VMF or Mallows."
        )
        parser.add_argument(
            "--pole",
            default=None,
            help="Comma separated utilities for VMF, or an order such as 1>2>3 for Mallows.",
        )
        parser.add_argument("--indifference-prob", type=float, default=0.0)
        parser.add_argument(
            "--method",
            choices=[method.value for method in MallowsMethod],
            default=MallowsMethod.INSERTION.value,
            help="Mallows sampling method.",
        )
        parser.add_argument("--out", required=True, help="Output file.")
        parser.add_argument(
            "--format",
            choices=[fmt.value for fmt in RecordFormat],
            default=None,
            help="Record format, guessed from the output file name by default.",
        )

    def run(self, **options: Any) -> None:
        """Sample the population and write the records."""
        data = self.validate(
            GenerateSerializer,
            {
                "kind": options["culture"],
                "m": options["m"],
                "n": options["n"],
                "seed": options["seed"],
                "kappa": options["kappa"],
                "pole": options["pole"],
                "indifference_prob": options["indifference_prob"],
                "method": options["method"],
                "format": options["format"] or guess_format(options["out"]).value,
            },
        )
        spec = data["spec"]

        drawn = sample_population(spec, data["n"], method=data["method"])
        if isinstance(drawn, Population):
            records = records_from_population(drawn, get_setting("TIE_TOL"))
        else:
            records = records_from_orders(drawn)

        with open(options["out"], "w", encoding="utf-8", newline="") as stream:
            written = write_records(records, stream, data["format"])
        logger.info("Wrote %d records to %s", written, options["out"])
