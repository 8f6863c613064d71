"""Print the statistics report of a generated population."""

import json
import logging
from typing import Any

from django.core.management.base import CommandParser

from django_utility_space.constants import RecordFormat
from django_utility_space.exceptions import UtilitySpaceError
from django_utility_space.management.base import UtilitySpaceCommand, split_csv
from django_utility_space.population import Population
from django_utility_space.records import guess_format, population_from_records, read_records
from django_utility_space.serializers import BallSerializer
from django_utility_space.stats import order_report, population_report

logger = logging.getLogger(__name__)


class Command(UtilitySpaceCommand):
    """manage.py stats --in agents.jsonl --ball-center 1,0,0,-1 --ball-radius 0.5"""

    help = "Read a population written by generate and print its statistics as JSON."

    def add_arguments(self, parser: CommandParser) -> None:
        """Add the stats flags."""
        parser.add_argument("--in", required=True, dest="in_path", help="JSONL or CSV records.")
        parser.add_argument(
            "--format",
            choices=[fmt.value for fmt in RecordFormat],
            default=None,
            help="Record format, guessed from the file name by default.",
        )
        parser.add_argument("--tie-tol", type=float, default=None)
        parser.add_argument("--ball-center", default=None, help="Comma separated utilities.")
        parser.add_argument("--ball-radius", type=float, default=None)

    def run(self, **options: Any) -> None:
        """Read the records and write the report to standard output."""
        data = {}
        if options["tie_tol"] is not None:
            data["tie_tol"] = options["tie_tol"]
        if options["ball_center"] is not None:
            data["ball_center"] = split_csv(options["ball_center"])
        if options["ball_radius"] is not None:
            data["ball_radius"] = options["ball_radius"]
        ball = self.validate(BallSerializer, data)

        if options["format"]:
            fmt = RecordFormat(options["format"])
        else:
            fmt = guess_format(options["in_path"])
        with open(options["in_path"], encoding="utf-8", newline="") as stream:
            records = read_records(stream, fmt)
        logger.info("Read %d records from %s", len(records), options["in_path"])

        if not records:
            report = order_report([])
        else:
            drawn = population_from_records(records)
            if isinstance(drawn, Population):
                report = population_report(
                    drawn,
                    tie_tol=ball["tie_tol"],
                    ball_center=ball.get("ball_center"),
                    ball_radius=ball.get("ball_radius"),
                )
            elif ball.get("ball_center") is not None:
                raise UtilitySpaceError("Ball probabilities need agents with utility vectors.")
            else:
                report = order_report(drawn)
        self.stdout.write(json.dumps(report, indent=2))
