"""Print the distance between two raw utility vectors."""

from typing import Any

from django.core.management.base import CommandParser

from django_utility_space.constants import PRINT_DIGITS, Metric
from django_utility_space.geometry import cube_distance_m3, distance
from django_utility_space.management.base import UtilitySpaceCommand, split_csv
from django_utility_space.serializers import DistanceSerializer


class Command(UtilitySpaceCommand):
    """manage.py distance --u 0,0.71,-0.71 --v 0.57,0.22,-0.79"""

    help = "Canonicalise two utility vectors and print their distance in radians."

    def add_arguments(self, parser: CommandParser) -> None:
        """Add the distance flags."""
        parser.add_argument("--u", required=True, help="Comma separated utilities.")
        parser.add_argument("--v", required=True, help="Comma separated utilities.")
        parser.add_argument(
            "--metric", choices=[metric.value for metric in Metric], default=Metric.ROUND.value
        )

    def run(self, **options: Any) -> None:
        """Print the distance with 12 significant digits."""
        data = self.validate(
            DistanceSerializer,
            {
                "u": split_csv(options["u"]),
                "v": split_csv(options["v"]),
                "metric": options["metric"],
            },
        )
        if data["metric"] is Metric.CUBE3:
            value = cube_distance_m3(data["u"], data["v"])
        else:
            value = distance(data["u"], data["v"])
        self.stdout.write(format(value, f".{PRINT_DIGITS}g"))
