"""Check whether a point belongs to the sum of a set of points."""

from typing import Any

from django.core.management.base import CommandParser

from django_utility_space.conf import get_setting
from django_utility_space.lottery import sum_contains, unanimity_oracle
from django_utility_space.management.base import UtilitySpaceCommand, split_csv
from django_utility_space.records import read_utility_vectors
from django_utility_space.serializers import SumCheckSerializer


def _flag(value: bool) -> str:
    return "true" if value else "false"


class Command(UtilitySpaceCommand):
    """manage.py sumcheck --set points.jsonl --v 1,0,-1 --oracle-grid 4096"""

    help = (
        "Print true if v is in the sum of the set, that is if v respects every "
        "unanimous preference of the set, and false otherwise."
    )

    def add_arguments(self, parser: CommandParser) -> None:
        """Add the sumcheck flags."""
        parser.add_argument(
            "--set", required=True, dest="set_path", help="JSONL file of utility vectors."
        )
        parser.add_argument("--v", required=True, help="Comma separated utilities.")
        parser.add_argument(
            "--oracle-grid",
            type=int,
            default=None,
            help="Also run the brute-force unanimity oracle with this many grid directions.",
        )

    def run(self, **options: Any) -> None:
        """Print the membership, then the oracle verdict and the agreement if asked."""
        with open(options["set_path"], encoding="utf-8") as stream:
            vectors = read_utility_vectors(stream)
        data = self.validate(
            SumCheckSerializer,
            {"set": vectors, "v": split_csv(options["v"]), "oracle_grid": options["oracle_grid"]},
        )

        member = sum_contains(data["set"], data["v"], tol=get_setting("CONE_TOL"))
        self.stdout.write(_flag(member))
        if data.get("oracle_grid"):
            oracle = unanimity_oracle(data["set"], data["v"], data["oracle_grid"])
            self.stdout.write(f"oracle={_flag(oracle)}")
            self.stdout.write(f"agree={_flag(oracle == member)}")
