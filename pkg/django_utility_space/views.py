"""REST views exposing the utility space computations."""

import logging
from typing import Any

from django.http import HttpRequest
from rest_framework import permissions, status, viewsets
from rest_framework.decorators import action
from rest_framework.exceptions import ValidationError
from rest_framework.response import Response

from django_utility_space.conf import get_setting
from django_utility_space.constants import Metric
from django_utility_space.cultures import sample_population
from django_utility_space.exceptions import UtilitySpaceError
from django_utility_space.geometry import cube_distance_m3, distance
from django_utility_space.lottery import sum_contains, unanimity_oracle
from django_utility_space.population import Population
from django_utility_space.records import records_from_orders, records_from_population
from django_utility_space.serializers import (
    DistanceSerializer,
    GenerateSerializer,
    StatsSerializer,
    SumCheckSerializer,
)
from django_utility_space.stats import population_report

logger = logging.getLogger(__name__)


class UtilitySpaceViewSet(viewsets.ViewSet):
    """Stateless computations on the utility space.

    Every action takes a JSON body and answers with a JSON object. Errors
    raised by the library become 400 responses.
    """

    permission_classes = [permissions.IsAuthenticated]

    def handle_exception(self, exc: Exception) -> Response:
        """Report library errors as validation errors."""
        if isinstance(exc, UtilitySpaceError):
            exc = ValidationError({"detail": str(exc)})
        return super().handle_exception(exc)

    @action(detail=False, methods=["POST"])
    def distance(self, request: HttpRequest, **kwargs: Any) -> Response:
        """Return the distance between two raw utility vectors."""
        serializer = DistanceSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data

        if data["metric"] is Metric.CUBE3:
            value = cube_distance_m3(data["u"], data["v"])
        else:
            value = distance(data["u"], data["v"])
        return Response(
            {
                "metric": data["metric"].value,
                "distance": value,
                "u": list(data["u"].values),
                "v": list(data["v"].values),
            },
            status=status.HTTP_200_OK,
        )

    @action(detail=False, methods=["POST"])
    def sumcheck(self, request: HttpRequest, **kwargs: Any) -> Response:
        """Tell whether v belongs to the sum of a set of points."""
        serializer = SumCheckSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data

        member = sum_contains(data["set"], data["v"], tol=get_setting("CONE_TOL"))
        result = {"member": member}
        if data.get("oracle_grid"):
            oracle = unanimity_oracle(data["set"], data["v"], data["oracle_grid"])
            result.update({"oracle": oracle, "agree": oracle == member})
        return Response(result, status=status.HTTP_200_OK)

    @action(detail=False, methods=["POST"])
    def generate(self, request: HttpRequest, **kwargs: Any) -> Response:
        """Generate a population and return its records."""
        serializer = GenerateSerializer(
            data=request.data, max_population=int(get_setting("MAX_API_POPULATION"))
        )
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data
        spec = data["spec"]

        drawn = sample_population(spec, data["n"], method=data["method"])
        if isinstance(drawn, Population):
            records = records_from_population(drawn, get_setting("TIE_TOL"))
        else:
            records = records_from_orders(drawn)
        logger.info("Generated %d agents from a %s culture", len(records), spec.kind.value)
        return Response(
            {"spec": spec.to_dict(), "records": [record.to_dict() for record in records]},
            status=status.HTTP_200_OK,
        )

    @action(detail=False, methods=["POST"])
    def stats(self, request: HttpRequest, **kwargs: Any) -> Response:
        """Return the statistics report of a list of raw utility vectors."""
        serializer = StatsSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data

        if not data["points"]:
            return Response({"n": 0, "n_indifferent": 0, "facets": {}}, status=status.HTTP_200_OK)
        report = population_report(
            Population.from_points(data["points"]),
            tie_tol=data["tie_tol"],
            ball_center=data.get("ball_center"),
            ball_radius=data.get("ball_radius"),
        )
        return Response(report, status=status.HTTP_200_OK)
