"""Serializers validating the input of the REST endpoints and the management commands."""

from typing import Any, Dict, List, Type

from rest_framework import serializers

from django_utility_space.conf import get_setting
from django_utility_space.constants import (
    MIN_GRID_RESOLUTION,
    CultureKind,
    MallowsMethod,
    Metric,
    RecordFormat,
)
from django_utility_space.cultures import CultureSpec
from django_utility_space.exceptions import UtilitySpaceError
from django_utility_space.geometry import UtilityPoint, canonicalize
from django_utility_space.rng import MAX_SEED


class EnumField(serializers.ChoiceField):
    """Serializer field accepting the values of an enum."""

    def __init__(self, *args: Any, enum_class: Type = None, **kwargs: Any) -> None:
        """Initialize the field with the values of enum_class as choices."""
        if enum_class is None:
            raise ValueError("EnumField needs an enum_class.")
        self.enum_class = enum_class
        super().__init__(*args, choices=[member.value for member in enum_class], **kwargs)

    def to_representation(self, value: Any) -> str:
        """Convert the enum to a string."""
        return value.value

    def to_internal_value(self, data: Any) -> Any:
        """Convert the string to an enum."""
        try:
            return self.enum_class(data)
        except ValueError as exc:
            valid_choices = [member.value for member in self.enum_class]
            raise serializers.ValidationError(
                f"'{data}' is not a valid choice. Valid choices are {valid_choices}."
            ) from exc


class UtilityVectorField(serializers.ListField):
    """A raw utility vector, as a list of reals."""

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        """Initialize the field with float entries."""
        kwargs.setdefault("child", serializers.FloatField())
        kwargs.setdefault("min_length", 1)
        super().__init__(*args, **kwargs)


def to_point(values: List[float], allow_indifference: bool = True) -> UtilityPoint:
    """Canonicalise a validated vector, translating library errors.

    :raises serializers.ValidationError: If the vector is invalid, or is the
        indifference point and allow_indifference is False.
    """
    try:
        point = canonicalize(values, tol=get_setting("INDIFFERENCE_TOL"))
    except UtilitySpaceError as exc:
        raise serializers.ValidationError(str(exc)) from exc
    if point.is_indifference and not allow_indifference:
        raise serializers.ValidationError(
            f"{list(values)} is the indifference point, which has no place on the sphere."
        )
    return point


class DistanceSerializer(serializers.Serializer):
    """Validate a distance query between two raw utility vectors."""

    u = UtilityVectorField()
    v = UtilityVectorField()
    metric = EnumField(enum_class=Metric, default=Metric.ROUND)

    def validate(self, attrs: Dict[str, Any]) -> Dict[str, Any]:
        """Canonicalise both vectors and check that they can be compared."""
        if len(attrs["u"]) != len(attrs["v"]):
            raise serializers.ValidationError("u and v must have the same number of candidates.")
        attrs["u"] = to_point(attrs["u"], allow_indifference=False)
        attrs["v"] = to_point(attrs["v"], allow_indifference=False)
        if attrs["metric"] is Metric.CUBE3 and attrs["u"].m != 3:
            raise serializers.ValidationError("The cube3 metric needs exactly 3 candidates.")
        return attrs


class SumCheckSerializer(serializers.Serializer):
    """Validate a membership query for the sum of a set of utility vectors."""

    set = serializers.ListField(child=UtilityVectorField(), allow_empty=True)
    v = UtilityVectorField()
    oracle_grid = serializers.IntegerField(
        min_value=MIN_GRID_RESOLUTION, required=False, allow_null=True
    )

    def validate(self, attrs: Dict[str, Any]) -> Dict[str, Any]:
        """Canonicalise the set and the candidate point."""
        m = len(attrs["v"])
        if any(len(values) != m for values in attrs["set"]):
            raise serializers.ValidationError(
                "Every vector of the set must have as many candidates as v."
            )
        attrs["set"] = [to_point(values) for values in attrs["set"]]
        attrs["v"] = to_point(attrs["v"])
        return attrs


class CultureSpecSerializer(serializers.Serializer):
    """Validate a culture specification and build the CultureSpec."""

    kind = EnumField(enum_class=CultureKind)
    m = serializers.IntegerField(min_value=2)
    kappa = serializers.FloatField(min_value=0.0, default=0.0)
    pole = serializers.JSONField(required=False, allow_null=True, default=None)
    indifference_prob = serializers.FloatField(min_value=0.0, max_value=1.0, default=0.0)
    seed = serializers.IntegerField(min_value=0, max_value=MAX_SEED, default=0)

    def validate(self, attrs: Dict[str, Any]) -> Dict[str, Any]:
        """Build the CultureSpec, translating specification errors."""
        data = dict(attrs, kind=attrs["kind"].value)
        try:
            attrs["spec"] = CultureSpec.from_dict(data)
        except UtilitySpaceError as exc:
            raise serializers.ValidationError(str(exc)) from exc
        return attrs


class GenerateSerializer(CultureSpecSerializer):
    """Validate a population generation request."""

    n = serializers.IntegerField(min_value=0)
    method = EnumField(enum_class=MallowsMethod, default=MallowsMethod.INSERTION)
    format = EnumField(enum_class=RecordFormat, default=RecordFormat.JSONL)

    def __init__(self, *args: Any, max_population: int = None, **kwargs: Any) -> None:
        """Initialize the serializer, optionally capping the population size."""
        self.max_population = max_population
        super().__init__(*args, **kwargs)

    def validate_n(self, value: int) -> int:
        """Enforce the population cap when one is set."""
        if self.max_population is not None and value > self.max_population:
            raise serializers.ValidationError(
                f"At most {self.max_population} agents can be generated per request."
            )
        return value


class BallSerializerMixin(serializers.Serializer):
    """Optional geodesic ball of a statistics request."""

    tie_tol = serializers.FloatField(min_value=0.0, required=False)
    ball_center = UtilityVectorField(required=False, allow_null=True)
    ball_radius = serializers.FloatField(required=False, allow_null=True)

    def validate_ball(self, attrs: Dict[str, Any]) -> Dict[str, Any]:
        """Check that a ball has both a center and a radius, and canonicalise the center."""
        attrs.setdefault("tie_tol", get_setting("TIE_TOL"))
        center = attrs.get("ball_center")
        radius = attrs.get("ball_radius")
        if (center is None) != (radius is None):
            raise serializers.ValidationError(
                "ball_center and ball_radius must be given together."
            )
        if center is not None:
            attrs["ball_center"] = to_point(center, allow_indifference=False)
        return attrs


class BallSerializer(BallSerializerMixin):
    """Validate the tie tolerance and the optional ball of the stats command."""

    def validate(self, attrs: Dict[str, Any]) -> Dict[str, Any]:
        """Canonicalise the ball center."""
        return self.validate_ball(attrs)


class StatsSerializer(BallSerializerMixin):
    """Validate a statistics request over raw utility vectors."""

    points = serializers.ListField(child=UtilityVectorField(), allow_empty=True)

    def validate(self, attrs: Dict[str, Any]) -> Dict[str, Any]:
        """Canonicalise the points."""
        attrs = self.validate_ball(attrs)
        points = attrs["points"]
        if points and any(len(values) != len(points[0]) for values in points):
            raise serializers.ValidationError(
                "Every point must have the same number of candidates."
            )
        attrs["points"] = [to_point(values) for values in points]
        center = attrs.get("ball_center")
        if center is not None and points and center.m != len(points[0]):
            raise serializers.ValidationError(
                "The ball center must have as many candidates as the points."
            )
        return attrs

