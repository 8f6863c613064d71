"""Tests for the record formats and the serializers."""

import io
import json

from django.test import SimpleTestCase, override_settings
from rest_framework.exceptions import ValidationError

from django_utility_space.constants import INDIFFERENCE_LABEL, CultureKind, Metric, RecordFormat
from django_utility_space.cultures import CultureSpec, sample_population
from django_utility_space.geometry import canonicalize
from django_utility_space.ordinal import PreferenceOrder
from django_utility_space.records import (
    RecordError,
    format_number,
    guess_format,
    population_from_records,
    read_records,
    read_utility_vectors,
    records_from_orders,
    records_from_population,
    write_records,
)
from django_utility_space.serializers import (
    BallSerializer,
    DistanceSerializer,
    EnumField,
    GenerateSerializer,
    StatsSerializer,
    SumCheckSerializer,
    to_point,
)


def encode(records, fmt):
    """Write records to a string."""
    stream = io.StringIO()
    write_records(records, stream, fmt)
    return stream.getvalue()


class RecordsTestCase(SimpleTestCase):
    """Test the JSONL and CSV records."""

    def setUp(self):
        """Set up a population with indifferent agents."""
        spec = CultureSpec(kind="uniform", m=4, seed=41, indifference_prob=0.2)
        self.population = sample_population(spec, 50, threads=1)
        self.records = records_from_population(self.population)

    def test_record_fields(self):
        """Records carry the id, the vector, the order and the cell."""
        for index, record in enumerate(self.records):
            self.assertEqual(record.id, index)
            if self.population.indifferent[index]:
                self.assertIsNone(record.u)
                self.assertEqual(record.cell, INDIFFERENCE_LABEL)
                self.assertEqual(str(record.order), "1=2=3=4")
            else:
                self.assertEqual(record.u, tuple(self.population.vectors[index]))
                self.assertEqual(record.cell, "Facet")

    def test_jsonl_lines(self):
        """Each JSONL line is a JSON object with 17 significant digits."""
        lines = encode(self.records, RecordFormat.JSONL).splitlines()
        self.assertEqual(len(lines), 50)
        for line, record in zip(lines, self.records):
            data = json.loads(line)
            self.assertEqual(list(data), ["id", "u", "order", "cell"])
            self.assertEqual(data, record.to_dict())
        self.assertEqual(format_number(0.1), "0.10000000000000001")

    def test_round_trip(self):
        """Both formats decode to the population that was written."""
        for fmt in RecordFormat:
            decoded = read_records(io.StringIO(encode(self.records, fmt)), fmt)
            self.assertEqual(decoded, self.records)
            self.assertEqual(population_from_records(decoded), self.population)

    def test_csv_header(self):
        """CSV files have one column per candidate."""
        header = encode(self.records, RecordFormat.CSV).splitlines()[0]
        self.assertEqual(header, "id,order,cell,u1,u2,u3,u4")

    def test_orders_only(self):
        """Agents drawn as orders have no vector."""
        orders = [PreferenceOrder.parse("2>1>3"), PreferenceOrder.indifferent(3)]
        records = records_from_orders(orders)
        self.assertEqual([record.cell for record in records], ["Facet", INDIFFERENCE_LABEL])
        self.assertEqual([record.u for record in records], [None, None])
        decoded = read_records(io.StringIO(encode(records, RecordFormat.CSV)), RecordFormat.CSV)
        self.assertEqual(population_from_records(decoded), orders)

    def test_malformed(self):
        """Malformed lines raise RecordError."""
        bad_inputs = [
            "not json\n",
            '{"id": 0, "u": [1, 0], "order": "1>2"}\n',
            '{"id": 0, "u": [1, 0], "order": "1>1", "cell": "Facet"}\n',
            '{"id": 0, "u": [1, 0], "order": "1>2", "cell": "Facet"}\n',
        ]
        for text in bad_inputs:
            with self.assertRaises(RecordError, msg=text):
                read_records(io.StringIO(text), RecordFormat.JSONL)
        with self.assertRaises(RecordError):
            read_records(io.StringIO("a,b,c\n"), RecordFormat.CSV)
        with self.assertRaises(RecordError):
            population_from_records([])

    def test_edge_cases(self):
        """Blank lines, empty files and inconsistent rows."""
        text = "\n" + encode(self.records[:2], RecordFormat.JSONL) + "\n"
        self.assertEqual(read_records(io.StringIO(text), RecordFormat.JSONL), self.records[:2])
        self.assertEqual(read_records(io.StringIO(""), RecordFormat.CSV), [])
        with self.assertRaises(RecordError):
            read_records(io.StringIO("id,order,cell,u1,u2\n0,1>2,Facet,1\n"), RecordFormat.CSV)
        mixed = records_from_orders([PreferenceOrder.parse("1>2"), PreferenceOrder.parse("1>2>3")])
        with self.assertRaises(RecordError):
            population_from_records(mixed)
        with self.assertRaises(RecordError):
            mixed[0].point()

    def test_guess_format(self):
        """The format follows the file extension."""
        self.assertEqual(guess_format("agents.CSV"), RecordFormat.CSV)
        self.assertEqual(guess_format("agents.jsonl"), RecordFormat.JSONL)


class UtilityVectorFileTestCase(SimpleTestCase):
    """Test reading raw utility vectors for the sum check."""

    def test_arrays_and_records(self):
        """Lines may be arrays or records."""
        text = (
            "[1, 2, 3]\n"
            "\n"
            '{"id": 1, "u": [0.5, 0.0, -0.5], "order": "1>2>3", "cell": "Other"}\n'
            '{"id": 2, "u": null, "order": "1=2=3", "cell": "Indifference"}\n'
        )
        self.assertEqual(
            read_utility_vectors(io.StringIO(text)),
            [[1.0, 2.0, 3.0], [0.5, 0.0, -0.5], [0.0, 0.0, 0.0]],
        )

    def test_invalid(self):
        """Records without a vector and non-numeric lines are rejected."""
        for text in (
            '{"id": 0, "u": null, "order": "1>2", "cell": "Facet"}\n',
            '["a", 1]\n',
            "{\n",
        ):
            with self.assertRaises(RecordError, msg=text):
                read_utility_vectors(io.StringIO(text))


class SerializerTestCase(SimpleTestCase):
    """Test the input serializers."""

    def test_distance(self):
        """Distance queries need comparable non-indifferent vectors."""
        serializer = DistanceSerializer(data={"u": [1, 0, 0], "v": [0, 1, 0], "metric": "cube3"})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.validated_data["metric"], Metric.CUBE3)
        self.assertEqual(serializer.validated_data["u"], canonicalize([1.0, 0.0, 0.0]))

        for data in (
            {"u": [1, 0, 0], "v": [0, 1]},
            {"u": [1, 1, 1], "v": [0, 1, 0]},
            {"u": [1, 0, 0, 0], "v": [0, 1, 0, 0], "metric": "cube3"},
            {"u": [1, 0, 0], "v": [0, 1, 0], "metric": "manhattan"},
            {"u": [], "v": []},
        ):
            self.assertFalse(DistanceSerializer(data=data).is_valid(), data)

    def test_sumcheck(self):
        """The set may be empty and may hold the indifference point."""
        serializer = SumCheckSerializer(data={"set": [[1, 1, 1], [1, 0, 0]], "v": [1, 0, 0]})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertTrue(serializer.validated_data["set"][0].is_indifference)
        self.assertTrue(SumCheckSerializer(data={"set": [], "v": [1, 0, 0]}).is_valid())
        self.assertFalse(SumCheckSerializer(data={"set": [[1, 0]], "v": [1, 0, 0]}).is_valid())
        coarse = SumCheckSerializer(data={"set": [], "v": [1, 0, 0], "oracle_grid": 8})
        self.assertFalse(coarse.is_valid())

    def test_generate(self):
        """Generation requests build the culture specification."""
        data = {"kind": "vmf", "m": 3, "kappa": 2.0, "pole": "1,0,0", "n": 10, "seed": 5}
        serializer = GenerateSerializer(data=data)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        spec = serializer.validated_data["spec"]
        self.assertEqual(spec.kind, CultureKind.VMF)
        self.assertEqual(spec.pole, canonicalize([1.0, 0.0, 0.0]))
        self.assertEqual(serializer.validated_data["format"], RecordFormat.JSONL)

        mallows = {"kind": "mallows", "m": 3, "pole": "2>3>1", "n": 1}
        self.assertTrue(GenerateSerializer(data=mallows).is_valid())
        for bad in (
            {"kind": "vmf", "m": 3, "n": 10},
            {"kind": "uniform", "m": 3, "n": -1},
            {"kind": "uniform", "m": 1, "n": 1},
            {"kind": "mallows", "m": 3, "pole": "1>2", "n": 1},
            {"kind": "uniform", "m": 3, "n": 1, "indifference_prob": 2},
        ):
            self.assertFalse(GenerateSerializer(data=bad).is_valid(), bad)
        capped = GenerateSerializer(data={"kind": "uniform", "m": 3, "n": 11}, max_population=10)
        self.assertFalse(capped.is_valid())
        self.assertIn("n", capped.errors)

    def test_ball(self):
        """A ball needs a center and a radius."""
        serializer = BallSerializer(data={"ball_center": [1, 0, 0], "ball_radius": 0.5})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.validated_data["tie_tol"], 1e-9)
        self.assertFalse(BallSerializer(data={"ball_center": [1, 0, 0]}).is_valid())
        indifferent = {"ball_center": [2, 2, 2], "ball_radius": 0.5}
        self.assertFalse(BallSerializer(data=indifferent).is_valid())
        with override_settings(UTILITY_SPACE={"TIE_TOL": 0.25}):
            serializer = BallSerializer(data={})
            self.assertTrue(serializer.is_valid())
            self.assertEqual(serializer.validated_data["tie_tol"], 0.25)

    def test_stats(self):
        """Statistics requests canonicalise the points."""
        serializer = StatsSerializer(data={"points": [[1, 0, 0], [3, 3, 3]]})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertTrue(serializer.validated_data["points"][1].is_indifference)
        self.assertFalse(StatsSerializer(data={"points": [[1, 0, 0], [1, 0]]}).is_valid())
        mismatched = {"points": [[1, 0, 0]], "ball_center": [1, 0], "ball_radius": 1}
        self.assertFalse(StatsSerializer(data=mismatched).is_valid())

    def test_fields(self):
        """Enum fields need an enum and write its values, vectors are canonicalised."""
        with self.assertRaises(ValueError):
            EnumField()
        self.assertEqual(EnumField(enum_class=Metric).to_representation(Metric.CUBE3), "cube3")
        with self.assertRaises(ValidationError):
            to_point([])
        with self.assertRaises(ValidationError):
            to_point([2.0, 2.0], allow_indifference=False)
