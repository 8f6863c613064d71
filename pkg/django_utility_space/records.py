"""Reading and writing populations as JSONL or CSV records.

Every agent becomes one record with its id, its canonical vector u, its
preference order and the permutohedron cell of that order. Indifferent
agents have u = null and the cell "Indifference". Agents drawn from the
Mallows culture only have an order, so their u is null as well. Numbers
are written with 17 significant digits, which round-trips every double.
"""

import csv
import json
from dataclasses import dataclass
from typing import IO, Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from django_utility_space.constants import INDIFFERENCE_LABEL, RECORD_DIGITS, TIE_TOL, RecordFormat
from django_utility_space.exceptions import UtilitySpaceError
from django_utility_space.geometry import UtilityPoint
from django_utility_space.ordinal import PreferenceOrder, cell_kind, rows_to_orders
from django_utility_space.population import Population

CSV_FIELDS = ("id", "order", "cell")


class RecordError(UtilitySpaceError):
    """A record file cannot be decoded."""


@dataclass(frozen=True)
class AgentRecord:
    """One agent of a generated population."""

    id: int
    u: Optional[Tuple[float, ...]]
    order: PreferenceOrder
    cell: str

    @property
    def is_indifference(self) -> bool:
        """Return True for an agent at the indifference point."""
        return self.cell == INDIFFERENCE_LABEL

    def point(self) -> UtilityPoint:
        """Return the utility point of the agent.

        :raises RecordError: If the record only carries an order.
        """
        if self.is_indifference:
            return UtilityPoint.indifference(self.order.m)
        if self.u is None:
            raise RecordError(f"Record {self.id} has an order but no utility vector.")
        return UtilityPoint.from_vector(self.u)

    def to_dict(self) -> Dict[str, Any]:
        """Return the record as a JSON-compatible dict."""
        return {
            "id": self.id,
            "u": None if self.u is None else list(self.u),
            "order": str(self.order),
            "cell": self.cell,
        }


def format_number(value: float) -> str:
    """Format a float with 17 significant digits."""
    return format(float(value), f".{RECORD_DIGITS}g")


def _cell_label(order: PreferenceOrder, indifferent: bool) -> str:
    if indifferent:
        return INDIFFERENCE_LABEL
    return cell_kind(order).value


def records_from_population(population: Population, tie_tol: float = TIE_TOL) -> List[AgentRecord]:
    """Describe every agent of a population, ids starting at 0."""
    orders = rows_to_orders(population.vectors, tie_tol)
    return [
        AgentRecord(
            id=index,
            u=None if indifferent else tuple(float(value) for value in vector),
            order=order,
            cell=_cell_label(order, bool(indifferent)),
        )
        for index, (vector, indifferent, order) in enumerate(
            zip(population.vectors, population.indifferent, orders)
        )
    ]


def records_from_orders(orders: Sequence[PreferenceOrder]) -> List[AgentRecord]:
    """Describe agents known only by their order.

    An order with every candidate tied is an indifferent agent.
    """
    return [
        AgentRecord(
            id=index,
            u=None,
            order=order,
            cell=_cell_label(order, len(order.tiers) == 1 and order.m > 1),
        )
        for index, order in enumerate(orders)
    ]


def _jsonl_line(record: AgentRecord) -> str:
    if record.u is None:
        u = "null"
    else:
        u = "[" + ", ".join(format_number(value) for value in record.u) + "]"
    return (
        f'{{"id": {record.id}, "u": {u}, "order": {json.dumps(str(record.order))}, '
        f'"cell": {json.dumps(record.cell)}}}'
    )


def write_records(records: Iterable[AgentRecord], stream: IO[str], fmt: RecordFormat) -> int:
    """Write records to a text stream.

    CSV files have the columns id, order, cell, u1, ..., um, with empty u
    columns for agents without a vector.

    :return: The number of records written.
    """
    records = list(records)
    fmt = RecordFormat(fmt)
    if fmt is RecordFormat.JSONL:
        for record in records:
            stream.write(_jsonl_line(record) + "\n")
        return len(records)

    m = records[0].order.m if records else 0
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(list(CSV_FIELDS) + [f"u{index}" for index in range(1, m + 1)])
    for record in records:
        values = [""] * m if record.u is None else [format_number(value) for value in record.u]
        writer.writerow([record.id, str(record.order), record.cell] + values)
    return len(records)


def _build_record(
    identifier: object, u: object, order: object, cell: object, where: str
) -> AgentRecord:
    try:
        order = PreferenceOrder.parse(str(order))
        vector = None if u is None else tuple(float(value) for value in u)
        record = AgentRecord(id=int(identifier), u=vector, order=order, cell=str(cell))
        if vector is not None:
            record.point()
    except (TypeError, ValueError) as exc:
        raise RecordError(f"Invalid record at {where}: {exc}") from exc
    return record


def _read_jsonl(stream: IO[str]) -> Iterator[AgentRecord]:
    for number, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
            fields = (data["id"], data.get("u"), data["order"], data["cell"])
        except (json.JSONDecodeError, KeyError, TypeError, AttributeError) as exc:
            raise RecordError(f"Line {number} is not a valid record: {exc}") from exc
        yield _build_record(*fields, where=f"line {number}")


def _read_csv(stream: IO[str]) -> Iterator[AgentRecord]:
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        return
    if tuple(header[: len(CSV_FIELDS)]) != CSV_FIELDS:
        raise RecordError(f"Unexpected CSV header {header}.")
    for number, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise RecordError(f"Row {number} has {len(row)} columns, expected {len(header)}.")
        identifier, order, cell = row[: len(CSV_FIELDS)]
        values = row[len(CSV_FIELDS) :]
        u = None if all(value == "" for value in values) else values
        yield _build_record(identifier, u, order, cell, where=f"row {number}")


def read_records(stream: IO[str], fmt: RecordFormat) -> List[AgentRecord]:
    """Read every record of a JSONL or CSV stream.

    :raises RecordError: If a record is malformed.
    """
    if RecordFormat(fmt) is RecordFormat.JSONL:
        return list(_read_jsonl(stream))
    return list(_read_csv(stream))


def guess_format(path: str) -> RecordFormat:
    """Return CSV for paths ending in .csv and JSONL otherwise."""
    if str(path).lower().endswith(".csv"):
        return RecordFormat.CSV
    return RecordFormat.JSONL


def population_from_records(
    records: Sequence[AgentRecord],
) -> Union[Population, List[PreferenceOrder]]:
    """Rebuild what generated the records.

    :return: A Population if every agent on the sphere has a vector, else the
        list of orders.
    """
    if not records:
        raise RecordError("Cannot rebuild a population from no records.")
    m = records[0].order.m
    if any(record.order.m != m for record in records):
        raise RecordError("Records disagree on the number of candidates.")
    if any(record.u is None and not record.is_indifference for record in records):
        return [record.order for record in records]
    return Population.from_points([record.point() for record in records], m)


def read_utility_vectors(stream: IO[str]) -> List[List[float]]:
    """Read raw utility vectors, one JSON array per line.

    Lines holding a record object are accepted too, their u is used and
    indifferent records give the zero vector.

    :raises RecordError: If a line is neither.
    """
    vectors: List[List[float]] = []
    for number, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
            if isinstance(data, dict):
                if data.get("u") is None:
                    if data.get("cell") != INDIFFERENCE_LABEL:
                        raise RecordError(f"Line {number} has an order but no utility vector.")
                    data = [0.0] * PreferenceOrder.parse(data["order"]).m
                else:
                    data = data["u"]
            vectors.append([float(value) for value in data])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise RecordError(f"Line {number} is not a utility vector: {exc}") from exc
    return vectors
