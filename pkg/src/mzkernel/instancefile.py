"""Line-oriented instance files.

An instance names a group, a field, the rows of a linear map, and
optionally budget overrides for the enumeration oracle:

    # anything after a hash is a comment
    group: Z2 x Z4
    field: GF(4)
    row: 1, z, 0, 1 + z, 0, 0, 1, z
    row: 0, 0, 1, 0, 0, 0, 0, 0
    budget: max_algebra_size=65536

Rows list one element literal per group element, comma separated, in
the canonical enumeration order.  Emitting and re-parsing an instance
is exact round trip.
"""

from dataclasses import dataclass, field as dc_field

from .fields import (
    ElementSyntaxError,
    FieldError,
    FieldSpec,
    field_make,
    format_element,
    parse_element,
)
from .groups import GroupError, GroupSpec

__all__ = ["InstanceError", "Instance", "parse_instance", "load_instance",
           "render_instance"]


class InstanceError(ValueError):
    pass


@dataclass
class Instance:
    group: GroupSpec
    field: object
    rows: list
    budget_overrides: dict = dc_field(default_factory=dict)

    def require_rows(self):
        if not self.rows:
            raise InstanceError("instance declares no map rows")
        return self.rows


_BUDGET_KEYS = ("max_algebra_size", "max_pairs")


def _fail(path, lineno, message):
    raise InstanceError(f"{path}:{lineno}: {message}")


def parse_instance(text, path="<instance>"):
    group = None
    fld = None
    row_specs = []          # (lineno, payload) so element errors can point home
    budget = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, payload = line.partition(":")
        key = key.strip().lower()
        payload = payload.strip()
        if not sep or not payload:
            _fail(path, lineno, f"expected 'section: value', got {raw.strip()!r}")
        if key == "group":
            if group is not None:
                _fail(path, lineno, "duplicate group section")
            try:
                group = GroupSpec.parse(payload)
            except GroupError as exc:
                _fail(path, lineno, str(exc))
        elif key == "field":
            if fld is not None:
                _fail(path, lineno, "duplicate field section")
            try:
                fld = field_make(FieldSpec.parse(payload))
            except FieldError as exc:
                _fail(path, lineno, str(exc))
        elif key == "row":
            row_specs.append((lineno, payload))
        elif key == "budget":
            for part in payload.replace(",", " ").split():
                name, eq, value = part.partition("=")
                if not eq:
                    name, value = "max_algebra_size", part
                if name not in _BUDGET_KEYS:
                    _fail(path, lineno, f"unknown budget key {name!r}")
                try:
                    budget[name] = int(value)
                except ValueError:
                    _fail(path, lineno, f"budget value {value!r} is not an integer")
        else:
            _fail(path, lineno, f"unknown section {key!r}")
    if group is None:
        raise InstanceError(f"{path}: missing group section")
    if fld is None:
        raise InstanceError(f"{path}: missing field section")

    rows = []
    for lineno, payload in row_specs:
        literals = payload.split(",")
        if len(literals) != group.order:
            _fail(path, lineno,
                  f"row has {len(literals)} entries, expected {group.order}")
        row = []
        for col, lit in enumerate(literals, start=1):
            try:
                row.append(parse_element(fld, lit))
            except ElementSyntaxError as exc:
                _fail(path, lineno, f"column {col}: {exc}")
            except FieldError as exc:
                _fail(path, lineno, f"column {col}: {exc}")
        rows.append(row)
    return Instance(group=group, field=fld, rows=rows, budget_overrides=budget)


def load_instance(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}")
    return parse_instance(text, path=str(path))


def render_instance(instance, note=None):
    """Canonical text; parse_instance inverts it exactly."""
    lines = []
    if note:
        for part in str(note).splitlines():
            lines.append(f"# {part}")
    lines.append(f"group: {instance.group}")
    lines.append(f"field: {instance.field.spec}")
    for row in instance.rows:
        lines.append("row: " + ", ".join(format_element(instance.field, c)
                                         for c in row))
    if instance.budget_overrides:
        pairs = " ".join(f"{k}={v}" for k, v in sorted(instance.budget_overrides.items()))
        lines.append(f"budget: {pairs}")
    return "\n".join(lines) + "\n"
