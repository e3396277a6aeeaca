"""EnergyPlus input records: an ordered, renderable, re-parsable model.

A record is a class name plus ordered fields; each field carries its value
and the human-readable field name echoed as a trailing `!- ` comment. The
renderer is canonical (one field per line, fixed comment column), so
parse -> render round-trips byte-identically on emitted documents.
"""

from __future__ import annotations

from dataclasses import dataclass, field

COMMENT_COLUMN = 34  # column where "!- Field Name" comments start


@dataclass(frozen=True)
class IdfField:
    value: str
    name: str = ""  # field name shown in the trailing comment

    def __post_init__(self):
        object.__setattr__(self, "value", _format_value(self.value))


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "Yes" if v else "No"
    if isinstance(v, float):
        if v == int(v) and abs(v) < 1e15:
            return str(int(v))
        return repr(v)
    if v is None:
        return ""
    return str(v)


@dataclass(frozen=True)
class IdfRecord:
    class_name: str
    fields: tuple  # of IdfField

    @property
    def name(self) -> str:
        """Conventional object name: the first field, when present."""
        return self.fields[0].value if self.fields else ""

    def value(self, field_name: str) -> str:
        for f in self.fields:
            if f.name == field_name:
                return f.value
        raise KeyError(f"{self.class_name} has no field '{field_name}'")

    def render(self) -> str:
        if not self.fields:
            return f"{self.class_name};"
        lines = [f"{self.class_name},"]
        for i, f in enumerate(self.fields):
            sep = ";" if i == len(self.fields) - 1 else ","
            body = f"  {f.value}{sep}"
            if f.name:
                body = f"{body:<{COMMENT_COLUMN}}!- {f.name}"
            lines.append(body)
        return "\n".join(lines)


def record(class_name: str, *fields) -> IdfRecord:
    """Build a record from (value, field_name) pairs or bare values."""
    out = []
    for f in fields:
        if isinstance(f, IdfField):
            out.append(f)
        elif isinstance(f, tuple):
            out.append(IdfField(f[0], f[1]))
        else:
            out.append(IdfField(f))
    return IdfRecord(class_name, tuple(out))


@dataclass(frozen=True)
class IdfDocument:
    records: tuple  # of IdfRecord

    @property
    def text(self) -> str:
        return render_idf(self)

    def find(self, class_name: str) -> list:
        return [r for r in self.records if r.class_name == class_name]

    def first(self, class_name: str) -> IdfRecord:
        found = self.find(class_name)
        if not found:
            raise KeyError(f"no {class_name} record")
        return found[0]


def render_idf(doc) -> str:
    records = doc.records if isinstance(doc, IdfDocument) else tuple(doc)
    return "\n\n".join(r.render() for r in records) + "\n"


def parse_idf(text: str) -> IdfDocument:
    """Parse IDF text into records, keeping field comments.

    Accepts the canonical one-field-per-line form as well as multiple
    values per line; a line's `!- ` comment attaches to its last field.
    """
    records = []
    class_name = None
    fields = []
    for raw_line in text.splitlines():
        comment = ""
        line = raw_line
        if "!" in line:
            line, _, tail = line.partition("!")
            comment = tail.strip()
            if comment.startswith("-"):
                comment = comment[1:].strip()
        line = line.strip()
        if not line:
            continue
        while line:
            terminated = False
            for cut, ch in enumerate(line):
                if ch in ",;":
                    token, line = line[:cut], line[cut + 1:].lstrip()
                    terminated = ch == ";"
                    break
            else:
                token, line = line, ""
            token = token.strip()
            if class_name is None:
                if token:
                    class_name = token
                    if terminated:
                        records.append(IdfRecord(class_name, ()))
                        class_name = None
                continue
            fields.append(IdfField(token, comment if not line else ""))
            if terminated:
                records.append(IdfRecord(class_name, tuple(fields)))
                class_name, fields = None, []
    if class_name is not None:
        raise ValueError(f"unterminated record '{class_name}'")
    return IdfDocument(tuple(records))
