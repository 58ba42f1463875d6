"""
Output for the commands: RunReports for the commands that compute a set of named quantities and
checks, and CSV/JSON rendering for the tabular outputs (bandit sweeps and trajectories).
"""
import enum
import json
from dataclasses import dataclass, field

import pandas as pd

from pragmatic.resources import digest
from pragmatic.utils import OutputFormat, fmt, rounded

FLOAT_FORMAT = '%.12g'
REPORT_COLUMNS = ['kind', 'name', 'value', 'tolerance', 'passed', 'gloss']


@enum.unique
class RowKind(enum.Enum):
    INPUT = 'input'
    QUANTITY = 'quantity'
    FLAG = 'flag'
    CHECK = 'check'


@dataclass(frozen=True)
class ReportRow:
    kind: RowKind
    name: str
    value: object
    tolerance: float = None
    passed: bool = None
    gloss: str = ''


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return fmt(value)
    return str(value)


def _json_value(value):
    # numpy scalars to python ones
    if hasattr(value, 'item'):
        value = value.item()
    if isinstance(value, float):
        return rounded(value)
    return value


@dataclass
class RunReport:
    """
    Everything a command computed: the inputs it read (by digest), the quantities it computed
    (named with the usual symbols, Phi, I, D...), boolean flags and the identity checks it ran. A
    check always carries the tolerance it was tested against.
    """
    command: str
    rows: list = field(default_factory=list)

    def add_input(self, path):
        self.rows.append(ReportRow(RowKind.INPUT, str(path), digest(path), gloss='sha256'))

    def add_quantity(self, name, value, gloss=''):
        self.rows.append(ReportRow(RowKind.QUANTITY, name, float(value), gloss=gloss))

    def add_flag(self, name, value, gloss=''):
        self.rows.append(ReportRow(RowKind.FLAG, name, bool(value), gloss=gloss))

    def add_check(self, name, residual, tolerance, gloss='', passed=None):
        """
        Adds an identity check. Unless passed is given the check passes when the absolute
        residual is below the tolerance.
        """
        if passed is None:
            passed = abs(residual) < tolerance
        self.rows.append(ReportRow(RowKind.CHECK, name, float(residual), tolerance, bool(passed),
                                   gloss))

    def of_kind(self, kind):
        return [row for row in self.rows if row.kind == kind]

    def __getitem__(self, name):
        for row in self.rows:
            if row.name == name:
                return row.value
        raise KeyError(name)

    @property
    def ok(self):
        return all(row.passed for row in self.of_kind(RowKind.CHECK))

    @property
    def failures(self):
        return [row.name for row in self.of_kind(RowKind.CHECK) if not row.passed]

    def to_frame(self):
        return pd.DataFrame([
            {
                'kind': row.kind.value,
                'name': row.name,
                'value': _cell(row.value),
                'tolerance': _cell(row.tolerance),
                'passed': _cell(row.passed),
                'gloss': row.gloss,
            }
            for row in self.rows
        ], columns=REPORT_COLUMNS)

    def to_dict(self):
        return {
            'command': self.command,
            'inputs': {row.name: row.value for row in self.of_kind(RowKind.INPUT)},
            'quantities': {row.name: {'value': _json_value(row.value), 'gloss': row.gloss}
                           for row in self.of_kind(RowKind.QUANTITY)},
            'flags': {row.name: row.value for row in self.of_kind(RowKind.FLAG)},
            'checks': [{'name': row.name, 'residual': _json_value(row.value),
                        'tolerance': row.tolerance, 'passed': row.passed, 'gloss': row.gloss}
                       for row in self.of_kind(RowKind.CHECK)],
            'ok': self.ok,
        }

    def render(self, output_format=OutputFormat.CSV):
        if OutputFormat(output_format) == OutputFormat.JSON:
            return json.dumps(self.to_dict(), indent=2)
        return self.to_frame().to_csv(index=False, lineterminator='\n')


def render_frame(frame, output_format=OutputFormat.CSV, metadata=None):
    """
    Renders a table of numbers as CSV (12 significant digits, LF line endings) or JSON.

    :param frame: a pandas DataFrame
    :param output_format: an OutputFormat
    :param metadata: optional string written as a leading # line in CSV, or a metadata key in JSON
    :return: the text
    """
    if OutputFormat(output_format) == OutputFormat.JSON:
        records = [{str(key): _json_value(value) for key, value in record.items()}
                   for record in frame.to_dict(orient='records')]
        data = {'rows': records}
        if metadata is not None:
            data = {'metadata': metadata, **data}
        return json.dumps(data, indent=2)
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    if metadata is not None:
        text = f'# {metadata}\n{text}'
    return text


def sweep_frame(rows):
    """
    Converts bandit SweepRows into the sweep table, columns T, w, q1, d_win, d_loss, phi_bits.
    """
    return pd.DataFrame({
        'T': [row.T for row in rows],
        'w': [row.w for row in rows],
        'q1': [row.q1 for row in rows],
        'd_win': [row.d_win for row in rows],
        'd_loss': [row.d_loss for row in rows],
        'phi_bits': [row.phi for row in rows],
    })
