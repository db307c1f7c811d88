"""Export of experiment results to CSV and Excel.

Every CSV starts with ``#`` comment lines echoing the generator version, the
PRNG, the seed and the experiment parameters; no timestamps, so identical
inputs give byte-identical files. Floats are written with FLOAT_FORMAT.
"""
import csv
import io
import json
import re
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

from app.engine import CurveResult, GridSample, TableResult, TableRow
from core.utils.encoding import ComplexEncoder
from core.utils.logger import get_logger
from core.utils.rng import PRNG_NAME
from core.utils.version import APP_NAME, __version__

_log = get_logger(__name__)

_EXCEL_MAX_ROWS = 50000

_SHEET_NAME_RE = re.compile(r"[\[\]*?:/\\]")
_NUMBER_TEXT_RE = re.compile(
    r"^[+-]?(?:\d{1,3}(?: \d{3})+|\d+)(?:\.\d+)?(?:[eE][+-]?\d+)?$"
)

FLOAT_FORMAT = ".12g"


@dataclass
class Sheet:
    """A titled table plus the metadata echoed in its header lines."""

    title: str
    columns: Sequence[str]
    rows: List[Sequence[Any]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)


def run_metadata(seed: int, **params: Any) -> Dict[str, Any]:
    """Header fields shared by every exported artifact."""
    data: Dict[str, Any] = {
        "generator": f"{APP_NAME} {__version__}",
        "prng": PRNG_NAME,
        "seed": seed,
    }
    data.update(params)
    return data


def format_cell(value: Any) -> str:
    """Deterministic text for one CSV cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT)
    if isinstance(value, complex):
        return f"{format(value.real, FLOAT_FORMAT)}{format(value.imag, '+' + FLOAT_FORMAT)}j"
    return str(value)


def header_lines(metadata: Dict[str, Any]) -> List[str]:
    lines = []
    for key, value in metadata.items():
        if isinstance(value, (dict, list, tuple)):
            value = json.dumps(value, sort_keys=True, cls=ComplexEncoder)
        lines.append(f"# {key}: {value if isinstance(value, str) else format_cell(value)}")
    return lines


def _spreadsheet_value(value):
    """Prevent text from being interpreted as a spreadsheet formula."""
    if not isinstance(value, str):
        return value
    formula_candidate = value.lstrip(" \t\r\n")
    if (formula_candidate.startswith(("=", "+", "-", "@"))
            and not _NUMBER_TEXT_RE.fullmatch(formula_candidate)):
        return "'" + value
    return value


class ExportManager:

    # ── CSV ──────────────────────────────────────────────────────────────

    @staticmethod
    def render_csv(sheet: Sheet) -> str:
        """Header comment lines, the column row, then one line per data row."""
        buffer = io.StringIO()
        for line in header_lines(sheet.metadata):
            buffer.write(line + "\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(list(sheet.columns))
        for row in sheet.rows:
            writer.writerow([format_cell(value) for value in row])
        return buffer.getvalue()

    @staticmethod
    def export_to_csv(sheet: Sheet, filepath) -> None:
        with open(filepath, "w", newline="", encoding="utf-8") as handle:
            handle.write(ExportManager.render_csv(sheet))
        _log.debug("wrote %d rows to %s", len(sheet.rows), filepath)

    # ── Excel ────────────────────────────────────────────────────────────

    @staticmethod
    def export_to_excel(sheet: Sheet, filepath) -> None:
        """Two-sheet .xlsx: Summary (metadata) and the data table. Styled
        headers, row stripes, auto-filter, frozen panes; truncated at
        _EXCEL_MAX_ROWS."""
        from openpyxl import Workbook
        from openpyxl.styles import Alignment, Font, PatternFill
        from openpyxl.utils import get_column_letter

        HEADER_FONT = Font(bold=True, color="FFFFFF")
        HEADER_FILL = PatternFill("solid", fgColor="1F4E79")
        TITLE_FONT = Font(bold=True, size=14, color="1F4E79")
        STRIPE_FILL = PatternFill("solid", fgColor="EFF4FA")

        wb = Workbook()

        ws = wb.active
        ws.title = "Summary"
        ws.cell(row=1, column=1, value=_spreadsheet_value(sheet.title)).font = TITLE_FONT
        for row, line in enumerate(header_lines(sheet.metadata), start=3):
            key, _, value = line[2:].partition(": ")
            ws.cell(row=row, column=1, value=_spreadsheet_value(key)).font = Font(bold=True)
            ws.cell(row=row, column=2, value=_spreadsheet_value(value))
        ws.column_dimensions["A"].width = 18
        ws.column_dimensions["B"].width = 90

        rows = sheet.rows
        if len(rows) > _EXCEL_MAX_ROWS:
            _log.warning("Truncating '%s' to %d rows (Excel limit)", sheet.title, _EXCEL_MAX_ROWS)
            rows = rows[:_EXCEL_MAX_ROWS]

        data_ws = wb.create_sheet(_SHEET_NAME_RE.sub("_", sheet.title)[:31].strip() or "Data")
        for c, header in enumerate(sheet.columns, start=1):
            cell = data_ws.cell(row=1, column=c, value=_spreadsheet_value(header))
            cell.font = HEADER_FONT
            cell.fill = HEADER_FILL
            cell.alignment = Alignment(vertical="center")
            data_ws.column_dimensions[get_column_letter(c)].width = max(len(str(header)) + 4, 12)
        for r, values in enumerate(rows, start=2):
            for c, value in enumerate(values, start=1):
                if isinstance(value, complex):
                    value = format_cell(value)
                cell = data_ws.cell(row=r, column=c, value=_spreadsheet_value(value))
                if r % 2 == 1:
                    cell.fill = STRIPE_FILL
        data_ws.freeze_panes = data_ws.cell(row=2, column=1)
        if rows:
            last_col = get_column_letter(len(sheet.columns))
            data_ws.auto_filter.ref = f"A1:{last_col}{len(rows) + 1}"

        wb.save(filepath)


# ── Sheet builders ───────────────────────────────────────────────────────

def table_sheet(result: TableResult) -> Sheet:
    return Sheet(
        title="Iteration table",
        columns=TableRow.columns(),
        rows=[row.values() for row in result.rows],
        metadata=run_metadata(result.spec.seed, spec=result.spec.to_header()),
    )


def curve_sheet(curve: CurveResult, tol: float) -> Sheet:
    params = curve.params
    return Sheet(
        title="Convergence curve",
        columns=["iteration", "relative_residual"],
        rows=[list(point) for point in curve.points()],
        metadata=run_metadata(
            curve.seed,
            alpha=params.alpha,
            N=params.N,
            k=params.k,
            tol=tol,
            omega_opt=curve.report.omega_opt,
            rho_formula=curve.report.rho,
            converged=curve.log.converged,
        ),
    )


def grid_sheet(samples: List[GridSample], re_range: Sequence[float], im_range: Sequence[float],
               resolution: int, tight: bool = False) -> Sheet:
    return Sheet(
        title="Bounds grid",
        columns=GridSample.columns(),
        rows=[sample.values() for sample in samples],
        metadata={
            "generator": f"{APP_NAME} {__version__}",
            "re_range": list(re_range),
            "im_range": list(im_range),
            "resolution": resolution,
            "tight_beta": tight,
        },
    )
