import json
import os
import tempfile
import unittest
from unittest.mock import patch

from app.config import ExperimentSpec
from app.engine import GridSample, TableResult, TableRow
from app.export import (
    ExportManager,
    Sheet,
    format_cell,
    grid_sheet,
    header_lines,
    run_metadata,
    table_sheet,
)
from core.utils.version import APP_NAME, __version__

ROWS = [
    TableRow(alpha=0.5, N=80, k=50.26548245743669, iterations=114, predicted_iterations=107,
             rho_formula=0.8791, measured_rate=0.8812, lower_gap=0.05, upper_gap=0.2,
             converged=True),
    TableRow(alpha=0.25, N=80, k=50.26548245743669, iterations=167, predicted_iterations=None,
             rho_formula=0.9163, measured_rate=0.9170, lower_gap=0.03, upper_gap=0.15,
             converged=False),
]


def _table_result():
    spec = ExperimentSpec(alphas=(0.5, 0.25), Ns=(80,), seed=4, output="ignored.csv", jobs=2)
    return TableResult(spec=spec, rows=list(ROWS))


class TestFormatting(unittest.TestCase):
    def test_format_cell(self):
        self.assertEqual(format_cell(None), "")
        self.assertEqual(format_cell(True), "true")
        self.assertEqual(format_cell(False), "false")
        self.assertEqual(format_cell(5), "5")
        self.assertEqual(format_cell(0.1), "0.1")
        self.assertEqual(format_cell(1 / 3), "0.333333333333")
        self.assertEqual(format_cell(complex(1, -2)), "1-2j")
        self.assertEqual(format_cell(complex(0.5, 0.25)), "0.5+0.25j")

    def test_header_lines(self):
        lines = header_lines({"seed": 3, "spec": {"b": 1, "a": [1, 2]}, "tight_beta": False})
        self.assertEqual(lines, [
            "# seed: 3",
            '# spec: {"a": [1, 2], "b": 1}',
            "# tight_beta: false",
        ])

    def test_complex_metadata_is_encoded(self):
        line = header_lines({"omega": {"value": 1 + 2j}})[0]
        self.assertEqual(line, '# omega: {"value": {"im": 2.0, "re": 1.0}}')

    def test_run_metadata(self):
        data = run_metadata(7, alpha=0.5)
        self.assertEqual(data["generator"], f"{APP_NAME} {__version__}")
        self.assertEqual(data["prng"], "PCG64")
        self.assertEqual(data["seed"], 7)
        self.assertEqual(data["alpha"], 0.5)


class TestExportManager(unittest.TestCase):
    def setUp(self):
        self.test_dir = tempfile.TemporaryDirectory()
        self.csv_path = os.path.join(self.test_dir.name, "table.csv")
        self.excel_path = os.path.join(self.test_dir.name, "table.xlsx")
        self.sheet = table_sheet(_table_result())

    def tearDown(self):
        self.test_dir.cleanup()

    def test_render_csv(self):
        sheet = Sheet(title="t", columns=["a", "b"], rows=[[1, 0.5], [None, True]],
                      metadata={"seed": 0})
        self.assertEqual(ExportManager.render_csv(sheet), "# seed: 0\na,b\n1,0.5\n,true\n")

    def test_render_is_deterministic(self):
        self.assertEqual(ExportManager.render_csv(self.sheet),
                         ExportManager.render_csv(table_sheet(_table_result())))

    def test_table_sheet(self):
        self.assertEqual(list(self.sheet.columns), TableRow.columns())
        self.assertEqual(len(self.sheet.rows), 2)
        spec = self.sheet.metadata["spec"]
        self.assertEqual(spec["Ns"], [80])
        self.assertNotIn("output", spec)
        self.assertNotIn("jobs", spec)
        self.assertEqual(self.sheet.metadata["seed"], 4)

    def test_export_to_csv(self):
        ExportManager.export_to_csv(self.sheet, self.csv_path)
        with open(self.csv_path, encoding="utf-8") as handle:
            text = handle.read()

        self.assertEqual(text, ExportManager.render_csv(self.sheet))
        lines = text.splitlines()
        self.assertEqual(lines[0], f"# generator: {APP_NAME} {__version__}")
        self.assertIn("# prng: PCG64", lines)
        self.assertIn(",".join(TableRow.columns()), lines)
        self.assertIn("0.25,80,50.2654824574,167,,0.9163,0.917,0.03,0.15,false", lines)

    def test_export_to_excel(self):
        ExportManager.export_to_excel(self.sheet, self.excel_path)
        self.assertTrue(os.path.exists(self.excel_path))

        from openpyxl import load_workbook
        wb = load_workbook(self.excel_path)
        self.assertEqual(wb.sheetnames, ["Summary", "Iteration table"])

        summary = wb["Summary"]
        self.assertEqual(summary["A1"].value, "Iteration table")
        keys = [cell.value for cell in summary["A"]]
        self.assertIn("generator", keys)
        self.assertIn("seed", keys)

        ws = wb["Iteration table"]
        headers = [cell.value for cell in ws[1]]
        self.assertEqual(headers, TableRow.columns())
        self.assertTrue(ws["A1"].font.bold)
        self.assertTrue(ws["A1"].fill.fgColor.rgb.endswith("1F4E79"))
        self.assertEqual(ws.freeze_panes, "A2")
        self.assertEqual(ws.auto_filter.ref, "A1:J3")
        self.assertEqual(ws["D2"].value, 114)
        self.assertIsNone(ws["E3"].value)

    def test_spreadsheet_exports_neutralize_formula_text(self):
        sheet = Sheet(title="=HYPERLINK()", columns=["=cmd", "value"],
                      rows=[["@SUM(A1)", "-5"], ["+1+1", 2.5]])
        ExportManager.export_to_excel(sheet, self.excel_path)

        from openpyxl import load_workbook
        wb = load_workbook(self.excel_path)
        self.assertEqual(wb["Summary"]["A1"].value, "'=HYPERLINK()")
        ws = wb[wb.sheetnames[1]]
        self.assertEqual(ws["A1"].value, "'=cmd")
        self.assertEqual(ws["A2"].value, "'@SUM(A1)")
        self.assertEqual(ws["B2"].value, "-5")
        self.assertEqual(ws["A3"].value, "'+1+1")

    def test_excel_rows_are_truncated(self):
        rows = [[i, float(i)] for i in range(10)]
        with patch("app.export._EXCEL_MAX_ROWS", 3):
            ExportManager.export_to_excel(Sheet("Data", ["i", "x"], rows), self.excel_path)

        from openpyxl import load_workbook
        ws = load_workbook(self.excel_path)["Data"]
        self.assertEqual(ws.max_row, 4)

    def test_grid_sheet(self):
        samples = [GridSample(0.0, 1.0, 0.5, 0.3, 0.1, 0.9)]
        sheet = grid_sheet(samples, (0.0, 2.0), (-1.0, 1.0), 5, tight=True)
        self.assertEqual(list(sheet.columns), ["re", "im", "abs_f", "ratio_fg", "lower", "upper"])
        self.assertTrue(sheet.metadata["tight_beta"])
        text = ExportManager.render_csv(sheet)
        self.assertIn("# re_range: [0.0, 2.0]", text)
        self.assertIn("0,1,0.5,0.3,0.1,0.9", text)

    def test_metadata_is_valid_json(self):
        line = next(line for line in header_lines(self.sheet.metadata) if line.startswith("# spec: "))
        spec = json.loads(line[len("# spec: "):])
        self.assertEqual(spec["alphas"], [0.5, 0.25])


if __name__ == "__main__":
    unittest.main()
