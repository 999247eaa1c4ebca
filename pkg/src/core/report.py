"""
Report generation functionality.

Handles creation of markdown reports with class tables and charts.
"""

import logging
from pathlib import Path
from typing import Dict, Optional

import matplotlib.pyplot as plt
import pandas as pd

from .relevant import class_weight, enumerate_increasing, enumerate_relevant, stab_order, weyl_order
from .resgraph import run_pipeline
from .rsparab import rs_counts
from .spectra import TokenRegistry
from ..utils.formatters import dict_to_md_table, format_rational, format_shape, status_mark

logger = logging.getLogger(__name__)


class ReportGenerator:
    """Generates markdown reports on the relevant classes of GL(n) x GL(n+1)."""

    def __init__(self, registry: TokenRegistry, output_dir: str = 'reports'):
        """
        Initialize the ReportGenerator.

        Args:
            registry: Cuspidal tokens the classes are built from
            output_dir: Directory where reports and charts will be saved
        """
        self.registry = registry
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def class_frame(self, n: int) -> pd.DataFrame:
        """One row per relevant class: shape, description, |W(pi)|, |Stab| and weight."""
        rows = []
        for datum in enumerate_relevant(n, self.registry):
            rows.append({
                'shape': format_shape(datum.I),
                'datum': datum.describe(),
                'W': weyl_order(datum),
                'stab': stab_order(datum),
                'weight': class_weight(datum),
            })
        return pd.DataFrame(rows, columns=['shape', 'datum', 'W', 'stab', 'weight'])

    def shape_summary(self, frame: pd.DataFrame) -> pd.DataFrame:
        """Class count and total weight per zone shape."""
        if frame.empty:
            return pd.DataFrame(columns=['shape', 'classes', 'weight'])
        grouped = frame.groupby('shape', sort=True).agg(classes=('datum', 'count'),
                                                        weight=('weight', lambda w: sum(w)))
        return grouped.reset_index()

    def plot_weight_bars(self, summary: pd.DataFrame, n: int, filename: str) -> Optional[str]:
        """
        Create a bar chart of the total weight per shape.

        Args:
            summary: Output of shape_summary
            n: Rank shown in the title
            filename: Output filename for the chart

        Returns:
            Path to the saved chart file, or None without classes
        """
        if summary.empty:
            return None

        fig, ax = plt.subplots(figsize=(10, 6))
        ax.bar(summary['shape'], [float(w) for w in summary['weight']], color='steelblue')
        ax.set_xlabel('zone shape I')
        ax.set_ylabel('total weight')
        plt.title(f'Weighted relevant classes, n={n}')
        plt.xticks(rotation=45)
        plt.tight_layout()

        chart_path = self.output_dir / filename
        plt.savefig(chart_path, dpi=150, bbox_inches='tight')
        plt.close(fig)

        return str(chart_path)

    def generate_class_table(self, frame: pd.DataFrame) -> str:
        """Generate markdown table listing every class."""
        if frame.empty:
            return 'No relevant classes'

        header = "| Shape | Datum | W(pi) | Stab | Weight |\n"
        separator = "|---|---|---|---|---|\n"
        rows = [f"| {r.shape} | {r.datum} | {r.W} | {r.stab} | {format_rational(r.weight)} |"
                for r in frame.itertuples()]
        return header + separator + '\n'.join(rows)

    def generate_report(self, n: int, filename: str = 'Rankin_Report.md', with_pipeline: bool = True) -> str:
        """
        Generate a report on the classes for GL(n) x GL(n+1).

        Args:
            n: Rank of the smaller group
            filename: Output filename for the report
            with_pipeline: Whether to run the residue pipeline and compare

        Returns:
            Path to the generated report file
        """
        frame = self.class_frame(n)
        summary = self.shape_summary(frame)
        chart = self.plot_weight_bars(summary, n, f'weights_n{n}.png')
        shape_counts: Dict[str, str] = {row.shape: f"{row.classes} ({format_rational(row.weight)})"
                                        for row in summary.itertuples()}
        increasing = len(enumerate_increasing(n, self.registry))
        rs = rs_counts(max(n, 1))

        lines = [
            f"# Rankin-Selberg classes for GL({n}) x GL({n + 1})",
            "",
            "## Registry",
            "",
            dict_to_md_table({t.id: f"rank {t.rank}, dual {t.dual_id}" for t in self.registry.tokens},
                             key_header="Token", value_header="Data"),
            "",
            "## Rankin-Selberg parabolics",
            "",
            dict_to_md_table({f"n={k}": v for k, v in rs.items()}, key_header="Rank", value_header="Count"),
            "",
            "## Classes per shape",
            "",
            dict_to_md_table(shape_counts, value_header="Classes (weight)"),
            "",
            f"Total weight: {format_rational(sum(frame['weight'], 0))}; increasing classes: {increasing}",
            "",
        ]
        if chart:
            lines += [f"![Weights per shape]({Path(chart).name})", ""]
        lines += ["## Classes", "", self.generate_class_table(frame), ""]
        if with_pipeline and n >= 1:
            report = run_pipeline(n, self.registry)
            lines += [
                "## Residue pipeline",
                "",
                f"{status_mark(report.matches_direct_enumeration)} {report.starts} starting data, "
                f"{report.graphs} graph pairs, {len(report.classes)} classes; "
                f"matches direct enumeration: {report.matches_direct_enumeration}",
                "",
            ]

        report_path = self.output_dir / filename
        report_path.write_text('\n'.join(lines), encoding='utf-8')
        logger.info("report written to %s", report_path)
        return str(report_path)
