from fractions import Fraction

from src.core.report import ReportGenerator
from src.core.spectra import TokenRegistry


def test_class_frame(chi_registry: TokenRegistry, tmp_path) -> None:
    generator = ReportGenerator(chi_registry, output_dir=str(tmp_path))

    frame = generator.class_frame(1)
    summary = generator.shape_summary(frame)

    assert list(frame["shape"]) == ["(0,0,1,1)", "(0,0,2,0)", "(0,1,2,0)", "(1,0,1,0)"]
    assert sum(frame["weight"], Fraction(0)) == Fraction(7, 2)
    assert list(summary["classes"]) == [1, 1, 1, 1]


def test_report_without_classes(tmp_path) -> None:
    generator = ReportGenerator(TokenRegistry([]), output_dir=str(tmp_path / "out"))

    path = generator.generate_report(1, filename="empty.md")

    text = (tmp_path / "out" / "empty.md").read_text(encoding="utf-8")
    assert path.endswith("empty.md")
    assert "No relevant classes" in text
    assert "![Weights per shape]" not in text
