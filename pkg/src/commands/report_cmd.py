"""Report command for generating markdown reports."""
import os

import click

from ..core.errors import BookkeeperError
from ..core.report import ReportGenerator
from ..utils.config import RunConfig


@click.command()
@click.option('-n', 'n', default=1, type=int, help='Rank of the smaller group')
@click.option('--registry', default=None, type=click.Path(dir_okay=False),
              help='JSON registry of cuspidal tokens')
@click.option('--out', default='reports/Rankin_Report.md', help='Output path for the report')
@click.option('--no-pipeline', is_flag=True, help='Skip the residue pipeline comparison')
@click.pass_context
def report_cmd(ctx, n, registry, out, no_pipeline):
    """Generate a Markdown report with class tables and a weight chart."""
    output_dir = os.path.dirname(out) or '.'
    try:
        config = RunConfig.from_options(n=n, registry=registry, out=out)
        report_gen = ReportGenerator(config.registry, output_dir=output_dir)
        path = report_gen.generate_report(config.n, filename=os.path.basename(out), with_pipeline=not no_pipeline)
    except BookkeeperError as e:
        click.echo(f"✗ Error generating report: {e}")
        ctx.exit(2)

    click.echo(f"✓ Report generated at {path}")
    click.echo(f"  Tokens: {', '.join(t.id for t in config.registry.tokens) or 'none'}")
