"""Verify command for running the verification suites."""
import click

from ..core.errors import BookkeeperError
from ..core.suites import SUITES, SuiteOptions, run_suite
from ..utils.config import RunConfig
from ..utils.serialization import write_json

SUITE_NAMES = list(SUITES) + ['all']


@click.command()
@click.argument('suite', required=False, type=click.Choice(SUITE_NAMES))
@click.option('--suite', 'suite_option', default=None, type=click.Choice(SUITE_NAMES),
              help='Suite to run when no positional suite is given')
@click.option('-n', 'n', default=2, type=int, help='Largest rank exercised by the data-driven suites')
@click.option('--registry', default=None, type=click.Path(dir_okay=False),
              help='JSON registry of cuspidal tokens (a self-dual character by default)')
@click.option('--max-blocks', '--limit-blocks', 'max_blocks', default=None, type=int,
              help='Skip or reject starting data with more blocks')
@click.option('--max-graphs', default=None, type=int, help='Largest number of residue graphs')
@click.option('--threads', default=None, type=int, help='Worker threads for the pipeline')
@click.option('--out', default=None, help='Write the JSON report to this path')
@click.option('--json', 'as_json', is_flag=True, help='Print the JSON report')
@click.pass_context
def verify_cmd(ctx, suite, suite_option, n, registry, max_blocks, max_graphs, threads, out, as_json):
    """Run a verification suite; exits with 1 when any check fails."""
    name = suite or suite_option or 'all'
    try:
        config = RunConfig.from_options(n=n, registry=registry, out=out, max_blocks=max_blocks,
                                        max_graphs=max_graphs, threads=threads, json=as_json)
        options = SuiteOptions(config.n, config.registry, config.max_blocks, config.max_graphs, config.threads)
        checks = run_suite(name, options)
    except BookkeeperError as e:
        click.echo(f"✗ Error running suite {name}: {e}")
        ctx.exit(2)

    records = [c.record() for c in checks]
    if config.out:
        write_json(records, config.out)
    if config.json:
        click.echo(write_json(records, None), nl=False)
    else:
        for check in checks:
            mark = "✓" if check.passed else "✗"
            click.echo(f"{mark} [{check.suite}] {check.name} ({check.cases} cases)")
            for failure in check.failures[:3]:
                click.echo(f"    {failure}")

    failed = [c for c in checks if not c.passed]
    if failed:
        if not config.json:
            click.echo(f"✗ {len(failed)} of {len(checks)} checks failed")
        ctx.exit(1)
    if not config.json:
        click.echo(f"✓ All {len(checks)} checks passed")
