"""Enumerate command for listing parabolics, relevant and increasing classes."""
import click

from ..core.errors import BookkeeperError, ConfigError
from ..core.relevant import class_weight, enumerate_increasing, enumerate_relevant
from ..core.resgraph import run_pipeline
from ..core.rsparab import enumerate_rs
from ..utils.config import RunConfig
from ..utils.formatters import format_rational
from ..utils.serialization import datum_to_json, pipeline_report_to_json, rs_to_json, write_json


def _listing(config: RunConfig, kind: str, max_results):
    if kind == 'rs':
        items = enumerate_rs(config.n)
        return [rs_to_json(q) for q in items], [f"{list(q.p_n1_std.parts)} i0={q.i0} w={q.one_line()}" for q in items]
    if kind == 'relevant':
        items = enumerate_relevant(config.n, config.registry, max_results)
        return ([{"datum": datum_to_json(d), "weight": format_rational(class_weight(d))} for d in items],
                [f"{d.describe()}  weight {format_rational(class_weight(d))}" for d in items])
    if kind == 'increasing':
        items = enumerate_increasing(config.n, config.registry, max_results)
        return [datum_to_json(d) for d in items], [d.describe() for d in items]
    report = run_pipeline(config.n, config.registry, max_blocks=config.max_blocks,
                          max_graphs=config.max_graphs, threads=config.threads)
    payload = pipeline_report_to_json(report, config.registry)
    lines = [f"{d.describe()}  weight {format_rational(w)}" for d, w in report.classes.items()]
    lines.append(f"matches direct enumeration: {report.matches_direct_enumeration}")
    return payload, lines


@click.command()
@click.option('--rs', 'kind', flag_value='rs', help='Rankin-Selberg parabolics of GL(n) x GL(n+1)')
@click.option('--relevant', 'kind', flag_value='relevant', default=True,
              help='Relevant classes with their weights (default)')
@click.option('--increasing', 'kind', flag_value='increasing', help='Increasing classes')
@click.option('--pipeline', 'kind', flag_value='pipeline', help='Weighted classes produced by the residue pipeline')
@click.option('-n', 'n', default=1, type=int, help='Rank of the smaller group')
@click.option('--registry', default=None, type=click.Path(dir_okay=False),
              help='JSON registry of cuspidal tokens')
@click.option('--out', default=None, help='Write the JSON listing to this path')
@click.option('--max-results', default=None, type=int, help='Stop with an error past this many classes')
@click.option('--max-blocks', '--limit-blocks', 'max_blocks', default=None, type=int,
              help='Largest starting datum the pipeline may handle')
@click.option('--max-graphs', default=None, type=int, help='Largest number of residue graphs')
@click.option('--json', 'as_json', is_flag=True, help='Print JSON instead of a listing')
@click.pass_context
def enumerate_cmd(ctx, kind, n, registry, out, max_results, max_blocks, max_graphs, as_json):
    """List RS parabolics, relevant or increasing classes, or the pipeline output."""
    try:
        config = RunConfig.from_options(n=n, registry=registry, out=out, max_blocks=max_blocks,
                                        max_graphs=max_graphs, json=as_json)
        if kind == 'rs' and config.n < 1:
            raise ConfigError("Rankin-Selberg parabolics need n >= 1")
        payload, lines = _listing(config, kind, max_results)
    except BookkeeperError as e:
        click.echo(f"✗ Error enumerating {kind}: {e}")
        ctx.exit(2)

    if config.out:
        write_json(payload, config.out)
    if config.json:
        click.echo(write_json(payload, None), nl=False)
        return
    for line in lines:
        click.echo(f"  {line}")
    count = len(payload["classes"]) if kind == 'pipeline' else len(payload)
    click.echo(f"✓ {count} {kind} items for n={config.n}")
    if config.out:
        click.echo(f"  Written to {config.out}")
