"""Divisor command for computing singularity divisors of a datum."""
import click

from ..core.divisors import L_pi_0, L_pi_E, L_pi_P, L_pi_P_up, L_pi_res, L_pi_w, L_pi_Z
from ..core.errors import BookkeeperError, ConfigError
from ..core.relevant import IncreasingDatum, RelevantDatum
from ..utils.config import RunConfig
from ..utils.serialization import datum_from_json, divisor_to_json, load_json, rep_from_json, weyl_from_json, write_json

WHICH = ['E', '0', 'Z', 'P', 'Pup', 'res', 'w']


def _read_input(path: str, config: RunConfig):
    """(datum or None, pi, w or None) from a datum file."""
    data = load_json(path)
    if not isinstance(data, dict):
        raise ConfigError("a datum file holds a JSON object")
    datum = None
    if 'zones' in data or 'I' in data:
        datum = datum_from_json(data, config.registry)
        pi = datum.pi
    elif 'pi' in data:
        pi = rep_from_json(data['pi'], config.registry)
    else:
        pi = rep_from_json(data, config.registry)
    w = weyl_from_json(data['w']) if 'w' in data else None
    return datum, pi, w


def compute_divisor(which: str, datum, pi, w):
    """
    Dispatch to the divisor named by ``which``.

    Raises:
        ConfigError: If the input does not carry the datum the divisor needs
    """
    if which == 'E':
        return L_pi_E(pi)
    if which == '0':
        return L_pi_0(pi)
    if which == 'res':
        return L_pi_res(pi)
    if which == 'Z':
        return L_pi_Z(pi)
    if which == 'P':
        if not isinstance(datum, RelevantDatum):
            raise ConfigError("L_pi_P needs a relevant datum")
        return L_pi_P(datum)
    if which == 'Pup':
        if not isinstance(datum, IncreasingDatum):
            raise ConfigError("L_pi_P_up needs an increasing datum")
        return L_pi_P_up(datum)
    if w is not None:
        return L_pi_w(pi, w)
    if datum is None:
        raise ConfigError("L_pi_w needs a datum or an explicit Weyl element")
    return L_pi_w(datum)


@click.command()
@click.argument('datum_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--which', default='E', type=click.Choice(WHICH), help='Divisor to compute')
@click.option('--registry', default=None, type=click.Path(dir_okay=False),
              help='JSON registry of cuspidal tokens')
@click.option('--out', default=None, help='Write the JSON divisor to this path')
@click.option('--json', 'as_json', is_flag=True, help='Print the JSON divisor')
@click.pass_context
def divisor_cmd(ctx, datum_file, which, registry, out, as_json):
    """Compute a singularity divisor for the datum in DATUM_FILE."""
    try:
        config = RunConfig.from_options(registry=registry, out=out, json=as_json)
        datum, pi, w = _read_input(datum_file, config)
        divisor = compute_divisor(which, datum, pi, w)
    except BookkeeperError as e:
        click.echo(f"✗ Error computing divisor {which}: {e}")
        ctx.exit(2)

    payload = divisor_to_json(divisor)
    if config.out:
        write_json(payload, config.out)
    if config.json:
        click.echo(write_json(payload, None), nl=False)
        return
    click.echo(f"✓ L_{which} = {divisor.pretty()}")
    click.echo(f"  Chart: {', '.join(divisor.chart)}")
