"""
gammaq - catalog command
"""
import click

import catalog
from errors import SchemaError
from report import dumps


@click.command("catalog")
@click.argument("name", required=False)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text", show_default=True)
def catalog_cmd(name, fmt):
    """List the shipped examples, or print the input document NAME."""
    if name is not None:
        try:
            click.echo(dumps(catalog.document(name)), nl=False)
        except KeyError as exc:
            raise SchemaError(str(exc.args[0]), pointer="") from exc
        return
    if fmt == "json":
        click.echo(dumps({n: catalog.describe(n) for n in catalog.names()}), nl=False)
        return
    for n in catalog.names():
        click.echo(f"{n:<24} {catalog.describe(n)}")
