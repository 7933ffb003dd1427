"""The ``pause`` command line.

Local subcommands run scenarios and check chain directories in-process;
``serve`` starts the HTTP node service; the ``client`` group is a thin
client for a running node.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from pause import __version__


@click.group()
@click.version_option(version=__version__, prog_name="pause")
def main():
    """Trusted humanitarian signaling over a replicated ledger."""


@main.command("run")
@click.argument("scenario_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option(
    "--out",
    "out_dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Write events.jsonl, picture.geojson, report.md, and the ledger here.",
)
def run_scenario(scenario_path: str, seed: int | None, out_dir: str | None):
    """Run a scenario file; exit nonzero iff any assertion fails."""
    from pause.scenario import Scenario, run

    scenario = Scenario.load(scenario_path)
    result = run(scenario, seed=seed)
    for outcome in result.assertion_results:
        status = "PASS" if outcome.ok else "FAIL"
        click.echo(f"{status}: {json.dumps(outcome.assertion)} ({outcome.detail})")
    if out_dir:
        result.write_outputs(out_dir)
        click.echo(f"outputs written to {out_dir}")
    click.echo(
        f"{scenario.name}: {len(result.log)} events, "
        f"{len(result.picture)} tracks, assertions "
        f"{'passed' if result.ok else 'FAILED'}"
    )
    if not result.ok:
        sys.exit(1)


@main.command("scenarios")
def list_scenarios():
    """List the bundled scenarios."""
    from pause.scenario import BUNDLED_NAMES, bundled

    for name in BUNDLED_NAMES:
        scenario = bundled(name)
        click.echo(f"{name}: {len(scenario.timeline)} events, seed {scenario.seed}")


@main.command("run-bundled")
@click.argument("name")
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
@click.pass_context
def run_bundled(ctx: click.Context, name: str, seed: int | None, out_dir: str | None):
    """Run one of the bundled scenarios by name."""
    from pause.scenario import bundled, run

    result = run(bundled(name), seed=seed)
    for outcome in result.assertion_results:
        status = "PASS" if outcome.ok else "FAIL"
        click.echo(f"{status}: {json.dumps(outcome.assertion)} ({outcome.detail})")
    if out_dir:
        result.write_outputs(out_dir)
    if not result.ok:
        ctx.exit(1)


def _verify_chain_dir(directory: str) -> int:
    from pause.ledger import load_chain, verify_chain_dir

    report = verify_chain_dir(directory)
    if report.ok:
        chain = load_chain(directory)
        entries = sum(len(b.entries) for b in chain)
        click.echo(f"ok: {len(chain)} blocks, {entries} entries")
        return 0
    click.echo(f"BROKEN at height {report.broken_at}: {report.reason}")
    return 1


@main.command("verify-ledger")
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
def verify_ledger(directory: str):
    """Verify a chain directory (one JSON file per block)."""
    sys.exit(_verify_chain_dir(directory))


@main.group("ledger")
def ledger_group():
    """Ledger utilities."""


@ledger_group.command("verify")
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
def ledger_verify(directory: str):
    """Alias of verify-ledger."""
    sys.exit(_verify_chain_dir(directory))


@main.command("replay")
@click.argument("events_path", type=click.Path(exists=True, dir_okay=False))
def replay_events(events_path: str):
    """Re-run the scenario embedded in an event log and compare byte-for-byte."""
    from pause.scenario import replay

    ok, detail = replay(Path(events_path).read_bytes())
    click.echo(detail)
    if not ok:
        sys.exit(1)


@main.command("serve")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--host", default=None, help="Override listen host.")
@click.option("--port", type=int, default=None, help="Override listen port.")
def serve(config_path: str | None, host: str | None, port: int | None):
    """Start the HTTP node service."""
    import uvicorn

    from pause.service import NodeServiceConfig, create_app

    config = NodeServiceConfig.load(config_path)
    app = create_app(config)
    uvicorn.run(
        app,
        host=host or config.listen_host,
        port=port or config.listen_port,
    )


@main.group("client")
@click.option("--url", default="http://127.0.0.1:8470", show_default=True)
@click.option("--client-id", default="cli", show_default=True)
@click.option("--role", default="Humanitarian", show_default=True)
@click.pass_context
def client_group(ctx: click.Context, url: str, client_id: str, role: str):
    """Talk to a running node service."""
    from pause.service import NodeClient

    ctx.obj = NodeClient(url, client_id=client_id, role=role)


def _echo_json(payload) -> None:
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


@client_group.command("info")
@click.pass_obj
def client_info(client):
    _echo_json(client.info())


@client_group.command("submit")
@click.argument("message_json", type=click.Path(exists=True, dir_okay=False))
@click.option("--signature", default=None, help="Hex signature over the digest.")
@click.option(
    "--key-seed",
    default=None,
    help="Derive the originator key from this seed and sign locally.",
)
@click.pass_obj
def client_submit(client, message_json: str, signature: str | None, key_seed: str | None):
    """Submit a message (JSON mirror form) to the node."""
    from pause.wf import KeyPair

    message = json.loads(Path(message_json).read_text())
    signing_key = (
        KeyPair.from_seed(key_seed.encode("utf-8")) if key_seed is not None else None
    )
    _echo_json(client.submit(message, signature=signature, signing_key=signing_key))


@client_group.command("picture")
@click.pass_obj
def client_picture(client):
    _echo_json(client.picture())


@client_group.command("blocks")
@click.option("--from-height", type=int, default=0)
@click.pass_obj
def client_blocks(client, from_height: int):
    _echo_json(client.blocks(from_height))


@client_group.command("audit")
@click.argument("digest")
@click.pass_obj
def client_audit(client, digest: str):
    _echo_json(client.audit(digest))


@client_group.command("whatif")
@click.argument("routes_json", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def client_whatif(client, routes_json: str):
    """Assess candidate routes from a JSON file: [{"route_id", "polyline"}]."""
    routes = json.loads(Path(routes_json).read_text())
    _echo_json(client.what_if(routes))


@client_group.command("trust")
@click.argument("source_id")
@click.argument("outcome", type=click.Choice(["Confirmed", "Refuted"]))
@click.pass_obj
def client_trust(client, source_id: str, outcome: str):
    _echo_json(client.trust(source_id, outcome))


@client_group.command("events")
@click.option("--count", type=int, default=5, show_default=True)
@click.pass_obj
def client_events(client, count: int):
    """Print the next COUNT events from the node's push stream."""
    for event in client.events(max_events=count):
        click.echo(json.dumps(event, sort_keys=True))


@client_group.command("sync-peer")
@click.argument("peer_url")
@click.pass_obj
def client_sync_peer(client, peer_url: str):
    _echo_json(client.sync_with(peer_url))


if __name__ == "__main__":
    main()
