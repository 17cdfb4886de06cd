"""
Scenario files: what protocols to run, on which test-bed, how often.

A scenario is JSON with `"schema_version": 1`:

```json
{
  "schema_version": 1,
  "name": "loss-20",
  "protocols": ["PskMaster", "TkdfSym"],
  "trials": 100,
  "seed": 0,
  "topology": {
    "nodes": [{"id": "A", "role": "peer"}, {"id": "B", "role": "peer"}],
    "links": [{"a": "A", "b": "B", "loss_prob": 0.2, "retry_limit": 7}]
  },
  "crypto_costs": {"aead": 25, "sign": 4200}
}
```

`load_config` takes a path or the name of a bundled preset (`awnbench presets` lists
them) and reports every problem it finds at once, each by its dotted field path.
"""
import json
from importlib import resources
from logging import getLogger
from pathlib import Path
from typing import List, Union

from xmodel import JsonModel, Field
from xmodel.errors import XModelError

from awnbench.kinds import ProtocolKind
from awnbench.netsim import CryptoCostModel, NodeRole, Topology, TopologySpec
from awnbench.protocols import NodeIds
from awnbench.settings import BenchSettings
from awnbench.bench.errors import BenchError, ParseError, ValidationError

log = getLogger(__name__)

SCHEMA_VERSION = 1


class ScenarioConfig(JsonModel):
    schema_version: int = SCHEMA_VERSION
    name: str
    description: str
    protocols: List[str] = Field(default=list)
    """ Protocol kind names (or comparison column ids), run in this order. """
    trials: int = 1
    seed: int = 0
    """ Trial `i` runs with seed `seed + i`. """
    provisioning_seed: int = 0
    horizon_us: int
    """ Virtual time limit per trial; unset uses `BenchSettings.default_horizon_us`. """
    initiator: str = 'A'
    responder: str = 'B'
    key_server: str = 'S'
    topology: TopologySpec
    crypto_costs: CryptoCostModel

    @property
    def kinds(self) -> List[ProtocolKind]:
        return [ProtocolKind.parse(p) for p in self.protocols or ()]

    @property
    def ids(self) -> NodeIds:
        return NodeIds(self.initiator, self.responder, self.key_server)

    @property
    def horizon(self) -> int:
        return self.horizon_us or BenchSettings.grab().default_horizon_us

    def build_topology(self) -> Topology:
        return Topology(self.topology)

    def problems(self) -> List[str]:
        out = []
        if self.schema_version != SCHEMA_VERSION:
            out.append(
                f"schema_version: ({self.schema_version}) is not supported, "
                f"expected ({SCHEMA_VERSION})."
            )

        needs_server = False
        if not self.protocols:
            out.append("protocols: at least one protocol is required.")
        for i, name in enumerate(self.protocols or ()):
            try:
                needs_server |= ProtocolKind.parse(name).uses_server
            except ValueError:
                out.append(f"protocols[{i}]: unknown protocol ({name}).")

        if self.trials is None or self.trials < 1:
            out.append(f"trials: ({self.trials}) must be >= 1.")
        if self.seed is None or self.seed < 0:
            out.append(f"seed: ({self.seed}) must be >= 0.")
        if self.horizon_us is not None and self.horizon_us <= 0:
            out.append(f"horizon_us: ({self.horizon_us}) must be > 0.")

        if self.topology is None:
            out.append("topology: required.")
        else:
            out.extend(self.topology.problems('topology'))
            out.extend(self._identity_problems(needs_server))
        if self.crypto_costs is not None:
            out.extend(self.crypto_costs.problems('crypto_costs'))
        return out

    def _identity_problems(self, needs_server: bool) -> List[str]:
        out = []
        if self.initiator == self.responder:
            out.append(f"responder: ({self.responder}) is also the initiator.")
        wanted = [('initiator', NodeRole.PEER), ('responder', NodeRole.PEER)]
        if needs_server:
            wanted.append(('key_server', NodeRole.KEY_SERVER))
        for attr, role in wanted:
            node = getattr(self, attr)
            try:
                actual = self.topology.role_of(node)
            except KeyError:
                out.append(f"{attr}: ({node}) is not a node of the topology.")
                continue
            if actual is not role:
                out.append(f"{attr}: ({node}) has role ({actual.value}), needs ({role.value}).")
        return out


def _field_names() -> set:
    return {f.name for f in ScenarioConfig.api.structure.fields}


def parse_config(text: str, source: str = 'config') -> ScenarioConfig:
    """
    Raises:
        ParseError: not JSON, or not a JSON object.
        ValidationError: every invariant violation found, each naming its field.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"Scenario ({source}) is not valid JSON at line ({e.lineno}) column ({e.colno}): "
            f"{e.msg}.",
            line=e.lineno,
            column=e.colno,
        ) from e
    if not isinstance(doc, dict):
        raise ParseError(f"Scenario ({source}) must be a JSON object, got ({type(doc).__name__}).")

    problems = [f"{k}: unknown field." for k in sorted(set(doc) - _field_names())]
    if 'schema_version' not in doc:
        problems.append("schema_version: required.")
    try:
        config = ScenarioConfig(doc)
    except (XModelError, TypeError, ValueError) as e:
        raise ValidationError(problems + [f"(document): {e}"], source) from e

    problems.extend(config.problems())
    if problems:
        raise ValidationError(problems, source)
    return config


def preset_names() -> List[str]:
    package = BenchSettings.grab().presets_package
    return sorted(
        p.name[:-len('.json')]
        for p in resources.files(package).iterdir()
        if p.name.endswith('.json')
    )


def preset_text(name: str) -> str:
    package = BenchSettings.grab().presets_package
    entry = resources.files(package).joinpath(f"{name}.json")
    if not entry.is_file():
        raise BenchError(
            f"No bundled preset ({name}); available: ({', '.join(preset_names())})."
        )
    return entry.read_text(encoding='utf-8')


def load_config(source: Union[str, Path]) -> ScenarioConfig:
    """
    Loads a scenario from a file path, or a bundled preset by name.

    >>> load_config('adhoc-wpa-loss70').topology.links[0].loss_prob
    0.7

    Raises:
        BenchError: neither a readable file nor a preset name.
        ParseError: not JSON.
        ValidationError: aggregated invariant violations.
    """
    path = Path(source)
    if path.is_file():
        log.debug(f"Loading scenario file ({path}).")
        return parse_config(path.read_text(encoding='utf-8'), str(path))
    return parse_config(preset_text(str(source)), str(source))
