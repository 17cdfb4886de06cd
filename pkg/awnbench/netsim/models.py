"""
JSON boundary objects for the simulated test-bed, as `xmodel.JsonModel` subclasses.

They are what scenario files contain (see `awnbench.bench.config`), so each one also knows
how to list its own invariant violations via `problems(path)`; the config loader collects
those from every model before giving up.
"""
from enum import Enum
from typing import List, Mapping, Type, Any

from xmodel import JsonModel, Field
from xmodel.base.fields import Converter
from xmodel.converters import EnumConverter

from awnbench.crypto import CryptoOp
from awnbench.kinds import ProtocolKind, Layer, Family


class LinkMode(Enum):
    AD_HOC = 'adhoc'
    ACCESS_POINT = 'ap'
    """ Traffic goes node -> AP -> node; modelled as two hops with this link's parameters. """


class NodeRole(Enum):
    PEER = 'peer'
    KEY_SERVER = 'key_server'
    RELAY = 'relay'


class ModelListConverter(Converter):
    """ Converts a JSON list of dicts to/from a list of `model_type` objects. """

    def __init__(self, model_type: Type[JsonModel]):
        self.model_type = model_type

    def from_json(self, api, field, value: Any):
        if value is None:
            return None
        return [v if isinstance(v, self.model_type) else self.model_type(v) for v in value]

    def to_json(self, api, field, value: Any):
        if value is None:
            return None
        return [v.api.json() for v in value]

    def to_model(self, *args):
        return self.from_json(*args)


class LinkModel(JsonModel):
    a: str
    b: str
    loss_prob: float = 0.0
    """ Per-frame loss probability at each hop. """
    latency_base: int = 1000
    """ One-way latency, virtual microseconds. """
    latency_jitter: int = 100
    """ Half-width of the uniform jitter added to every latency sample. """
    mode: LinkMode = Field(converter=EnumConverter(), default=LinkMode.AD_HOC)
    retry_limit: int = 0
    """ Link-layer retransmissions per hop; each extra attempt is its own on-air frame. """
    network_loss_prob: float
    """ Loss for network-layer traffic, when it differs from the link layer's (unset: same). """

    def loss_for(self, layer: Layer) -> float:
        if layer is Layer.NETWORK and self.network_loss_prob is not None:
            return self.network_loss_prob
        return self.loss_prob

    def problems(self, path: str = 'link') -> List[str]:
        out = []
        if not self.a or not self.b:
            out.append(f"{path}: both ends (a, b) are required.")
        elif self.a == self.b:
            out.append(f"{path}: link from ({self.a}) to itself.")
        for name in ('loss_prob', 'network_loss_prob'):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                out.append(f"{path}.{name}: ({value}) is not a probability in [0, 1].")
        if self.latency_base is None or self.latency_base <= 0:
            out.append(f"{path}.latency_base: ({self.latency_base}) must be > 0.")
        elif self.latency_jitter is None or not 0 <= self.latency_jitter < self.latency_base:
            out.append(
                f"{path}.latency_jitter: ({self.latency_jitter}) must be >= 0 and below "
                f"latency_base ({self.latency_base})."
            )
        if self.retry_limit is None or self.retry_limit < 0:
            out.append(f"{path}.retry_limit: ({self.retry_limit}) must be >= 0.")
        return out


class NodeSpec(JsonModel):
    id: str
    role: NodeRole = Field(converter=EnumConverter(), default=NodeRole.PEER)

    def problems(self, path: str = 'node') -> List[str]:
        if not self.id:
            return [f"{path}.id: required."]
        if len(self.id) > 8 or not self.id.isascii():
            return [f"{path}.id: ({self.id}) must be an ASCII label of at most 8 characters."]
        return []


class TopologySpec(JsonModel):
    nodes: list = Field(converter=ModelListConverter(NodeSpec), default=list)
    links: list = Field(converter=ModelListConverter(LinkModel), default=list)

    def problems(self, path: str = 'topology') -> List[str]:
        out = []
        seen = set()
        for i, node in enumerate(self.nodes or ()):
            out.extend(node.problems(f"{path}.nodes[{i}]"))
            if node.id in seen:
                out.append(f"{path}.nodes[{i}].id: duplicate node ({node.id}).")
            seen.add(node.id)

        pairs = set()
        for i, link in enumerate(self.links or ()):
            link_path = f"{path}.links[{i}]"
            out.extend(link.problems(link_path))
            for end in ('a', 'b'):
                node = getattr(link, end)
                if node and node not in seen:
                    out.append(f"{link_path}.{end}: unknown node ({node}).")
            pair = frozenset((link.a, link.b))
            if pair in pairs:
                out.append(f"{link_path}: duplicate link ({link.a}, {link.b}).")
            pairs.add(pair)
        return out

    def role_of(self, node: str) -> NodeRole:
        for spec in self.nodes or ():
            if spec.id == node:
                return spec.role
        raise KeyError(node)


def _default_offload() -> List[str]:
    return [k.value for k in ProtocolKind if k.family is Family.PSK]


class CryptoCostModel(JsonModel):
    """
    Virtual compute cost (microseconds) charged per crypto operation.

    Kinds listed in `offload_kinds` run on the Wi-Fi card's hardware; their cost is scaled
    by `offload_scale` (0 by default, i.e. free).
    """
    aead: int = 0
    mac: int = 0
    kdf: int = 0
    pk_encrypt: int = 0
    pk_decrypt: int = 0
    sign: int = 0
    verify: int = 0
    dh: int = 0
    measure_wallclock: bool = False
    offload_kinds: List[str] = Field(default=_default_offload)
    offload_scale: float = 0.0

    def cost_us(self, counts: Mapping[CryptoOp, int], kind: ProtocolKind = None) -> int:
        total = sum((getattr(self, op.value) or 0) * n for op, n in counts.items())
        if kind is not None and kind.value in (self.offload_kinds or ()):
            total = total * (self.offload_scale or 0.0)
        return int(round(total))

    def problems(self, path: str = 'crypto_costs') -> List[str]:
        out = []
        for op in CryptoOp:
            value = getattr(self, op.value)
            if value is not None and value < 0:
                out.append(f"{path}.{op.value}: ({value}) must be >= 0.")
        if self.offload_scale is not None and self.offload_scale < 0:
            out.append(f"{path}.offload_scale: ({self.offload_scale}) must be >= 0.")
        for i, name in enumerate(self.offload_kinds or ()):
            try:
                ProtocolKind.parse(name)
            except ValueError:
                out.append(f"{path}.offload_kinds[{i}]: unknown protocol ({name}).")
        return out
