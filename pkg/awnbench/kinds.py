"""
The protocol family variants and everything static we know about each one.

| Kind            | Analog (column)         | Family     | Messages | Transport | Layer   |
|-----------------|-------------------------|------------|----------|-----------|---------|
| PskDirect       | WEP                     | psk        | 4        | datagram  | link    |
| PskMaster       | WPA-PSK                 | psk        | 4        | datagram  | link    |
| PskNetLayer     | IPSec                   | psk        | 4        | datagram  | network |
| TkdfSym         | SymTKDF                 | tkdf-sym   | 7        | datagram  | network |
| TkdfSymUnfixed  | (negative control)      | tkdf-sym   | 5        | datagram  | network |
| TkdfAsym        | AsymTKDF                | tkdf-asym  | 7        | datagram  | network |
| TkdfAsymUnfixed | (negative control)      | tkdf-asym  | 7        | datagram  | network |
| OnDemandSts     | SSH, SSL                | on-demand  | 4        | stream    | network |
"""
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Optional


class Family(Enum):
    PSK = 'psk'
    TKDF_SYM = 'tkdf-sym'
    TKDF_ASYM = 'tkdf-asym'
    ON_DEMAND = 'on-demand'


class Transport(Enum):
    DATAGRAM = 'datagram'
    STREAM = 'stream'


class Layer(Enum):
    LINK = 'link'
    NETWORK = 'network'


class Role(Enum):
    INITIATOR = 'initiator'
    RESPONDER = 'responder'
    KEY_SERVER = 'key_server'


@dataclass(frozen=True)
class KindInfo:
    tag: int
    family: Family
    flow_length: int
    transport: Transport
    layer: Layer
    key_type: str
    key_bits: int
    analogs: Tuple[str, ...] = ()
    insecure: bool = False
    fixed_variant: Optional[str] = None


class ProtocolKind(Enum):
    PSK_DIRECT = 'PskDirect'
    PSK_MASTER = 'PskMaster'
    PSK_NET_LAYER = 'PskNetLayer'
    TKDF_SYM = 'TkdfSym'
    TKDF_SYM_UNFIXED = 'TkdfSymUnfixed'
    TKDF_ASYM = 'TkdfAsym'
    TKDF_ASYM_UNFIXED = 'TkdfAsymUnfixed'
    ON_DEMAND_STS = 'OnDemandSts'

    @property
    def info(self) -> KindInfo:
        return _INFO[self]

    @property
    def tag(self) -> int:
        return self.info.tag

    @property
    def family(self) -> Family:
        return self.info.family

    @property
    def insecure(self) -> bool:
        """ Unfixed negative controls; the bench refuses them without `--allow-insecure`. """
        return self.info.insecure

    @property
    def uses_server(self) -> bool:
        return self.family in (Family.TKDF_SYM, Family.TKDF_ASYM)

    @classmethod
    def from_tag(cls, tag: int) -> 'ProtocolKind':
        return _BY_TAG[tag]

    @classmethod
    def parse(cls, value: str) -> 'ProtocolKind':
        """ Accepts the kind name (`TkdfSym`) or a comparison column id (`SymTKDF`). """
        if isinstance(value, ProtocolKind):
            return value
        for kind in cls:
            if value == kind.value or value in kind.info.analogs:
                return kind
        raise ValueError(f"Unknown protocol kind ({value}).")


_INFO = {
    ProtocolKind.PSK_DIRECT: KindInfo(
        1, Family.PSK, 4, Transport.DATAGRAM, Layer.LINK, 'AES', 128, analogs=('WEP',)
    ),
    ProtocolKind.PSK_MASTER: KindInfo(
        2, Family.PSK, 4, Transport.DATAGRAM, Layer.LINK, 'AES', 128, analogs=('WPA-PSK',)
    ),
    ProtocolKind.PSK_NET_LAYER: KindInfo(
        3, Family.PSK, 4, Transport.DATAGRAM, Layer.NETWORK, 'AES', 256, analogs=('IPSec',)
    ),
    ProtocolKind.TKDF_SYM: KindInfo(
        4, Family.TKDF_SYM, 7, Transport.DATAGRAM, Layer.NETWORK, 'AES', 256,
        analogs=('SymTKDF',)
    ),
    ProtocolKind.TKDF_SYM_UNFIXED: KindInfo(
        5, Family.TKDF_SYM, 5, Transport.DATAGRAM, Layer.NETWORK, 'AES', 256,
        insecure=True, fixed_variant='TkdfSym'
    ),
    ProtocolKind.TKDF_ASYM: KindInfo(
        6, Family.TKDF_ASYM, 7, Transport.DATAGRAM, Layer.NETWORK, 'RSA', 2048,
        analogs=('AsymTKDF',)
    ),
    ProtocolKind.TKDF_ASYM_UNFIXED: KindInfo(
        7, Family.TKDF_ASYM, 7, Transport.DATAGRAM, Layer.NETWORK, 'RSA', 2048,
        insecure=True, fixed_variant='TkdfAsym'
    ),
    ProtocolKind.ON_DEMAND_STS: KindInfo(
        8, Family.ON_DEMAND, 4, Transport.STREAM, Layer.NETWORK, 'RSA', 2048,
        analogs=('SSH', 'SSL')
    ),
}

_BY_TAG = {info.tag: kind for kind, info in _INFO.items()}

MAPPED_KINDS = tuple(kind for kind in ProtocolKind if not kind.insecure)
""" The seven-column representatives (six kinds; OnDemandSts stands for SSH and SSL). """
