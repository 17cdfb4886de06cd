"""
Long-term key material per node, and deterministic provisioning for a scenario.

Symmetric secrets are stored as raw bytes; engines validate them into `SymKey` at
construction so a wrongly sized secret surfaces as `PrerequisiteError`.
"""
import copy
from dataclasses import dataclass, field
from itertools import combinations
from logging import getLogger
from typing import Dict, Optional, Iterable

from Crypto.PublicKey.RSA import RsaKey

from awnbench.crypto import AsymKeyPair, Rng, kdf, long_term_keypair
from awnbench.kinds import ProtocolKind, Family
from awnbench.protocols.errors import PrerequisiteError

log = getLogger(__name__)

RATCHET_LABEL = b'tkdf-sym/ratchet'


@dataclass
class Keystore:
    owner: str
    group_key: Optional[bytes] = field(default=None, repr=False)
    """ Network-wide secret (WEP key / WPA passphrase analog). """
    shared: Dict[str, bytes] = field(default_factory=dict, repr=False)
    """ Pairwise secrets, keyed by the other node's id. """
    keypair: Optional[AsymKeyPair] = None
    server_public: Optional[RsaKey] = None
    """ Key server's verification key (trust root for TkdfAsym). """
    directory: Dict[str, RsaKey] = field(default_factory=dict)
    """ Public keys of other nodes, keyed by id; the server's registry for TkdfAsym. """

    def ratchet(self, peer: str) -> bytes:
        """ Replaces the secret shared with `peer` by a one-way successor. """
        if peer not in self.shared:
            raise PrerequisiteError(f"Node ({self.owner}) shares no key with ({peer}).")
        successor = kdf([RATCHET_LABEL, self.shared[peer]], len(self.shared[peer]) * 8)
        self.shared[peer] = successor.material
        return successor.material

    def clone(self) -> 'Keystore':
        """ Independent copy; the RSA key objects themselves are immutable and shared. """
        return Keystore(
            owner=self.owner,
            group_key=self.group_key,
            shared=dict(self.shared),
            keypair=self.keypair,
            server_public=self.server_public,
            directory=dict(self.directory),
        )

    def __deepcopy__(self, memo):
        return self.clone()


def provision(
        kind: ProtocolKind,
        peers: Iterable[str],
        server: Optional[str] = None,
        seed: int = 0,
) -> Dict[str, Keystore]:
    """
    Pre-deployment key installation for one scenario.

    | Kind          | Material                                                          |
    |---------------|-------------------------------------------------------------------|
    | PskDirect     | 128-bit group key on every peer                                   |
    | PskMaster     | 256-bit group master key on every peer                            |
    | PskNetLayer   | 256-bit key per pair of peers                                     |
    | TkdfSym*      | 256-bit key per peer, shared with the server                      |
    | TkdfAsym*     | RSA keypair per node; peers trust the server's key, server keeps  |
    |               | a directory of peer public keys                                   |
    | OnDemandSts   | RSA signing keypair per peer; every peer knows the others' keys   |

    Args:
        kind: Protocol to provision for.
        peers: Every non-server node that takes part (bystanders included).
        server: Key server id; required by the TKDF families.
        seed: Provisioning seed. Equal seeds give equal material.

    Returns: Keystore per node id (the server included when it has one).
    """
    peers = list(dict.fromkeys(peers))
    rng = Rng(seed).derive('provision', kind.value)
    stores = {p: Keystore(owner=p) for p in peers}
    family = kind.family

    if kind.uses_server:
        if not server:
            raise PrerequisiteError(f"Protocol ({kind.value}) needs a key server id.")
        stores[server] = Keystore(owner=server)

    if kind is ProtocolKind.PSK_DIRECT or kind is ProtocolKind.PSK_MASTER:
        # PskMaster's 128-bit session keys come from a 256-bit master.
        size = 16 if kind is ProtocolKind.PSK_DIRECT else 32
        group = rng.derive('group-key').read(size)
        for p in peers:
            stores[p].group_key = group
    elif kind is ProtocolKind.PSK_NET_LAYER:
        for a, b in combinations(sorted(peers), 2):
            secret = rng.derive('pairwise', a, b).read(32)
            stores[a].shared[b] = secret
            stores[b].shared[a] = secret
    elif family is Family.TKDF_SYM:
        for p in peers:
            secret = rng.derive('server-key', p).read(32)
            stores[p].shared[server] = secret
            stores[server].shared[p] = secret
    elif family is Family.TKDF_ASYM:
        server_pair = long_term_keypair(seed, server)
        stores[server].keypair = server_pair
        for p in peers:
            pair = long_term_keypair(seed, p)
            stores[p].keypair = pair
            stores[p].server_public = server_pair.public_part
            stores[server].directory[p] = pair.public_part
    elif family is Family.ON_DEMAND:
        pairs = {p: long_term_keypair(seed, p) for p in peers}
        for p in peers:
            stores[p].keypair = pairs[p]
            stores[p].directory = {
                other: pair.public_part for other, pair in pairs.items() if other != p
            }

    log.debug(f"Provisioned ({kind.value}) for nodes ({', '.join(stores)}) seed ({seed}).")
    return stores


def clone_stores(stores: Dict[str, Keystore]) -> Dict[str, Keystore]:
    return {node: copy.deepcopy(store) for node, store in stores.items()}
