"""
Sans-IO handshake engines for every protocol kind, plus key provisioning.

>>> from awnbench.protocols import ProtocolKind, handshake
>>> engines, result = handshake(ProtocolKind.TKDF_SYM, seed=1)
>>> len(result.frames)
7
>>> engines['A'].session_key().key == engines['B'].session_key().key
True

For a timing-accurate run, bind the same engines to an `awnbench.netsim.Simulator`.
"""
from awnbench.kinds import ProtocolKind, Role, Family, Transport, Layer, MAPPED_KINDS
from .errors import ProtocolError, PrerequisiteError, RoleError, NotEstablished, HandshakeReject
from .actions import Action, Send, StartTimer, Established, Fail, SessionKeyMaterial
from .keystore import Keystore, provision, clone_stores
from .engine import ProtocolEngine, KeyServerEngine, NodeIds, RetryPolicy, nonce_minus_one
from .factory import new_engine
from .driver import drive, handshake, build_engines, DriveResult

__all__ = [
    'ProtocolKind',
    'Role',
    'Family',
    'Transport',
    'Layer',
    'MAPPED_KINDS',
    'ProtocolError',
    'PrerequisiteError',
    'RoleError',
    'NotEstablished',
    'HandshakeReject',
    'Action',
    'Send',
    'StartTimer',
    'Established',
    'Fail',
    'SessionKeyMaterial',
    'Keystore',
    'provision',
    'clone_stores',
    'ProtocolEngine',
    'KeyServerEngine',
    'NodeIds',
    'RetryPolicy',
    'nonce_minus_one',
    'new_engine',
    'drive',
    'handshake',
    'build_engines',
    'DriveResult',
]
