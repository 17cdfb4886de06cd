"""
Deterministic discrete-event simulator of the wireless test-bed.

>>> from awnbench.netsim import Simulator, Topology, LinkModel, NodeRole
>>> topology = Topology.build(
...     [('A', NodeRole.PEER), ('B', NodeRole.PEER)],
...     [LinkModel(a='A', b='B', latency_jitter=0)],
... )
>>> sim = Simulator(topology, seed=1)
>>> sim.send_datagram('A', 'B', b'hello')
>>> sim.run()
1000
"""
from .errors import (
    NetsimError, Unreachable, BindingError, HorizonExceeded, StreamError, SetupTimeout,
    DeliveryTimeout
)
from .models import (
    LinkModel, LinkMode, NodeRole, NodeSpec, TopologySpec, CryptoCostModel, ModelListConverter
)
from .topology import Topology
from .stream import Stream
from .simulator import Simulator, Delivery, EstablishedAt, Interceptor

__all__ = [
    'NetsimError',
    'Unreachable',
    'BindingError',
    'HorizonExceeded',
    'StreamError',
    'SetupTimeout',
    'DeliveryTimeout',
    'LinkModel',
    'LinkMode',
    'NodeRole',
    'NodeSpec',
    'TopologySpec',
    'CryptoCostModel',
    'ModelListConverter',
    'Topology',
    'Stream',
    'Simulator',
    'Delivery',
    'EstablishedAt',
    'Interceptor',
]
