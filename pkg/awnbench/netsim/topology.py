from logging import getLogger
from typing import Dict, List, Tuple, Iterable

import networkx as nx

from awnbench.kinds import ProtocolKind
from awnbench.netsim.errors import Unreachable
from awnbench.netsim.models import TopologySpec, LinkModel, LinkMode, NodeRole, NodeSpec
from awnbench.protocols.engine import NodeIds, RetryPolicy

log = getLogger(__name__)

Hop = Tuple[str, str, LinkModel]


class Topology:
    """
    Radio adjacency of the test-bed as an undirected `networkx` graph.

    Access-point links are expanded into two hops through an internal `ap:` node so the
    AP's loss and latency apply on each side. Routes are shortest paths by base latency,
    computed once per (src, dst).
    """

    def __init__(self, spec: TopologySpec):
        self.spec = spec
        self.graph = nx.Graph()
        for node in spec.nodes or ():
            self.graph.add_node(node.id, role=node.role)

        for link in spec.links or ():
            if link.mode is LinkMode.ACCESS_POINT:
                ap = f"ap:{link.a}-{link.b}"
                self.graph.add_node(ap, role=NodeRole.RELAY, internal=True)
                self.graph.add_edge(link.a, ap, link=link, latency=link.latency_base)
                self.graph.add_edge(ap, link.b, link=link, latency=link.latency_base)
            else:
                self.graph.add_edge(link.a, link.b, link=link, latency=link.latency_base)

        self._paths: Dict[Tuple[str, str], List[Hop]] = {}

    @classmethod
    def build(
            cls,
            nodes: Iterable[Tuple[str, NodeRole]],
            links: Iterable[LinkModel],
    ) -> 'Topology':
        spec = TopologySpec(
            nodes=[NodeSpec(id=n, role=role) for n, role in nodes], links=list(links)
        )
        return cls(spec)

    def __contains__(self, node: str) -> bool:
        return node in self.graph and not self.graph.nodes[node].get('internal')

    def role(self, node: str) -> NodeRole:
        return self.graph.nodes[node]['role']

    def nodes_with(self, role: NodeRole) -> List[str]:
        return [
            n for n, data in self.graph.nodes(data=True)
            if data.get('role') is role and not data.get('internal')
        ]

    def path(self, src: str, dst: str) -> List[Hop]:
        key = (src, dst)
        hops = self._paths.get(key)
        if hops is not None:
            return hops
        try:
            nodes = nx.shortest_path(self.graph, src, dst, weight='latency')
        except (nx.NetworkXNoPath, nx.NodeNotFound) as e:
            raise Unreachable(f"No path from ({src}) to ({dst}).") from e
        hops = [
            (a, b, self.graph.edges[a, b]['link']) for a, b in zip(nodes, nodes[1:])
        ]
        self._paths[key] = hops
        return hops

    def path_latency(self, src: str, dst: str) -> int:
        return sum(link.latency_base for _, _, link in self.path(src, dst))

    def path_jitter(self, src: str, dst: str) -> int:
        return sum(link.latency_jitter for _, _, link in self.path(src, dst))

    def retry_policy(self, ids: NodeIds, kind: ProtocolKind) -> RetryPolicy:
        """ Engine timers sized for the slowest path a handshake of `kind` between `ids` uses. """
        pairs = [(ids.initiator, ids.responder)]
        if kind.uses_server:
            pairs += [(ids.initiator, ids.server), (ids.responder, ids.server)]
        one_way = max(self.path_latency(a, b) + self.path_jitter(a, b) for a, b in pairs)
        return RetryPolicy(one_way_us=one_way)

    def reachable(self, src: str, dst: str) -> bool:
        try:
            self.path(src, dst)
        except Unreachable:
            return False
        return True
