import hashlib
import json
import struct
from dataclasses import dataclass
from enum import Enum
from typing import List, Iterator, Tuple, Optional

from awnbench.wire.codec import decoded_view
from awnbench.wire.errors import WireError


class FrameKind(Enum):
    DATAGRAM = 'datagram'
    STREAM = 'stream'
    CONTROL = 'control'
    """ Stream setup segments (SYN / SYN-ACK / ACK); carry no protocol message. """


@dataclass(frozen=True)
class Frame:
    time: int
    """ Virtual microseconds at which the frame went on air. """
    data: bytes
    delivered: bool
    hop: Tuple[str, str]
    kind: FrameKind = FrameKind.DATAGRAM

    def as_json(self) -> dict:
        view = decoded_view(self.data) if self.kind is not FrameKind.CONTROL else None
        return {
            'time': self.time,
            'hex': self.data.hex(),
            'delivered': self.delivered,
            'hop': list(self.hop),
            'kind': self.kind.value,
            'decoded': view,
        }


class Transcript:
    """
    Append-only monitor log of every on-air frame, delivered or dropped.

    Plays the role of a capture card in monitor mode: every hop of every attempt is here,
    so retransmissions and relayed copies are all visible.
    """

    def __init__(self):
        self._frames: List[Frame] = []

    def append(self, frame: Frame):
        if self._frames and frame.time < self._frames[-1].time:
            raise WireError(
                f"Transcript time went backwards ({self._frames[-1].time} -> {frame.time})."
            )
        self._frames.append(frame)

    def __iter__(self) -> Iterator[Frame]:
        return iter(self._frames)

    def __len__(self):
        return len(self._frames)

    def __getitem__(self, item):
        return self._frames[item]

    @property
    def frames(self) -> Tuple[Frame, ...]:
        return tuple(self._frames)

    @property
    def last_time(self) -> Optional[int]:
        return self._frames[-1].time if self._frames else None

    def messages(self, delivered_only: bool = False) -> List[Frame]:
        """ Protocol-message frames (no stream control segments). """
        return [
            f for f in self._frames
            if f.kind is not FrameKind.CONTROL and (f.delivered or not delivered_only)
        ]

    def to_json_lines(self) -> str:
        return ''.join(
            json.dumps(f.as_json(), sort_keys=True, separators=(',', ':')) + '\n'
            for f in self._frames
        )

    def digest(self) -> str:
        h = hashlib.sha256()
        for f in self._frames:
            h.update(struct.pack('>QB?', f.time, len(f.kind.value), f.delivered))
            h.update(f.kind.value.encode())
            h.update('/'.join(f.hop).encode() + b'\0')
            h.update(struct.pack('>I', len(f.data)) + f.data)
        return h.hexdigest()
