"""
Accounting for crypto work, so the simulator can charge virtual compute time.

Every primitive in `awnbench.crypto` records itself on the current `CryptoMeter`.
The simulator activates a fresh meter around each engine event:

>>> with CryptoMeter(measure_wallclock=False) as meter:
...     actions = engine.on_message(sender, data, now)
>>> meter.counts[CryptoOp.SIGN]
1

Outside of an activated meter the counts land on the app-root instance and are simply
never read.
"""
import time
from collections import Counter
from contextlib import contextmanager
from enum import Enum

from xinject import Dependency


class CryptoOp(Enum):
    AEAD = 'aead'
    MAC = 'mac'
    KDF = 'kdf'
    PK_ENCRYPT = 'pk_encrypt'
    PK_DECRYPT = 'pk_decrypt'
    SIGN = 'sign'
    VERIFY = 'verify'
    DH = 'dh'


class CryptoMeter(Dependency):
    # One meter per engine event, on the simulator's thread.
    resource_thread_safe = False

    def __init__(self, measure_wallclock: bool = False):
        self.measure_wallclock = measure_wallclock
        self.counts = Counter()
        self.wallclock_ns = 0

    @contextmanager
    def measure(self, op: CryptoOp):
        self.counts[op] += 1
        started = time.perf_counter_ns() if self.measure_wallclock else None
        try:
            yield
        finally:
            if started is not None:
                self.wallclock_ns += time.perf_counter_ns() - started

    @property
    def wallclock_us(self) -> int:
        return self.wallclock_ns // 1000
