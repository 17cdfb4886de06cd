"""
Process-wide defaults, as an `xinject.Dependency`.

Grab the current settings anywhere with `BenchSettings.grab()`; override them temporarily
by activating a new instance:

>>> from awnbench.settings import BenchSettings
>>> with BenchSettings(default_horizon_us=5_000_000):
...     run_benchmark(config)

Wall-clock crypto capture can also be forced with the `AWNBENCH_MEASURE_WALLCLOCK`
environment variable (any value `xbool.bool_value` understands).
"""
import os

from xbool import bool_value
from xinject import Dependency
from xsentinels.default import Default


class BenchSettings(Dependency):
    """ Defaults used by the bench harness when a config or caller does not say otherwise. """

    # Settings are plain values; safe to share the same instance between threads.
    resource_thread_safe = True

    presets_package: str = 'awnbench.bench.presets'
    """ Package holding the bundled `*.json` scenario presets. """

    default_horizon_us: int = 60_000_000
    """ Virtual horizon used when a scenario does not set `horizon_us`. """

    max_retries: int = 10
    max_backoff: int = 64

    def __init__(
            self,
            *,
            default_horizon_us: int = Default,
            measure_wallclock: bool = Default,
            max_retries: int = Default,
    ):
        if default_horizon_us is not Default:
            self.default_horizon_us = default_horizon_us
        if max_retries is not Default:
            self.max_retries = max_retries
        if measure_wallclock is Default:
            measure_wallclock = bool_value(os.environ.get('AWNBENCH_MEASURE_WALLCLOCK', False))
        self.measure_wallclock = bool(measure_wallclock)
