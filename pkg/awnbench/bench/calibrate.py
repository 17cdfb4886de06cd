"""
Derives a `CryptoCostModel` from how fast this machine runs each primitive.

Each primitive runs `iterations` times under a wall-clock `CryptoMeter`; the cost of an
operation is the metered time divided by the number of metered invocations, rounded to
whole microseconds (at least 1).
"""
from logging import getLogger
from typing import Callable, Dict

from awnbench.crypto import (
    CryptoMeter, CryptoOp, IvSource, Rng, SymKey, aead_open, aead_seal, dh_keygen, dh_shared,
    kdf, long_term_keypair, mac, pk_decrypt, pk_encrypt, sign, verify
)
from awnbench.netsim import CryptoCostModel
from awnbench.bench.errors import BenchError

log = getLogger(__name__)

PAYLOAD = bytes(64)
""" Roughly one handshake message worth of plaintext. """


def _workloads(rng: Rng) -> Dict[CryptoOp, Callable[[], None]]:
    key = SymKey.from_material(rng.read(32))
    ivs = IvSource(rng.derive('iv'))
    box = aead_seal(key, PAYLOAD, b'calibrate', ivs)
    pair = long_term_keypair(0, 'calibrate')
    sealed = pk_encrypt(pair.public_part, PAYLOAD, rng)
    signature = sign(pair.private_part, PAYLOAD)
    peer_public, _ = dh_keygen(rng)

    def dh():
        _, secret = dh_keygen(rng)
        dh_shared(secret, peer_public)

    return {
        CryptoOp.AEAD: lambda: aead_open(key, box, b'calibrate'),
        CryptoOp.MAC: lambda: mac(key, [PAYLOAD]),
        CryptoOp.KDF: lambda: kdf([b'calibrate', PAYLOAD]),
        CryptoOp.PK_ENCRYPT: lambda: pk_encrypt(pair.public_part, PAYLOAD, rng),
        CryptoOp.PK_DECRYPT: lambda: pk_decrypt(pair.private_part, sealed),
        CryptoOp.SIGN: lambda: sign(pair.private_part, PAYLOAD),
        CryptoOp.VERIFY: lambda: verify(pair.public_part, PAYLOAD, signature),
        CryptoOp.DH: dh,
    }


def calibrate(iterations: int = 20, seed: int = 0) -> CryptoCostModel:
    """
    Raises:
        BenchError: `iterations` below 1.
    """
    if iterations < 1:
        raise BenchError(f"Calibration needs at least one iteration, got ({iterations}).")

    costs = {}
    for op, work in _workloads(Rng(seed).derive('calibrate')).items():
        with CryptoMeter(measure_wallclock=True) as meter:
            for _ in range(iterations):
                work()
        calls = meter.counts[op] or 1
        costs[op.value] = max(1, round(meter.wallclock_ns / calls / 1000))
        log.info(f"Calibrated ({op.value}) at ({costs[op.value]}) us per operation.")
    return CryptoCostModel(**costs)
