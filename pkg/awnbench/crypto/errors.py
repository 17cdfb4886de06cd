from awnbench.errors import AwnError


class CryptoError(AwnError):
    pass


class IntegrityError(CryptoError):
    """ A sealed box did not open: wrong key, wrong associated data, or tampered bytes. """


class DecryptError(CryptoError):
    """ Public-key decryption failed: wrong private key or corrupt box. """


class KeyLengthError(CryptoError):
    pass


class PayloadTooLarge(CryptoError):
    pass


class DhError(CryptoError):
    """ Peer Diffie-Hellman value is malformed or of low order. """


class KdfError(CryptoError):
    pass
