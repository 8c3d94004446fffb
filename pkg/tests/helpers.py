from polaritongate.config import PAPER_DEFAULTS, build_medium


def medium(**overrides):
    values = dict(PAPER_DEFAULTS)
    values.update(overrides)
    return build_medium(values)


def rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a)
