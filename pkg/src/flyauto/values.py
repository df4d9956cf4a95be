"""State values shared by every automaton.

States are plain immutable Python data: ints, bools, strings, tuples,
frozensets, FrozenMap instances and the two sink markers below.  The
functions here give them a total order and an injective text encoding so
that determinized state sets can be deduplicated and sorted canonically.
"""


class Sink:
    """A distinguished absorbing state."""

    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return (_sink, (self.name,))


_SINKS = {}


def _sink(name):
    if name not in _SINKS:
        _SINKS[name] = Sink(name)
    return _SINKS[name]


ERROR = _sink("Error")
# used by negated automata: the image of Error, an accepting sink
ACCEPT_SINK = _sink("Accept")


class FrozenMap(dict):
    """Hashable, read-only dict used for finite maps inside states."""

    __slots__ = ("_hash",)

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            self._hash = hash(frozenset(self.items()))
            return self._hash

    def _readonly(self, *args, **kwargs):
        raise TypeError("FrozenMap is immutable")

    __setitem__ = __delitem__ = clear = pop = popitem = setdefault = update = _readonly

    def __repr__(self):
        inner = ", ".join(f"{k!r}: {v!r}" for k, v in sorted(self.items(), key=lambda kv: canon(kv[0])))
        return "{" + inner + "}"

    def __reduce__(self):
        return (FrozenMap, (dict(self),))


def canon(x):
    """Sort key giving a total order on state values."""
    if x is None:
        return (-1,)
    if isinstance(x, Sink):
        return (0, x.name)
    if isinstance(x, bool):
        return (1, int(x))
    if isinstance(x, int):
        return (2, x)
    if isinstance(x, str):
        return (3, x)
    if isinstance(x, tuple):
        return (4, tuple(canon(e) for e in x))
    if isinstance(x, (frozenset, set)):
        return (5, tuple(sorted(canon(e) for e in x)))
    if isinstance(x, dict):
        return (6, tuple(sorted((canon(k), canon(v)) for k, v in x.items())))
    if hasattr(x, "canon_key"):
        return (7, x.canon_key())
    return (8, repr(x))


def sort_states(states):
    return tuple(sorted(states, key=canon))


def encode(x):
    """Canonical text encoding; equal encodings iff equal values."""
    if x is None:
        return "_"
    if isinstance(x, Sink):
        return "!" + x.name
    if isinstance(x, bool):
        return "T" if x else "F"
    if isinstance(x, int):
        # huge counts: hex avoids the decimal conversion limit
        return str(x) if x.bit_length() < 4096 else hex(x)
    if isinstance(x, str):
        return '"' + x.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(x, tuple):
        return "(" + ",".join(encode(e) for e in x) + ")"
    if isinstance(x, (frozenset, set)):
        return "{" + ",".join(encode(e) for e in sorted(x, key=canon)) + "}"
    if isinstance(x, dict):
        items = sorted(x.items(), key=lambda kv: canon(kv[0]))
        return "[" + ",".join(encode(k) + ":" + encode(v) for k, v in items) + "]"
    if hasattr(x, "encode_state"):
        return x.encode_state()
    return "<" + repr(x) + ">"


def state_size(x):
    return len(encode(x))


def fmap(pairs=()):
    """Build a FrozenMap, dropping zero/None/empty values."""
    return FrozenMap((k, v) for k, v in dict(pairs).items() if v)


def fmap_add(m, k, v):
    d = dict(m)
    d[k] = d.get(k, 0) + v
    if not d[k]:
        del d[k]
    return FrozenMap(d)
