"""Structured variable identities and their mapping to solver indices.

Identities are plain tuples with a string tag, one shape per role the
encodings use:

    ("fact", i, t)            fact i true at time t
    ("op", i, t)              operator i executed at time t
    ("cond", s, j)            condition of plan state s is observable j
    ("succT", s, s2)          successor of s is s2 when the condition holds
    ("succF", s, s2)          successor of s is s2 when it does not
    ("state", s, t)           plan is in state s at time t
    ("enabled", i, s)         operator i enabled in state (or at time) s
    ("appl", i, t)            operator i applicable at time t
    ("auxinit", k)            initial-state selector bit k
    ("choice", kind, i, b, t) outcome bit b of nondeterministic source i at t
    ("tseitin", n)            clausification auxiliary
"""

from __future__ import annotations


class AtlasError(Exception):
    pass


def identity_label(identity: tuple) -> str:
    return ":".join(str(x) for x in identity)


def parse_identity(label: str) -> tuple:
    parts = label.split(":")
    tag = parts[0]
    if tag == "choice":
        if len(parts) != 5:
            raise AtlasError("bad choice identity %r" % label)
        return (tag, parts[1], int(parts[2]), int(parts[3]), int(parts[4]))
    try:
        return (tag,) + tuple(int(x) for x in parts[1:])
    except ValueError:
        raise AtlasError("bad identity %r" % label) from None


class VariableAtlas:
    """Append-only bijection between identities and positive variable ids."""

    def __init__(self):
        self._by_identity: dict = {}
        self._by_id: list = [None]  # ids start at 1
        self._next_tseitin = 0

    def __len__(self) -> int:
        return len(self._by_id) - 1

    def add(self, identity: tuple) -> int:
        if identity in self._by_identity:
            raise AtlasError("identity already registered: %r" % (identity,))
        vid = len(self._by_id)
        self._by_identity[identity] = vid
        self._by_id.append(identity)
        return vid

    def var(self, identity: tuple) -> int:
        """Id of an already-registered identity."""
        try:
            return self._by_identity[identity]
        except KeyError:
            raise AtlasError("unregistered identity: %r" % (identity,)) from None

    def get(self, identity: tuple):
        return self._by_identity.get(identity)

    def identity(self, vid: int) -> tuple:
        if not 1 <= vid < len(self._by_id):
            raise AtlasError("unknown variable %d" % vid)
        return self._by_id[vid]

    def fresh_tseitin(self) -> int:
        while ("tseitin", self._next_tseitin) in self._by_identity:
            self._next_tseitin += 1
        return self.add(("tseitin", self._next_tseitin))

    def items(self):
        for vid in range(1, len(self._by_id)):
            yield vid, self._by_id[vid]
