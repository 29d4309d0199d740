"""Single-field mutations of a serialized certificate."""

import copy
from fractions import Fraction

from padic_montel.montel import CERTIFIED, CONTAINMENT_RULE, ESCAPE_RULE, INCONCLUSIVE, REFUTED, MontelCertificate


def bump(q, by=1):
    return str(Fraction(q) + by)


def _set(path, value):
    def mutate(doc):
        node = doc
        for key in path[:-1]:
            node = node[key]
        node[path[-1]] = value(node[path[-1]]) if callable(value) else value
    return mutate


# one field changed per mutation
MUTATIONS = {
    "first radius": _set(["orbit", "disks", 0, "radius_exp"], bump),
    "last radius": _set(["orbit", "disks", -1, "radius_exp"], bump),
    "last radius down": _set(["orbit", "disks", -1, "radius_exp"], lambda q: bump(q, -1)),
    "last centre": _set(["orbit", "disks", -1, "center"], lambda q: bump(q, Fraction(1, 7))),
    "first centre": _set(["orbit", "disks", 0, "center"], lambda q: bump(q, 1)),
    "status refuted": _set(["status"], lambda s: REFUTED if s != REFUTED else CERTIFIED),
    "status inconclusive": _set(["status"], lambda s: INCONCLUSIVE if s != INCONCLUSIVE else CERTIFIED),
    "rule": _set(["rule"], lambda r: ESCAPE_RULE if r != ESCAPE_RULE else CONTAINMENT_RULE),
    "witness": _set(["witness"], lambda w: [w[0] + 1] + w[1:] if w else [0]),
    "zero hit": _set(["zero_hit_index"], lambda z: 0 if z is None else z + 1),
    "budget": _set(["budget"], lambda b: b + 1),
    "orbit budget": _set(["orbit", "budget"], lambda b: b - 1),
    "omitted point": _set(["omitted_point"], lambda a: bump(a, 1)),
    "conjugated": _set(["conjugated"], lambda c: not c),
    "polynomial": _set(["polynomial", 0], lambda c: bump(c, 1)),
    "translated": _set(["translated_polynomial", 0], lambda c: bump(c, 1)),
    "disk centre": _set(["disk", "center"], lambda q: bump(q, Fraction(1, 7))),
    "disk radius": _set(["disk", "radius_exp"], lambda q: bump(q, -1)),
    "event kind": _set(["orbit", "events"], lambda ev: [dict(ev[0], event="zero_hit")] if ev else [{"index": 0, "event": "escaped"}]),
    "size limit": _set(["orbit", "size_limit"], lambda s: 1 if s is None else None),
    "drop disk": _set(["orbit", "disks"], lambda ds: ds[:-1]),
    "prime": _set(["prime"], lambda p: {2: 3, 3: 5, 5: 7}[p]),
}


def tampered(cert, name):
    doc = copy.deepcopy(cert.to_json())
    MUTATIONS[name](doc)
    return MontelCertificate.from_json(doc)
