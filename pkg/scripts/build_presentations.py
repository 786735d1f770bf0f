"""Regenerate ``src/bianchi_modl/data/sl2_d*.json``.

Each PSL2(O_K) relator is evaluated in SL2(O_K); when it evaluates to -I it is
multiplied by the central generator z = -I.  Adding ``z^2`` and ``[z, g]`` for
every generator g then presents SL2(O_K) as the central extension.
"""

import json
import sys
from pathlib import Path

from bianchi_modl.group_data import GroupPresentation, presentation_to_dict, verify_presentation
from bianchi_modl.quad_arith import Mat2, make_field

PSL = {
    1: {
        "extra": {"l": ((0, -1), 0, 0, (0, 1))},
        "relators": ["ll", "tltl", "ulul", "alal", "uu", "auauau", "tultultul", "atAT"],
    },
    2: {"extra": {}, "relators": ["uu", "auauau", "uTutuTut", "atAT"]},
    3: {
        # l = diag(w, 1 - w), of order 3 modulo the centre
        "extra": {"l": ((0, 1), 0, 0, (1, -1))},
        "relators": ["lll", "uu", "ulul", "auauau", "atAT", "Lalt", "LtltA", "alalal", "tltltl"],
    },
    7: {"extra": {}, "relators": ["atAT", "uu", "auauau", "aTutuaTutu"]},
    11: {"extra": {}, "relators": ["atAT", "uu", "auauau", "aTutuaTutuaTutu"]},
}


def build(d):
    F = make_field(d)
    spec = PSL[d]
    names = ["a", "t", "u"] + list(spec["extra"]) + ["z"]
    gens = [
        Mat2.from_ints(F, 1, 1, 0, 1),
        Mat2.from_ints(F, 1, (0, 1), 0, 1),
        Mat2.from_ints(F, 0, -1, 1, 0),
    ]
    gens += [Mat2.from_ints(F, *m) for m in spec["extra"].values()]
    gens.append(Mat2.from_ints(F, -1, 0, 0, -1))
    zi = len(gens)
    P = GroupPresentation(F, names, gens, [], minus_identity=[zi], roles={"E12_1": 0, "E12_w": 1, "S": 2})
    I = Mat2.identity(F)
    rels = []
    for s in spec["relators"]:
        w = [names.index(c) + 1 if c.islower() else -(names.index(c.lower()) + 1) for c in s]
        M = P.evaluate(w)
        if M == -I:
            w = w + [zi]
        elif M != I:
            raise SystemExit("d=%d: %s is not +-I" % (d, s))
        rels.append(w)
    rels.append([zi, zi])
    for g in range(1, zi):
        rels.append([zi, g, -zi, -g])
    P.relators = rels
    P.source = "PSL2 presentation lifted to SL2 through the central element z = -I"
    verify_presentation(P)
    return P


def dump(data):
    lines = ["{"]
    items = list(data.items())
    for i, (k, v) in enumerate(items):
        sep = "," if i < len(items) - 1 else ""
        if k in ("generators", "relators"):
            body = ",\n".join("    " + json.dumps(x) for x in v)
            lines.append('  "%s": [\n%s\n  ]%s' % (k, body, sep))
        else:
            lines.append("  %s: %s%s" % (json.dumps(k), json.dumps(v), sep))
    lines.append("}")
    text = "\n".join(lines) + "\n"
    assert json.loads(text) == data
    return text


if __name__ == "__main__":
    out = Path(__file__).resolve().parents[1] / "src" / "bianchi_modl" / "data"
    for d in sys.argv[1:] and map(int, sys.argv[1:]) or PSL:
        P = build(d)
        (out / ("sl2_d%d.json" % d)).write_text(dump(presentation_to_dict(P)))
        print("d=%d: %d generators, %d relators" % (d, P.ngens, len(P.relators)))
