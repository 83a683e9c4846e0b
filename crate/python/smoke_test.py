"""Quick end-to-end check of the hkw_py extension."""
from fractions import Fraction

import hkw_py as h

p2 = h.Potential([1, -1])
assert p2.n == 2 and p2.roots == [Fraction(1), Fraction(-1)]

unknot = h.homology(h.Diagram.preset("unknot"), h.Potential.standard(3))
assert unknot.dims == {(0, -2): 1, (0, 0): 1, (0, 2): 1}, unknot.dims

tref = h.Diagram.preset("trefoil+")
assert tref.crossings == 3 and tref.components == 1 and tref.writhe == 3
res = h.homology(tref, p2)
assert res.total == 2
assert res.slice_bound() == (-1, Fraction(1))
assert h.positive_fast_path(tref, 2)[1:] == (Fraction(1), 1)

assert h.jones_p2(tref) == {-1: 1, -3: 1, -5: 1, -9: -1}

hopf = h.homology(h.Diagram.preset("hopf+"), p2)
assert hopf.components == 2 and hopf.total == 4

assert h.milnor(3, 4) == 3
assert h.homology(h.Diagram.torus(2, 5), p2).slice_bound()[1] == 2

mirrored = h.homology(tref.mirror(), p2)
assert sorted(d for d in mirrored.dims.values()) == sorted(res.dims.values())

terms, degree = h.apply_moves("components 1\nhandle0\nhandle1 merge 0 1\n", [0], p2)
assert (terms, degree) == ({(0,): Fraction(-1)}, 0), (terms, degree)

lines = h.run_verify(h.Diagram.preset("unknot-kink1"), p2)
assert lines and all(l.startswith("ok") for l in lines)

for bad in ["", "[[1,2,3]]", "not a pd"]:
    try:
        h.Diagram.from_pd(bad)
    except ValueError:
        pass
    else:
        raise AssertionError(f"accepted {bad!r}")
try:
    h.Potential([1, 1])
except ValueError:
    pass
else:
    raise AssertionError("accepted repeated roots")
try:
    h.apply_moves("R3 0 1 2\n", [0], p2)
except ValueError:
    pass
else:
    raise AssertionError("accepted R3")

print("smoke test ok:", res, len(lines), "verify checks")
