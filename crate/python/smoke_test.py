"""Smoke test for the mpair extension module.

Build and install first:  pip install --no-build-isolation ./crates/py
"""

import json

import mpair

E1 = """field Q
element b1 deg=0 side=boundary
element i2 deg=1 side=interior
element b3 deg=1 side=boundary
element i4 deg=2 side=interior
d i2 = -1*b1
d b3 = b1
d i4 = b3 + i2
"""

E4 = """boundary_right inward value=0
interior_min pos=1/3 value=1
boundary_left outward value=2
interior_max pos=2/3 value=3
"""


def main():
    d = mpair.MPair.parse(E1)
    assert d.emit() == E1
    assert len(d) == 4 and d.ids == ["b1", "i2", "b3", "i4"] and d.field == "Q"
    assert d.is_valid() and d.validate() == []
    assert d.pairing() == [("i2", "b1"), ("i4", "b3")]
    assert d.canonical_labels() == ["LR(0,1)", "LR(1,0)"]

    minimal, witness = d.minimize()
    assert d.conjugate(witness) == minimal
    reduced, witness = d.reduce()
    assert d.conjugate(witness).emit() == reduced.emit()

    report = json.loads(d.decompose_report())
    assert report["result"]["labels"] == ["LR(0,1)", "LR(1,0)"]
    assert "<svg" in d.render("svg") and "i2 -- b1  [-1]" in d.render()

    model = mpair.from_interval(E4)
    assert len(model) == 5 and model.is_valid()
    inv = model.invariants()
    assert set(inv) == {"pairs", "essentials", "trivial", "h", "hplus"}

    assert mpair.make_l(3).canonical_labels() == ["LR(3,0)"]
    assert mpair.make_r(2, "Q").canonical_labels() == ["LR(0,2)"]
    assert mpair.glue(mpair.make_l(2), mpair.make_r(1)).canonical_labels() == ["LR(2,1)"]
    assert mpair.realize("LCR(1,1)", "GF(3)").canonical_labels() == ["LCR(1,1)"]
    assert mpair.random(8, seed=3, field="GF(5)").is_valid()

    try:
        mpair.sharp(mpair.make_l(1), mpair.make_l(1))
    except mpair.MPairError:
        pass
    else:
        raise AssertionError("overlapping ids must be refused")
    try:
        mpair.MPair.parse("field GF(2)\nelement a deg=x side=boundary\n")
    except mpair.MPairError as e:
        assert "line 2" in str(e)
    else:
        raise AssertionError("bad degree must be refused")

    print("smoke test ok")


if __name__ == "__main__":
    main()
