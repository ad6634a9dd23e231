"""Smoke test for the Python extension.

Build first:

    cargo build -p openbook-ribbons-py --features extension-module

then run `python3 python/smoke_test.py`. The script finds the shared library
under target/ and loads it as `openbook_ribbons_py`.
"""

import importlib.util
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    for profile in ("release", "debug"):
        for name in ("libopenbook_ribbons_py.so", "libopenbook_ribbons_py.dylib", "openbook_ribbons_py.dll"):
            lib = ROOT / "target" / profile / name
            if lib.exists():
                spec = importlib.util.spec_from_file_location("openbook_ribbons_py", lib)
                mod = importlib.util.module_from_spec(spec)
                spec.loader.exec_module(mod)
                return mod
    sys.exit("extension not built; run cargo build -p openbook-ribbons-py --features extension-module")


def main():
    ob = load()

    expected = {
        "ex_2_1_a": (2, 1, 0, 0),
        "ex_2_1_b": (1, 2, -1, 1),
        "ex_2_1_c": (2, 1, 0, 0),
        "disk_identity": (1, 0, 1, 0),
    }
    for name in ob.BUILTIN_DIAGRAMS:
        d = ob.MorseDiagram.builtin(name)
        assert d.validate() == [], name
        p = d.page_invariants()
        got = (p["n_binding"], p["h_handles"], p["euler_char"], p["genus"])
        assert got == expected[name], (name, got)
        assert ob.MorseDiagram.from_text(d.to_text()).to_text() == d.to_text()

    d = ob.MorseDiagram.builtin("ex_2_1_b")
    f = ob.GraphFront.random(d, 3)
    a = f.to_arc_position(d)
    assert a.validate(d) == []
    s = a.to_bennequin()
    r = s.report()
    assert r["bennequin_slack"] == 0 and r["is_sqp"]
    chi, boundary = f.ribbon(d)
    assert (chi, boundary) == (r["euler_char"], r["boundary_components"])
    counts = f.graph_counts(d)
    assert a.euler() == counts["vertices"] - counts["edges"]

    trefoil = ob.BennequinSurface.from_bands(2, [("0", 0, 1, 1), ("1/3", 0, 1, 1), ("2/3", 0, 1, 1)])
    r = trefoil.report()
    assert (r["euler_char"], r["self_linking"], r["boundary_components"]) == (-1, 1, 1)
    t = trefoil.stabilize().stabilize()
    assert t.d == 4 and t.report()["self_linking"] == 1
    assert t.destabilize().destabilize() == trefoil
    assert ob.BennequinSurface.from_text(trefoil.to_text()) == trefoil

    c = ob.cable(2, 3)
    assert c["sqp"] and c["euler_char"] == -3
    c = ob.cable(3, -2)
    assert not c["sqp"] and c["slack"] == 8
    sat = ob.satellite(2, [(0, 1, 1)])
    assert sat["euler_char"] == -1

    try:
        ob.satellite(2, [(0, 1, -1)])
    except ValueError:
        pass
    else:
        raise AssertionError("negative pattern band accepted")

    svg = f.render(d)
    assert len(svg) == 1 and svg[0].startswith("<svg")

    print("python smoke test ok")


if __name__ == "__main__":
    main()
