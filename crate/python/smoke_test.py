"""Smoke test for the asm_curves extension.

Build first:
    cargo build --release -p asm-py --features extension-module
then run `python3 python/smoke_test.py`. If asm_curves is not installed
the freshly built library under target/ is loaded directly.
"""

import importlib.machinery
import importlib.util
import json
import pathlib
import sys


def load():
    try:
        import asm_curves
        return asm_curves
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        for name in ("libasm_curves.so", "libasm_curves.dylib", "asm_curves.dll"):
            lib = root / "target" / profile / name
            if lib.exists():
                loader = importlib.machinery.ExtensionFileLoader("asm_curves", str(lib))
                spec = importlib.util.spec_from_file_location("asm_curves", lib, loader=loader)
                mod = importlib.util.module_from_spec(spec)
                loader.exec_module(mod)
                sys.modules["asm_curves"] = mod
                return mod
    sys.exit("asm_curves not found; build it with --features extension-module")


def main():
    m = load()

    f = m.Field(3, 1)
    assert f.q == 3 and f.size == 81
    g = f.generator
    assert f.mul(g, f.inv(g)) == 1
    assert f.frobenius(g, 4) == g
    assert f.is_in(f.trace(f.frobenius(g, 2)), "Fq4")
    assert all(f.trace(x) == 0 for x in f.trace_zero_set("Fq4"))

    c = m.Curve(3)
    assert c.genus == 4
    pts = c.points("Fq2")
    assert len(pts) > 0 and all(c.on_curve(u, v) for u, v in pts)

    u, v = c.sample_points(1, seed=7)[0]
    if not c.is_special(u, v):
        seq = c.conic_order_sequence(u, v)
        assert seq[:5] == [0, 1, 2, 3, 4] and c.q in seq
        assert c.osculation(u, v)["multiplicity"] == 3
        assert c.order_sequence(u, v) == [0, 1, 2, 3]
    for seq in c.infinity_order_sequences():
        assert seq == [0, 1, 3, 4], seq

    rep = c.group_report()
    assert rep["order"] == rep["expected_order"] == 2 * (3 - 1) * 9

    h = c.group_elements()[5]
    x, y = h.apply(u, v)
    assert c.on_curve(x, y)
    assert h.compose(h.inverse()) == c.automorphism()
    assert len(h.matrix()) == 4 and h.preserves_curve()

    text, code = m.run_report(3, checks="points,genus,group")
    body = json.loads(text)
    assert code == 0, body["summary"]
    assert body["summary"]["fail"] == 0
    print("smoke test ok:", body["summary"])


if __name__ == "__main__":
    main()
