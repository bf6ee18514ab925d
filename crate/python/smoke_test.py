"""Smoke test for the Python bindings.

Build and install first:
    pip install --no-build-isolation -e crates/python
"""

import math
from pathlib import Path

import entropy_chain_py as ec

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = math.log((3 + math.sqrt(5)) / 2)


def main():
    cx = ec.FilteredComplex.from_fcx(
        "fcx v1 3\nx 0 0\ny 1 5/2\nz 0 1\nd y x\n"
    )
    assert len(cx) == 3
    assert cx.barcode() == ["5/2", "inf"], cx.barcode()
    assert cx.b_epsilon("1") == 2
    assert cx.b_epsilon("3") == 1
    assert ec.FilteredComplex.from_fcx(cx.to_fcx()).barcode() == cx.barcode()

    cat = ec.catalg_report("A2", "A+ B-")
    assert cat["homology_action"] == [[0, -1], [1, -1]]
    assert abs(cat["h_cat_model"] - GOLDEN) < 1e-6

    h = ec.capacity_entropy("horseshoe 1/3 3", list(range(1, 9)), [1 / 16, 1 / 32])
    assert abs(h - math.log(2)) < 0.1 * math.log(2), h
    v = ec.volume_growth("cat", "segment 0.1 0.2 0.7 0.9", 14)
    assert abs(v - GOLDEN) < 0.05 * GOLDEN, v

    report = ec.compare((ROOT / "configs" / "avoiding.kv").read_text())
    assert report.h_bar == 0.0
    assert report.all_pass
    assert "verdicts.csv" in report.artifacts()

    try:
        ec.FilteredComplex.from_fcx("not a complex")
    except ec.EntropyChainError:
        pass
    else:
        raise AssertionError("bad input was accepted")

    print("python smoke test OK")
    for line in report.verdicts():
        print(" ", line)


if __name__ == "__main__":
    main()
