"""Decide a handful of small points and compare each verdict with the hull LP.

Every point is given stage by stage (x_4 | x_5 | ...).  The driver's answer
and its per-stage trace are printed next to the brute-force verdict.

Run:  python demos/worked_points.py
"""
from pedigree.cli import format_trace, format_verdict
from pedigree.core import CharVector
from pedigree.membership import decide
from pedigree.oracle import membership

POINTS = {
    "unique five-city decomposition": "0 1/3 2/3 | 0 1/6 0 1/6 1/3 1/3",
    "five cities, nothing rigid": "0 3/4 1/4 | 1/2 0 0 0 0 1/2",
    "five cities, stage 4 infeasible": "0 3/4 1/4 | 0 1/4 0 0 1/4 1/2",
    "six cities, rigid stage 4": "0 1/2 1/2 | 1/4 1/4 1/8 1/8 1/8 1/8 | 0 1/4 0 1/4 0 0 0 0 1/4 1/4",
    "six cities, MCF gap": "0 3/4 1/4 | 1/2 0 0 0 0 1/2 | 0 1/4 1/2 0 1/4 0 0 0 0 0",
    "six cities, member": "0 3/4 1/4 | 1/2 0 0 0 0 1/2 | 1/8 1/8 3/8 0 1/8 1/4 0 0 0 0",
    "seven cities, stage 6 infeasible": ("0 1/2 1/2 | 0 0 0 0 0 1 | 1/2 0 0 0 0 0 0 0 1/2 0 | "
                                         "0 0 0 0 0 0 0 0 0 0 1/4 0 1/2 0 1/4"),
}


def parse(text: str) -> CharVector:
    return CharVector.from_blocks([block.split() for block in text.split("|")])


def main():
    for name, text in POINTS.items():
        x = parse(text)
        v = decide(x)
        o = membership(x)
        agree = "agrees" if v.member == o.member else "DISAGREES"
        print(f"== {name} (n = {x.n})")
        print(f"   driver: {format_verdict(v)}")
        print(f"   hull LP: {'member' if o.member else 'not member'} ({agree})")
        trace = format_trace(v)
        if trace:
            print("   " + trace.replace("\n", "\n   "))
        print()


if __name__ == "__main__":
    main()
