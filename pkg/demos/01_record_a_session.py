"""Record a small call tree by hand and inspect the files it produces.

Run:  python demos/01_record_a_session.py
"""

from pathlib import Path

from tracelet_core import MeasurementConfig, dump_trace_lines, init, read_archive

OUT = Path("demo-out/session")


def busy(n):
    return sum(i * i for i in range(n))


def main():
    m = init(MeasurementConfig(substrates={"trace", "profile"}, output_dir=OUT,
                               instrumenter_label="demo"))
    loc = m.location_acquire("MainThread")

    # Regions are interned: registering the same tuple twice returns the same id.
    outer = m.region_register("outer", "__main__", __file__, 14)
    inner = m.region_register("inner", "__main__", __file__, 15)
    assert m.region_register("outer", "__main__", __file__, 14) == outer

    m.enter(loc, outer)
    for _ in range(3):
        m.enter(loc, inner)
        busy(10_000)
        m.exit(loc, inner)
    m.exit(loc, outer)

    summary = m.finalize()
    print(f"recorded: {summary.as_dict()}")
    print(f"files:    {sorted(p.name for p in OUT.iterdir())}")
    print()

    archive = read_archive(OUT)
    for line in dump_trace_lines(archive):
        print(line)


if __name__ == "__main__":
    main()
