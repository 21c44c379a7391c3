"""Aggregate events from two threads into one call-path tree and report it.

Run:  python demos/02_call_path_report.py
"""

import threading
from pathlib import Path

from tracelet_core import MeasurementConfig, init, read_archive, read_profile
from tracelet_core.analysis import profile_rows, render_report

OUT = Path("demo-out/report")


def worker(m, label):
    loc = m.location_acquire(label)
    step = m.region_register("step", "worker", __file__, 18)
    fine = m.region_register("fine", "worker", __file__, 19)
    for _ in range(5):
        m.enter(loc, step)
        m.enter(loc, fine)
        sum(range(50_000))
        m.exit(loc, fine)
        m.exit(loc, step)


def main():
    m = init(MeasurementConfig(substrates={"trace", "profile"}, output_dir=OUT))
    threads = [threading.Thread(target=worker, args=(m, f"w{i}")) for i in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    summary = m.finalize()
    print(f"recorded: {summary.as_dict()}  (one location per thread)")
    print()

    # The merged tree sums visits and inclusive time by call path across
    # locations; per-location subtotals stay available in profile.json.
    doc = read_profile(OUT / "profile.json")
    regions = read_archive(OUT).region_by_id()
    print(render_report(profile_rows(doc, regions), sort_key="inclusive"))
    print()
    for entry in doc["per_location"]:
        top = entry["root"]["children"][0]
        print(f"location {entry['location']}: step visits={top['visits']} "
              f"inclusive={top['inclusive_ns']} ns")


if __name__ == "__main__":
    main()
