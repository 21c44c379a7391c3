# Benchmark kernel scripts; run as `python <kernel>.py <iterations>`,
# never imported.
