"""The synthetic evaluation protocol: repeated trials, confusion matrix, CDF.

Runs a batch of crossing trials and turn-back trials at calibrated noise,
evaluates switching against ground truth, and prints the report the CLI's
``eval`` command writes to disk.
"""

from seamloc import PipelineConfig, evaluate, format_report, scenario_suite, track, two_building_plan
from seamloc.sim import CALIBRATED_NOISE

plan = two_building_plan()
n = 20

results = []
for kind, fraction in (("crossing", 1.0), ("turn_back", 0.0)):
    for trace, truth in scenario_suite(plan, n, CALIBRATED_NOISE, crossing_fraction=fraction):
        _, log = track(trace, plan, PipelineConfig())
        results.append((log, truth))

report = evaluate(results)
print(format_report(report))

print("CDF of final-position errors:")
for err, frac in report.cdf[:: max(1, len(report.cdf) // 10)]:
    bar = "#" * int(40 * frac)
    print(f"  {err:6.2f} m  {100 * frac:5.1f}%  {bar}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [e for e, _ in report.cdf]
    ys = [f for _, f in report.cdf]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.step(xs, ys, where="post")
    ax.set_xlabel("final position error [m]")
    ax.set_ylabel("cumulative fraction")
    ax.set_title("error CDF over synthetic trials")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig("demo07_cdf.png", dpi=120)
    print("\nwrote demo07_cdf.png")
except ImportError:
    print("\nmatplotlib not available; skipping plot")
