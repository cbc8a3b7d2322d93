"""Hidden-shift success rate against depolarizing strength and register size.

Run with ``python demos/noise_sweep.py``. Writes ``noise_sweep.csv`` and its
manifest into the current directory.
"""

from nisqemu.bench import SweepConfig, binomial_sigma, run_noise_sweep, success_rates, write_csv, write_manifest

cfg = SweepConfig.default_noise(qubit_list=[2, 4, 6], noise_list=[0.0, 0.05, 0.2, 0.5], repetitions=20)
records = run_noise_sweep(cfg)
rates = success_rates(records)

print("success rate (+- 1 sigma), rows are n, columns are p")
print("n   " + "".join(f"{p:>14}" for p in cfg.noise_list))
for n in cfg.qubit_list:
    cells = []
    for p in cfg.noise_list:
        s, t = rates[(n, p)]
        cells.append(f"{s / t:6.2f} +- {binomial_sigma(s, t):4.2f}")
    print(f"{n:<4}" + "".join(f"{c:>14}" for c in cells))

write_csv(records, "noise_sweep.csv")
print("wrote", write_manifest(cfg, "noise_sweep.csv", records))
