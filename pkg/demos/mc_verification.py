"""Monte Carlo achievability check against the bound sandwich.

Draws a random 2-antenna channel, estimates the mutual information of
ring-phase input constellations at several SNR points, and confirms the
estimates sit between nothing in particular from below (the constellation
may be suboptimal) and the compound upper bound from above.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import ampcap as ac

OUT_DIR = pathlib.Path(__file__).parent / "output"
OUT_DIR.mkdir(exist_ok=True)

SEED = 7
base = ac.per_antenna_model(ac.random_channel(2, SEED))
snr_points = [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0]

estimates, errors, uppers, lowers = [], [], [], []
for snr in snr_points:
    m = ac.model_at_snr(base, snr)
    constellation = ac.default_constellation(m)
    est = ac.mc_mutual_information(m, constellation, samples=50000, seed=SEED)
    ub = ac.compound_upper_bound(m)
    lb = ac.epi_lower_bound(m)
    estimates.append(est.value_bits)
    errors.append(3.0 * est.std_error_bits)
    uppers.append(ub.value_bits)
    lowers.append(lb.value_bits)
    ok = est.value_bits - 3.0 * est.std_error_bits <= ub.value_bits
    print(
        f"{snr:6.1f} dB: {len(constellation):4d} points, "
        f"mi = {est.value_bits:7.4f} +- {est.std_error_bits:.4f}, "
        f"upper = {ub.value_bits:7.4f}  [{'ok' if ok else 'VIOLATION'}]"
    )

fig, ax = plt.subplots(figsize=(7, 5))
ax.plot(snr_points, uppers, "-", color="black", lw=2, label="compound upper bound")
ax.plot(snr_points, lowers, "-", color="tab:blue", lw=2, label="EPI lower bound")
ax.errorbar(
    snr_points,
    estimates,
    yerr=errors,
    fmt="o",
    color="tab:red",
    capsize=4,
    label="Monte Carlo achievable (3 sigma)",
)
ax.set_xlabel("SNR (dB)")
ax.set_ylabel("bits per channel use")
ax.set_title(f"Achievable rates inside the sandwich (seed {SEED})")
ax.legend(loc="upper left")
ax.grid(alpha=0.3)
fig.tight_layout()
fig.savefig(OUT_DIR / "mc_verification.png", dpi=150)
print(f"wrote {OUT_DIR / 'mc_verification.png'}")
