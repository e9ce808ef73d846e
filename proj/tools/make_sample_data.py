#!/usr/bin/env python3
"""Regenerate the synthetic sample bundle under data/.

The curves and trace are synthetic (seeded), shaped like the Q-20 device:
T1 ~ 185 us relaxation curve, Hahn-echo curve with a 50 kHz artificial
detuning, and a 36 h T1 trace sampled every 30 s.
"""
import pathlib

import numpy as np

out = pathlib.Path(__file__).resolve().parent.parent / "data"
rng = np.random.default_rng(20260301)

delays = np.linspace(0.0, 900.0, 46)
t1 = 0.92 * np.exp(-delays / 184.79) + 0.04 + rng.normal(0.0, 0.008, delays.size)
with open(out / "t1_curve.csv", "w") as f:
    f.write("delay_us,signal\n")
    for d, s in zip(delays, t1):
        f.write(f"{d:.6g},{s:.10g}\n")

delays = np.arange(0.0, 600.0 + 1e-9, 3.0)
echo = 0.45 * np.exp(-delays / 207.15) * np.sin(2 * np.pi * 0.05 * delays + 0.3) + 0.5
echo += rng.normal(0.0, 0.008, delays.size)
with open(out / "echo_curve.csv", "w") as f:
    f.write("delay_us,signal\n")
    for d, s in zip(delays, echo):
        f.write(f"{d:.6g},{s:.10g}\n")

n = 4320
values = rng.normal(140.8, 18.7, n)
with open(out / "t1_trace.csv", "w") as f:
    f.write("timestamp_s,value_us\n")
    for i, v in enumerate(values):
        f.write(f"{30 * i},{v:.10g}\n")
