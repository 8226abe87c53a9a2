"""Kinematics and amplitude of the first internal multiple.

Three layers c, c(1+k), c(1+k)^2 with tops at 205 and 405 m. For each
contrast k the zero-offset trace of the m=1 section is compared with the
second primary: the delay should be one extra round trip through the
middle layer and the amplitude should grow like the cube of the
reflection coefficient.

    python3 demos/first_multiple.py
"""

from oneway.studies import first_multiple_study, loglog_slope

CONTRASTS = (0.01, 0.02, 0.04, 0.08)


def main():
    runs = [first_multiple_study(k) for k in CONTRASTS]
    print(f"{'k':>6} {'R':>8} {'delay (ms)':>11} {'ray (ms)':>9} {'amplitude':>11}")
    for k, r in zip(CONTRASTS, runs):
        print(f"{k:6.2f} {r.reflection:8.4f} {1e3 * r.delay:11.1f} {1e3 * r.ray_delay:9.1f} {r.amplitude:11.4g}")
    slope = loglog_slope([r.reflection for r in runs], [r.amplitude for r in runs])
    print(f"log-log slope of amplitude against R: {slope:.3f} (three reflections: 3)")


if __name__ == "__main__":
    main()
