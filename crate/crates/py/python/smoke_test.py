"""Smoke test for the pyecoop extension. Run after `maturin develop` or a pip install."""

import csv
import io
import math

import pyecoop


def main():
    assert "power-split" in pyecoop.schemes()

    cfg, ch = pyecoop.preset("fig6")
    assert ch.antennas == cfg.antennas

    r_max = pyecoop.max_pu_rate("ideal", cfg, ch)
    sol = pyecoop.solve("ideal", cfg, ch, 0.5 * r_max)
    assert sol.feasible and sol.rate_pu >= 0.5 * r_max * (1 - 1e-6)
    assert 0.0 <= sol.split["beta"] <= 1.0

    ps = pyecoop.solve("power-split", cfg, ch, cfg.r_p)
    zf = pyecoop.solve("power-split-zf", cfg, ch, cfg.r_p)
    assert ps.rate_su >= zf.rate_su * (1 - 1e-6)
    assert 0.0 <= ps.split["rho"] <= 1.0

    points = pyecoop.rate_region("time-split", cfg, ch, 6)
    assert len(points) == 6 and points[0][0] == 0.0
    assert all(b[1] <= a[1] * (1 + 1e-6) + 1e-6 for a, b in zip(points, points[1:]))

    custom = pyecoop.SystemConfig(p_p=100.0, p_s0=10.0, eta=0.5, antennas=3)
    rand_ch = pyecoop.ChannelSet.random(3, seed=4)
    assert pyecoop.solve("no-energy", custom, rand_ch, 1.0).feasible

    text = pyecoop.run_experiment("experiment = outage\ntrials = 20\nseed = 3\n")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows and all(0.0 <= float(r["outage_prob"]) <= 1.0 for r in rows)

    try:
        pyecoop.solve("no-such-scheme", cfg, ch, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown scheme accepted")

    print(f"ok: ideal r_p max {r_max:.4f}, power-split {ps.rate_su:.4f} vs ZF {zf.rate_su:.4f}")
    assert math.isfinite(r_max)


if __name__ == "__main__":
    main()
