"""Smoke test for the ranwatt extension module."""

import math

import ranwatt


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(abs(a), abs(b))


def main():
    devices = {d.role: d for d in ranwatt.default_catalog()}
    assert close(devices["access_switch"].energy_per_bit(), 86.7 / 480e9)

    assert close(ranwatt.trend_project(100.0, 0.2, 2008.0, 2009.0), 80.0)
    years = [2008.0 + i for i in range(16)]
    values = [50.0 * 0.8**i for i in range(16)]
    e0, mu, r2 = ranwatt.trend_fit(years, values, 2008.0)
    assert close(e0, 50.0, 1e-9) and close(mu, 0.2, 1e-9) and close(r2, 1.0, 1e-9)

    e = ranwatt.access_energy_per_bit(100e6, 86.7, 48, 2.0, p_rn=110.0, n_rn=32)
    assert close(e, 2 / 100e6 * (86.7 / 48 + 110.0 / 32 + 1.0))
    rows = ranwatt.compare_technologies([1e6, 1e7, 1e8])
    assert len(rows) == 18

    assert [ranwatt.du_count(n) for n in (1, 4, 5, 100)] == [1, 1, 2, 25]
    bh = ranwatt.haul_energy("backhaul", 1.0, hops_switch=1, hops_link=2, hops_router=1)
    assert close(bh, 2 * 3000 / 25600e9 + 2 * 4265 / 9600e9 + 2 * 172 / 3200e9)

    sweep = ranwatt.sweep()
    assert len(sweep) == 400
    assert all(math.isfinite(r["e_total"]) for r in sweep)
    assert ranwatt.sweep_csv(scenarios="S1").count("\n") == 101
    assert len(ranwatt.sweep("[sweep]\nn_ru_max = 10\n", "S2,S4")) == 20

    ok, report = ranwatt.validate("")
    assert ok and report.endswith("0 error(s)\n")
    try:
        ranwatt.sweep("[radio]\nfoo = 1\n")
    except ranwatt.SchemaError:
        pass
    else:
        raise AssertionError("unknown key accepted")
    try:
        ranwatt.trend_fit([2008.0, 2008.0], [1.0, 2.0], 2008.0)
    except ranwatt.DomainError:
        pass
    else:
        raise AssertionError("degenerate fit accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
