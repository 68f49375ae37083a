"""Reference coefficients for the small Bermudan put fixtures.

Plain numpy, independent of the C++ code: paths are drawn here, written to
put_fixture.json together with the regression coefficients and stop dates the
engine must reproduce.
"""
import json

import numpy as np

STRIKE, RATE, VOL, SPOT, MATURITY = 100.0, 0.05, 0.2, 100.0, 1.0


def simulate(num_paths, num_dates, seed):
    rng = np.random.default_rng(seed)
    dt = MATURITY / num_dates
    z = rng.standard_normal((num_paths, num_dates))
    steps = (RATE - 0.5 * VOL**2) * dt + VOL * np.sqrt(dt) * z
    return SPOT * np.exp(np.cumsum(steps, axis=1))


def reward(x, date, num_dates):
    t = date * MATURITY / num_dates
    return np.exp(-RATE * t) * np.maximum(STRIKE - x, 0.0)


def design(x):
    return np.column_stack([np.ones_like(x), x])


def tvr(paths):
    n, dates = paths.shape
    coeffs, cont_next = {}, np.zeros(n)
    for j in range(dates, 1, -1):
        response = np.maximum(reward(paths[:, j - 1], j, dates), cont_next)
        gamma, *_ = np.linalg.lstsq(design(paths[:, j - 2]), response, rcond=None)
        coeffs[j - 1] = gamma
        cont_next = design(paths[:, j - 2]) @ gamma
    return coeffs


def ls(paths):
    n, dates = paths.shape
    coeffs = {}
    cash = reward(paths[:, dates - 1], dates, dates)
    for j in range(dates - 1, 0, -1):
        gamma, *_ = np.linalg.lstsq(design(paths[:, j - 1]), cash, rcond=None)
        coeffs[j] = gamma
        g = reward(paths[:, j - 1], j, dates)
        cash = np.where(g >= design(paths[:, j - 1]) @ gamma, g, cash)
    return coeffs


def stop_dates(paths, coeffs):
    n, dates = paths.shape
    out = []
    for i in range(n):
        for j in range(1, dates + 1):
            c = 0.0 if j == dates else float((design(paths[i:i + 1, j - 1]) @ coeffs[j])[0])
            if reward(paths[i, j - 1], j, dates) >= c:
                out.append(j)
                break
    return out


def case(num_paths, num_dates, seed, method):
    paths = simulate(num_paths, num_dates, seed)
    coeffs = tvr(paths) if method == "tvr" else ls(paths)
    return {
        "method": method,
        "num_dates": num_dates,
        "paths": paths.tolist(),
        "gamma": {str(j): g.tolist() for j, g in sorted(coeffs.items())},
        "stop_dates": stop_dates(paths, coeffs),
    }


if __name__ == "__main__":
    doc = {
        "product": {"strike": STRIKE, "rate": RATE, "vol": VOL, "spot": SPOT, "maturity": MATURITY},
        "basis": "constant-linear",
        "cases": [case(10, 3, 20240601, "tvr"), case(8, 2, 20240602, "ls")],
    }
    with open("put_fixture.json", "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")
