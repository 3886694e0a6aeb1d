#!/usr/bin/env python3
"""Writes the declared-family configs under configs/acceptance/."""
import json
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "configs" / "acceptance"
COUNT = 32


def bounded_atom(rng):
    kind = rng.choice(["constant", "periodic", "abs_sine", "burst"])
    if kind == "constant":
        return {"series": "constant", "value": round(rng.uniform(0.2, 3.0), 3)}
    if kind == "periodic":
        return {"series": "periodic", "values": [round(rng.uniform(0.0, 2.0), 3) for _ in range(2)]}
    if kind == "abs_sine":
        return {"series": "abs_sine", "amplitude": round(rng.uniform(0.2, 1.0), 3)}
    return {"series": "burst", "period": 3, "offset": rng.randrange(3), "scale": round(rng.uniform(0.5, 2.0), 3),
            "alpha": 0, "base": round(rng.uniform(0.0, 0.5), 3)}


def unbounded_atom(rng):
    if rng.random() < 0.25:
        return {"series": "squares", "scale": round(rng.uniform(0.5, 2.0), 3)}
    return {"series": "power", "scale": round(rng.uniform(0.01, 1.0), 3), "alpha": round(rng.uniform(0.5, 1.5), 3)}


def masses(rng, n):
    raw = [rng.uniform(0.2, 1.0) for _ in range(n)]
    total = sum(raw)
    m = [round(x / total, 6) for x in raw]
    m[-1] = round(1.0 - sum(m[:-1]), 6)
    return m


def main():
    rng = random.Random(20240601)
    OUT.mkdir(parents=True, exist_ok=True)
    for i in range(COUNT):
        n = rng.randint(3, 20)
        if i % 8 == 0:
            share = 1.0
        elif i % 8 == 1:
            share = 0.0
        else:
            share = rng.uniform(0.3, 0.8)
        atoms, jb = [], []
        for label in range(1, n + 1):
            if rng.random() < share:
                atoms.append(bounded_atom(rng))
                jb.append(label)
            else:
                atoms.append(unbounded_atom(rng))
        config = {
            "name": f"acceptance-{i:02d}",
            "command": "partition",
            "seed": i,
            "space": {"masses": masses(rng, n)},
            "family": {"atoms": atoms},
            "window": {"horizon": 4096},
            "expect": {"J_b": jb, "finite_set": jb},
        }
        (OUT / f"family-{i:02d}.json").write_text(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
