#!/usr/bin/env python3
"""Writes scenarios/fig6.scenario: an AGV network behind the 6G bridge and a
three-bridge factory backbone, 50 uplink, 50 downlink and 5 wired streams per
side, random talker phases. Deterministic for a given --seed."""

import argparse
import random
from collections import deque

AGV = ["agv-plc", "agv-drive", "agv-lidar", "agv-cam", "agv-io"]
BACKBONE = {"B1": ["mes"], "B2": ["srv1", "srv2"], "B3": ["plc1", "plc2"]}

NODES = [(n, "end-station") for n in AGV]
NODES += [("agv-sw", "tsn-bridge"), ("6g", "sixg-bridge")]
NODES += [(b, "tsn-bridge") for b in BACKBONE]
NODES += [(s, "end-station") for ss in BACKBONE.values() for s in ss]

LINKS = [(n, "agv-sw") for n in AGV] + [("agv-sw", "6g"), ("6g", "B1"), ("B1", "B2"), ("B1", "B3")]
LINKS += [(s, b) for b, ss in BACKBONE.items() for s in ss]


def path(a, b):
    adj = {}
    for x, y in LINKS:
        adj.setdefault(x, []).append(y)
        adj.setdefault(y, []).append(x)
    prev = {a: None}
    todo = deque([a])
    while todo:
        n = todo.popleft()
        for m in adj[n]:
            if m not in prev:
                prev[m] = n
                todo.append(m)
    out = [b]
    while out[-1] != a:
        out.append(prev[out[-1]])
    return out[::-1]


def stream(sid, talker, listener, period_ms, phase_us, jitter):
    nodes = ", ".join(f'"{n}"' for n in path(talker, listener))
    return (f'[[streams]]\nid = "{sid}"\ntalker = "{talker}"\nlistener = "{listener}"\n'
            f'path = [{nodes}]\nperiod = "{period_ms}ms"\nphase = "{phase_us}us"\njitter = "{jitter}"\n')


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=6)
    ap.add_argument("-o", "--output", default="scenarios/fig6.scenario")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    stations = [s for ss in BACKBONE.values() for s in ss]

    parts = [
        "# AGV scenario: the AGV network sits behind the DS-TT, the factory backbone\n"
        "# behind the NW-TT. 50 uplink, 50 downlink and 5 wired streams on each side.\n"
        "# Generated by tools/gen_fig6.py; edit the script, not this file.\n",
        '[experiment]\nname = "fig6"\nseed = 1\ncycles = 10000\nresidence = "pdc"\n',
        '[histograms]\nuplink = "uplink.csv"\ndownlink = "downlink.csv"\n',
        '[link_defaults]\nspeed_bps = 100_000_000\npropagation = "50ns"\n',
        "[stream_defaults]\nframe_size = 100\npcp = 7\n",
    ]
    for n, kind in NODES:
        extra = '\ndevice_side = ["agv-sw--6g"]' if n == "6g" else ""
        parts.append(f'[[nodes]]\nid = "{n}"\nkind = "{kind}"{extra}\n')
    for a, b in LINKS:
        parts.append(f'[[links]]\na = "{a}"\nb = "{b}"\n')
    for i in range(50):
        parts.append(stream(f"ul{i:02d}", rng.choice(AGV), rng.choice(stations), 20, rng.randrange(20000), "100us"))
    for i in range(50):
        parts.append(stream(f"dl{i:02d}", rng.choice(stations), rng.choice(AGV), 20, rng.randrange(20000), "100us"))
    for prefix, pool in (("agv-w", AGV), ("bb-w", stations)):
        for i in range(5):
            a, b = rng.sample(pool, 2)
            parts.append(stream(f"{prefix}{i}", a, b, 5, rng.randrange(5000), "1us"))
    parts.append('[pdc]\nmode = "timestamp"\ndefault = "max"\nslot = "100us"\ndrop_late = true\n')
    with open(args.output, "w") as f:
        f.write("\n".join(parts))


if __name__ == "__main__":
    main()
