#!/usr/bin/env python3
"""Five-asset Ethereum fixture over 20 half-days and its expected panel.

The expected series are recomputed here from the raw prices and caps with
plain loops (previous-half-day cap weights, members needing both a return
and a lagged cap). Run once; outputs are committed.
"""
import json
import math
import random
from datetime import date, timedelta
from pathlib import Path

START = date(2023, 3, 1)
T = 20
ASSETS = [
    # id, cex listing, logical id, tags
    ("eth-a", "2022-01-01", "a", []),
    ("eth-b", "2023-03-05", "b", []),       # listed on day 4 (grid index 8)
    ("eth-c", None, "c", []),
    ("eth-d", None, "d", []),               # bridged, also on Arbitrum
    ("eth-e", None, "e", ["wrapped"]),      # excluded
]
EXTRA = [("arb-d", "Arbitrum", "d")]


def grid():
    for i in range(T):
        yield START + timedelta(days=i // 2), "H1" if i % 2 == 0 else "H2"


def main():
    here = Path(__file__).resolve().parent
    rng = random.Random(20230301)
    g = list(grid())
    price = {a[0]: [] for a in ASSETS}
    cap = {a[0]: [] for a in ASSETS}
    for aid, *_ in ASSETS:
        p, c = rng.uniform(0.5, 2.0), rng.uniform(1e6, 5e6)
        for i in range(T):
            p *= math.exp(rng.gauss(0, 0.03))
            c *= math.exp(rng.gauss(0, 0.03))
            price[aid].append(p)
            cap[aid].append(c)
    # Gaps: eth-c has no price at index 6, eth-a no cap at index 11.
    price["eth-c"][6] = None
    cap["eth-a"][11] = None

    with open(here / "portfolio_assets.jsonl", "w") as f:
        for aid, listing, logical, tags in ASSETS:
            rec = {"asset_id": aid, "chain": "Ethereum", "address": "0x" + aid.encode().hex(), "symbol": aid[-1].upper(),
                   "tags": tags, "logical_id": logical}
            if listing:
                rec["cex_listing_date"] = listing
            f.write(json.dumps(rec) + "\n")
        for aid, chain, logical in EXTRA:
            f.write(json.dumps({"asset_id": aid, "chain": chain, "address": "0x" + aid.encode().hex(), "symbol": "D",
                                "tags": [], "logical_id": logical}) + "\n")

    def dump(path, table):
        with open(path, "w") as f:
            f.write("series_id,date,half,value\n")
            for aid in sorted(table):
                for (d, h), v in zip(g, table[aid]):
                    if v is not None:
                        f.write(f"{aid},{d.isoformat()},{h},{v!r}\n")
    dump(here / "portfolio_prices.csv", price)
    dump(here / "portfolio_caps.csv", cap)

    def members(kind, i):
        d = g[i][0]
        out = []
        for aid, listing, logical, tags in ASSETS:
            if tags:
                continue
            cex = listing is not None and date.fromisoformat(listing) <= d
            if kind == "CEX" and not cex:
                continue
            if kind == "nonCEX" and cex:
                continue
            if kind == "Local" and aid == "eth-d":
                continue
            out.append(aid)
        return out

    with open(here / "portfolio_expected.csv", "w") as f:
        f.write("kind,date,half,value,missing_flag\n")
        for kind in ["All", "CEX", "nonCEX", "Local"]:
            for i, (d, h) in enumerate(g):
                m = members(kind, i)
                if not m:
                    f.write(f"{kind},{d.isoformat()},{h},NA,2\n")
                    continue
                num = den = 0.0
                used = []
                for aid in m:
                    if i == 0 or price[aid][i] is None or price[aid][i - 1] is None or cap[aid][i - 1] is None:
                        continue
                    used.append((aid, cap[aid][i - 1], math.log(price[aid][i] / price[aid][i - 1])))
                if not used:
                    f.write(f"{kind},{d.isoformat()},{h},NA,1\n")
                    continue
                den = sum(c for _, c, _ in used)
                num = sum(c / den * r for _, c, r in used)
                f.write(f"{kind},{d.isoformat()},{h},{num!r},0\n")


if __name__ == "__main__":
    main()
