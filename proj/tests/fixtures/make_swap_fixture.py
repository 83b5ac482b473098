#!/usr/bin/env python3
"""Writes swap_events.log and its hand-decoded expectations.

Independent of the C++ decoder: amounts are chosen as exact decimals, encoded
as 32-byte two's-complement words, and the expected price is the exact ratio.
Run once; both outputs are committed.
"""
from decimal import Decimal, getcontext
from pathlib import Path

getcontext().prec = 60

POOL = "0xpoolA"
BASE_DEC = 18   # token0 is the asset
QUOTE_DEC = 6   # token1 is the quote

# (timestamp, base units, quote units, trader buys base?)
SWAPS = [
    ("2023-03-17T00:00:00Z", "2", "3", True),
    ("2023-03-17T05:00:00Z", "1.5", "2.4", False),
    ("2023-03-17T11:59:59Z", "10", "12.5", True),
    ("2023-03-17T12:00:00Z", "0.25", "0.3", True),
    ("2023-03-17T18:30:00Z", "7", "9.1", False),
    ("2023-03-18T01:00:00Z", "3.333333333333333333", "4.5", True),
    ("2023-03-18T13:00:00Z", "100", "137.5", False),
    ("2023-03-19T00:00:00Z", "0.000001", "0.000002", True),
    ("2023-03-19T06:00:00Z", "42", "50.4", True),
    ("2023-03-19T12:00:00+00:00", "5", "6.25", False),
    ("2023-03-20T09:15:00Z", "12345.678901234567890123", "14814.814681", True),
    ("2023-03-20T23:59:59Z", "1", "1.111111", False),
]


def word(v: int) -> str:
    return format(v % (1 << 256), "064x")


def main() -> None:
    here = Path(__file__).resolve().parent
    log = ["# swap-events v1"]
    expected = ["ts,base_amount,quote_amount,price,direction"]
    for ts, base, quote, buy in SWAPS:
        b = int(Decimal(base) * 10**BASE_DEC)
        q = int(Decimal(quote) * 10**QUOTE_DEC)
        # Pool deltas: positive is paid in. A buyer of base pays quote in.
        a0, a1 = (-b, q) if buy else (b, -q)
        log.append(f"{POOL},{ts},0x{word(a0)}{word(a1)}")
        bh = Decimal(b) / Decimal(10**BASE_DEC)
        qh = Decimal(q) / Decimal(10**QUOTE_DEC)
        expected.append(f"{ts},{bh},{qh},{qh / bh:.15e},{'buy' if buy else 'sell'}")
    (here / "swap_events.log").write_text("\n".join(log) + "\n")
    (here / "swap_events_expected.csv").write_text("\n".join(expected) + "\n")
    (here / "pools.csv").write_text(
        "pool_id,asset_id,base_is_token0,base_decimals,quote_decimals\n"
        f"{POOL},Ethereum-FIX,true,{BASE_DEC},{QUOTE_DEC}\n")


if __name__ == "__main__":
    main()
