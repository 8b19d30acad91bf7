#!/usr/bin/env python3
"""Run the worked-example suite and exit nonzero on any failure."""

import sys

from gkmcalc.demo import run_demo


def main() -> int:
    results = run_demo()
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        suffix = f" ({result.detail})" if result.detail else ""
        print(f"[{status}] {result.name}{suffix}")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
