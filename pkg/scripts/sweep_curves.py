"""Tabulate bound curves in long format for plotting.

Each row is (f, d, t, eps, delta, regime).  With ``--oracle`` the d = 2, 3
curves also carry the gap to the brute-force classical maximum.

    python3 scripts/sweep_curves.py --points 101 --out curves.csv
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from fentropy.entropy import builtin
from fentropy.serialize import csv_table
from fentropy.verify import sweep


@dataclass
class CurveConfig:
    points: int = 51
    dims: list = field(default_factory=lambda: [2, 3, 4, 8])
    traces: list = field(default_factory=lambda: [0.5, 1.0])
    names: list = field(default_factory=lambda: ["shannon", "gini_simpson", "tsallis:1.5", "tsallis:3"])
    oracle: bool = False
    oracle_grid: int = 200

    def functions(self):
        for name in self.names:
            base, _, alpha = name.partition(":")
            yield builtin(base, alpha=float(alpha) if alpha else None)


def run(cfg: CurveConfig):
    rows = []
    for f in cfg.functions():
        for d in cfg.dims:
            for t in cfg.traces:
                use_oracle = cfg.oracle and t == 1.0 and d in (2, 3)
                grid = np.linspace(0.0, t, cfg.points)
                for r in sweep(f, d, grid, t=t, oracle=use_oracle, oracle_grid=cfg.oracle_grid):
                    gap = "" if r.oracle_gap is None else r.oracle_gap
                    rows.append((f.label, d, t, r.eps, r.delta, r.regime, gap))
    return rows


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=CurveConfig.points)
    p.add_argument("--dims", type=int, nargs="+")
    p.add_argument("--traces", type=float, nargs="+")
    p.add_argument("--f", dest="names", nargs="+", help="names like shannon or tsallis:2")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--out")
    a = p.parse_args(argv)
    cfg = CurveConfig(points=a.points, oracle=a.oracle)
    for key in ("dims", "traces", "names"):
        if getattr(a, key):
            setattr(cfg, key, getattr(a, key))
    text = csv_table(["f", "d", "t", "eps", "delta", "regime", "oracle_gap"], run(cfg))
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
