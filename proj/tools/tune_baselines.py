#!/usr/bin/env python3
#
# Copyright 2026 The SPriFed Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Non-private grid search over DP-SGD-L1 and DP-GCD hyperparameters.

Each grid point is one `sprifed run` over a few seeds at a fixed budget. The
script prints mean test MSE per point and the best point per algorithm.
"""

import argparse
import itertools
import json
import statistics
import subprocess
import sys
import tempfile
from pathlib import Path

SGD_LEARNING_RATES = [0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]
SGD_L1 = [0.0, 1e-4, 1e-3, 3e-3, 1e-2]
GCD_STEP_SCALES = [0.25, 0.5, 1.0, 2.0, 4.0]  # multiples of 1/n


def run_point(cli, workdir, base, algo, table):
    lines = [f"{k} = {json.dumps(v)}" for k, v in base.items()]
    lines.append(f'algos = ["{algo}"]')
    lines.append("[[baseline]]")
    lines.append(f'algo = "{algo}"')
    lines += [f"{k} = {v!r}" for k, v in table.items()]
    cfg = Path(workdir) / "tune.toml"
    out = Path(workdir) / "tune.jsonl"
    cfg.write_text("\n".join(lines) + "\n")
    subprocess.run([cli, "run", "--config", str(cfg), "--out", str(out)], check=True)
    rows = [json.loads(l) for l in out.read_text().splitlines() if l.strip()]
    mses = [r["test_mse"] for r in rows if r["test_mse"] is not None]
    if len(mses) < len(rows):
        return float("inf")
    return statistics.mean(mses)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cli", default="build/sprifed", help="path to the sprifed binary")
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--p", type=int, default=2500)
    ap.add_argument("--s", type=int, default=5)
    ap.add_argument("--mu-p", type=float, default=0.543)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=424242,
                    help="master seed; keep it apart from evaluation seeds")
    args = ap.parse_args()

    base = {
        "n": args.n, "p": args.p, "s": args.s, "n_test": 1000,
        "mu_p": args.mu_p, "mu_s": 0.02, "trials": args.trials,
        "master_seed": args.seed,
    }
    best = {}
    with tempfile.TemporaryDirectory() as tmp:
        for lr, l1 in itertools.product(SGD_LEARNING_RATES, SGD_L1):
            mse = run_point(args.cli, tmp, base, "dp_sgd_l1",
                            {"learning_rate": lr, "l1_coef": l1})
            print(f"dp_sgd_l1 learning_rate={lr:g} l1_coef={l1:g} mse={mse:.5g}")
            if mse < best.get("dp_sgd_l1", (float("inf"),))[0]:
                best["dp_sgd_l1"] = (mse, {"learning_rate": lr, "l1_coef": l1})
        for scale in GCD_STEP_SCALES:
            lr = scale / args.n
            mse = run_point(args.cli, tmp, base, "dp_gcd", {"learning_rate": lr})
            print(f"dp_gcd learning_rate={lr:g} ({scale:g}/n) mse={mse:.5g}")
            if mse < best.get("dp_gcd", (float("inf"),))[0]:
                best["dp_gcd"] = (mse, {"learning_rate": lr})
    for algo, (mse, params) in best.items():
        print(f"best {algo}: {params} mse={mse:.5g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
