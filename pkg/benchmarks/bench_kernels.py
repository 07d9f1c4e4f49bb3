"""Compare the compiled and pure-Python simulation engines.

    python benchmarks/bench_kernels.py [--steps N] [--repeat R]

Both engines consume the same uniforms, so their event counts must agree;
the script checks that before reporting nanoseconds per simulated slot.
"""
import argparse
import time

from swipt_rll._engine import ENGINES
from swipt_rll.constraint_codes import CodeType, EdgeProbs, RllSpec
from swipt_rll.link_models import LinkEnv
from swipt_rll.simulator import SimConfig, run_replication

CASES = {
    "iid": dict(p_x=0.4),
    "type0(0,2)": dict(spec=RllSpec(CodeType.TYPE0, 0, 2), probs=EdgeProbs((0.6, 0.5))),
}


def best_time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    link = LinkEnv(p10=0.1, q0=0.6, q1=0.4, b_max=3)
    print(f"engines available: {', '.join(sorted(ENGINES))}")
    print(f"{'case':<12} {'engine':<8} {'ns/slot':>10} {'speedup':>8}")
    for name, src in CASES.items():
        cfg = SimConfig(link, steps=args.steps, burn_in=args.steps // 10, replications=1, seed=1, **src)
        ref = None
        base = None
        for eng in ("python", "cython"):
            if eng not in ENGINES:
                print(f"{name:<12} {eng:<8} {'n/a':>10}")
                continue
            t, counts = best_time(lambda: run_replication(cfg, 0, eng), args.repeat)
            if ref is None:
                ref = counts
            elif counts != ref:
                raise SystemExit(f"engines disagree on {name}: {ref} vs {counts}")
            ns = 1e9 * t / (cfg.steps + cfg.burn_in)
            base = base or ns
            print(f"{name:<12} {eng:<8} {ns:>10.1f} {base / ns:>7.1f}x")


if __name__ == "__main__":
    main()
