"""Compare the compiled and pure-Python propagation kernels.

    python benchmarks/bench_propagate.py [--repeat 3] [--sizes 4:10,8:30,12:60]

Each size is ``boundary:internal``. Both backends reconstruct the same
PCDs and the script checks that they produce identical graphs.
"""
import argparse
import statistics
import time

from pcdrecon import GeneratorParams, available_backends, measure, random_network, reconstruct


def _time(pcd, backend, symmetric, repeat):
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = reconstruct(pcd, symmetric, backend=backend, check=False)
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs), result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sizes", default="4:10,8:30,12:60,16:100")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the python backend is available")
    print(f"{'boundary':>8} {'internal':>8} {'routing':>9} " + " ".join(f"{b + ' ms':>11}" for b in backends) + "  speedup")
    for spec in args.sizes.split(","):
        nb, ni = (int(x) for x in spec.split(":"))
        for symmetric in (False, True):
            g = random_network(GeneratorParams(
                seed=args.seed, boundary_count=nb, internal_count=ni,
                edge_density=0.2, symmetric_routing=symmetric, ensure_compliant=True,
            ))
            pcd = measure(g)
            times, graphs = {}, {}
            for b in backends:
                times[b], res = _time(pcd, b, symmetric, args.repeat)
                graphs[b] = res.graph
            if any(graphs[b] != graphs[backends[0]] for b in backends):
                raise SystemExit(f"backends disagree at {spec} ({'symmetric' if symmetric else 'general'})")
            speedup = times["python"] / times["cython"] if "cython" in times else float("nan")
            cols = " ".join(f"{times[b] * 1e3:11.2f}" for b in backends)
            print(f"{nb:8d} {ni:8d} {'symmetric' if symmetric else 'general':>9} {cols}  {speedup:6.1f}x")


if __name__ == "__main__":
    main()
