"""Smoke tests for the pysgq extension module (run under ctest with
PYTHONPATH pointing at the build directory)."""

import os
import sys
import tempfile

import pysgq

FAILURES = []


def check(cond, msg):
    if not cond:
        FAILURES.append(msg)
        print(f"FAIL: {msg}")


def main():
    g = pysgq.Graph.random(30, 140, seed=11)
    check(g.vertex_count == 30, "vertex count")
    check(g.edge_count > 0, "edge count")

    tri = pysgq.Query.parse("(a:L0)-[:T0]->(b:L0),(a:L0)-[:T0]->(c:L0),(b:L0)-[:T0]->(c:L0)")
    check(tri.vertex_count == 3, "query vertex count")
    check("T0" in str(tri), "pattern round-trip")

    cat = pysgq.Catalogue.build(g, h=3, z=500, seed=11)
    check(cat.entry_count > 0, "catalogue entries")

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "cat.txt")
        cat.save(path)
        check(pysgq.Catalogue.load(path).entry_count == cat.entry_count, "catalogue round-trip")

    plan = pysgq.optimize(tri, cat)
    check(plan.cost > 0, "plan cost")
    check("scan" in plan.explain(tri), "explain text")

    truth = pysgq.brute_force_count(tri, g)
    stats = pysgq.execute(plan, tri, g)
    check(stats["output_count"] == truth, "optimized plan count vs oracle")
    check(stats["icost_actual"] > 0, "profiled i-cost")

    par = pysgq.execute(plan, tri, g, workers=4)
    check(par["output_count"] == truth, "parallel count")

    rows = pysgq.matches(plan, tri, g)
    check(len(rows) == truth, "materialized match count")
    check(all(len(r) == 3 for r in rows), "match arity")

    spec = pysgq.spectrum(tri, cat)
    check(len(spec) == 3, "triangle spectrum size")
    check(min(p["cost"] for p in spec) <= plan.cost + 1e-9, "optimizer at spectrum minimum")

    adaptive = pysgq.optimize(tri, cat, adaptive=True)
    astats = pysgq.execute(adaptive, tri, g, catalogue=cat)
    check(astats["output_count"] == truth, "adaptive count")

    inj = pysgq.execute(plan, tri, g, semantics="injective")
    check(inj["output_count"] <= truth, "injective is a subset")

    est, low_conf = cat.estimate(tri)
    check(pysgq.q_error(est, float(truth)) < 100 or truth == 0, "estimate in range")

    big = pysgq.Query.parse(
        ",".join(f"(v{i}:L0)-[:T0]->(v{i + 1}:L0)" for i in range(9))
    )
    try:
        pysgq.spectrum(big, cat)
        check(False, "guard should refuse a 10-vertex spectrum")
    except pysgq.GuardError:
        pass

    try:
        pysgq.Graph.load("/no/such/file", "/no/such/file")
        check(False, "missing file should raise IoError")
    except pysgq.IoError:
        pass

    if FAILURES:
        print(f"{len(FAILURES)} smoke check(s) failed")
        return 1
    print("all smoke checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
