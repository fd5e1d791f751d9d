"""Compare the compiled counting kernel against the pure-Python fallback.

Both kernels walk identical strata, so agreement is asserted on every
case before timing.  Run from the repository root:

    python benchmarks/bench_count.py
"""

import time

from motivic.count import CountQuery, HAVE_COMPILED, _encode_generators, _strata
from motivic.count import _pure
from motivic.fields import prime_field
from motivic.parse import parse_poly

try:
    from motivic.count import _ckernel
except ImportError:
    _ckernel = None

CASES = [
    ("smooth quadric P^3 F7", 7, 3, ["x0*x1 - x2*x3"]),
    ("quadric P^4 F7", 7, 4, ["x0*x1 + x2*x3 + x4^2"]),
    ("cubic P^3 F5", 5, 3, ["x0^3 + x1^3 + x2^3 + x3^3"]),
    ("two gens P^4 F5", 5, 4, ["x0*x1 - x2^2", "x3^2 + x4*x0"]),
    ("quartic P^4 F3", 3, 4, ["x0^4 + x1^4 + x2^3*x3 + x4^2*x0*x1 + x2*x3*x4^2"]),
]


def _count_with(kernel, query):
    spec = query.spec
    q = spec.order
    from motivic.count import _field_tables, _pow_table

    elems, index, add, mul = _field_tables(spec)
    offs, coeffs, exps, maxd, nvars = _encode_generators(query, index)
    powt = _pow_table(q, mul, maxd)
    total = 0
    for lead, fixed, free_pos, free_start in _strata(query):
        total += kernel.count_stratum(
            q, nvars, fixed, free_pos, free_start,
            len(query.generators), offs, coeffs, exps, mul, add, powt, maxd,
        )
    return total


def main():
    print("compiled kernel available:", HAVE_COMPILED)
    rows = []
    for name, p, n, polys in CASES:
        spec = prime_field(p)
        gens = [parse_poly(s, spec, n + 1) for s in polys]
        query = CountQuery(spec, n, gens)

        t0 = time.perf_counter()
        pure = _count_with(_pure, query)
        t_pure = time.perf_counter() - t0

        if _ckernel is not None:
            t0 = time.perf_counter()
            fast = _count_with(_ckernel, query)
            t_fast = time.perf_counter() - t0
            assert fast == pure, (name, fast, pure)
            ratio = t_pure / t_fast if t_fast > 0 else float("inf")
            rows.append((name, pure, t_pure, t_fast, ratio))
        else:
            rows.append((name, pure, t_pure, None, None))

    print()
    print("%-24s %10s %12s %12s %8s" % ("case", "count", "pure (s)",
                                        "compiled", "speedup"))
    for name, count, t_pure, t_fast, ratio in rows:
        if t_fast is None:
            print("%-24s %10d %12.4f %12s %8s" % (name, count, t_pure, "-", "-"))
        else:
            print("%-24s %10d %12.4f %12.4f %7.1fx"
                  % (name, count, t_pure, t_fast, ratio))


if __name__ == "__main__":
    main()
