"""Shared helpers: trace verification and brute-force cross-checks."""

from motivic.count import CountQuery, count_points


def assert_trace_verifies(result, budget=None):
    """Every counting identity recorded in the trace must balance exactly."""
    checked = 0
    for step in result.trace:
        if step.identity is None:
            continue
        lv, rv = step.identity.sides(budget=budget)
        assert lv == rv, "%s: %d != %d" % (step.rule, lv, rv)
        checked += 1
    return checked


def brute_count(spec, n, gens):
    return count_points(CountQuery(spec, n, gens))
