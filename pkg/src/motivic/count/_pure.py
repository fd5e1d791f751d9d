"""Plain-Python counting kernels, same calling convention as _ckernel."""

from __future__ import annotations


def count_stratum(q, nvars, fixed, free_pos, free_start, ngens,
                  gen_off, gen_coeff, gen_exps, mul, add, powt, maxd):
    """Count zeros of all generators on one lead stratum.

    fixed: value indices per coordinate (free ones get overwritten);
    free_pos/free_start: odometer positions and their first value;
    generator data is flattened: term t of generator g runs over
    gen_coeff[t], gen_exps[t*nvars : (t+1)*nvars] for t in
    [gen_off[g], gen_off[g+1]).  All arithmetic is table lookups on
    value indices.  The odometer steps the last free position fastest,
    matching the canonical enumeration order.
    """
    x = list(fixed)
    k = len(free_pos)
    stride = maxd + 1
    count = 0

    def zero_here():
        for g in range(ngens):
            acc = 0
            for t in range(gen_off[g], gen_off[g + 1]):
                v = gen_coeff[t]
                base = t * nvars
                for i in range(nvars):
                    e = gen_exps[base + i]
                    if e:
                        v = mul[v * q + powt[x[i] * stride + e]]
                        if v == 0:
                            break
                acc = add[acc * q + v]
            if acc != 0:
                return False
        return True

    if k == 0:
        return 1 if zero_here() else 0

    idx = [free_start[j] for j in range(k)]
    for j in range(k):
        x[free_pos[j]] = idx[j]
    while True:
        if zero_here():
            count += 1
        j = k - 1
        while j >= 0:
            idx[j] += 1
            if idx[j] < q:
                x[free_pos[j]] = idx[j]
                break
            idx[j] = free_start[j]
            x[free_pos[j]] = idx[j]
            j -= 1
        if j < 0:
            return count


def count_stratum_direct(p, nvars, fixed, free_pos, free_start, gens):
    """Stratum counter for primes too large to tabulate: ints mod p.

    gens is a list of term lists [(exps, coeff_int), ...].
    """
    x = list(fixed)
    k = len(free_pos)
    count = 0

    def zero_here():
        for terms in gens:
            acc = 0
            for exps, c in terms:
                v = c
                for i, e in enumerate(exps):
                    if e:
                        v = v * pow(x[i], e, p) % p
                        if v == 0:
                            break
                acc = (acc + v) % p
            if acc:
                return False
        return True

    if k == 0:
        return 1 if zero_here() else 0

    idx = [free_start[j] for j in range(k)]
    for j in range(k):
        x[free_pos[j]] = idx[j]
    while True:
        if zero_here():
            count += 1
        j = k - 1
        while j >= 0:
            idx[j] += 1
            if idx[j] < p:
                x[free_pos[j]] = idx[j]
                break
            idx[j] = free_start[j]
            x[free_pos[j]] = idx[j]
            j -= 1
        if j < 0:
            return count
