"""Compiled summary-mode runner for ordered ascents on arity-<=2 instances.

The exponential-length runs only need the step count, flags, and the final
assignment, so the hot loop runs as a numba kernel over int64 arrays.  The
caller guarantees that the instance's worst-case fitness magnitude fits well
inside int64; the wrapper in `ascent` re-checks the final fitness against the
exact evaluator after every run.
"""

from __future__ import annotations

from typing import Sequence

try:
    import numpy as np
    from numba import njit

    AVAILABLE = True
except Exception:  # pragma: no cover - numba is a hard dependency in practice
    AVAILABLE = False


if AVAILABLE:

    @njit(cache=False)
    def _kernel(x, sb, tgt_off, tgt, un_val, inc_off, inc_other, inc_tab, inc_cols, tab_pool, order, back, step_limit):
        n = x.shape[0]
        steps = 0
        ambiguous = 0
        total = np.int64(0)
        p = 0
        terminal = True
        while p < n:
            k = order[p]
            s = x[k]
            row = sb[k] + s
            best_gain = np.int64(0)
            best_t = -1
            improving = 0
            for ti in range(tgt_off[row], tgt_off[row + 1]):
                t = tgt[ti]
                g = un_val[sb[k] + t] - un_val[row]
                for e in range(inc_off[k], inc_off[k + 1]):
                    o = inc_other[e]
                    base = inc_tab[e]
                    c = inc_cols[e]
                    xo = x[o]
                    g += tab_pool[base + t * c + xo] - tab_pool[base + s * c + xo]
                if g > 0:
                    improving += 1
                    if g > best_gain:
                        best_gain = g
                        best_t = t
            if best_t < 0:
                p += 1
                continue
            if steps == step_limit:
                terminal = False
                break
            x[k] = best_t
            steps += 1
            total += best_gain
            if improving > 1:
                ambiguous += 1
            p = back[k]
        return steps, terminal, ambiguous, total


def _pack(instance) -> tuple:
    sizes = instance.sizes
    n = instance.n_vars
    sb = np.zeros(n + 1, dtype=np.int64)
    for k in range(n):
        sb[k + 1] = sb[k] + sizes[k]
    total_states = int(sb[n])

    un_val = np.zeros(total_states, dtype=np.int64)
    incident: list[list[tuple[int, list[int], int]]] = [[] for _ in range(n)]
    pool: list[int] = []
    for c in instance.constraints:
        if c.arity == 1:
            (a,) = c.scope
            for s in range(sizes[a]):
                un_val[sb[a] + s] += c.values[s]
        else:
            a, b = c.scope
            table_ab = list(c.values)  # [s_a][s_b], stride sizes[b]
            table_ba = [
                c.values[sa * sizes[b] + sbi]
                for sbi in range(sizes[b])
                for sa in range(sizes[a])
            ]
            incident[a].append((b, table_ab, sizes[b]))
            incident[b].append((a, table_ba, sizes[a]))

    inc_off = np.zeros(n + 1, dtype=np.int64)
    inc_other_l: list[int] = []
    inc_tab_l: list[int] = []
    inc_cols_l: list[int] = []
    for k in range(n):
        for other, table, cols in incident[k]:
            inc_other_l.append(other)
            inc_tab_l.append(len(pool))
            inc_cols_l.append(cols)
            pool.extend(table)
        inc_off[k + 1] = len(inc_other_l)

    tgt_off = np.zeros(total_states + 1, dtype=np.int64)
    tgt_l: list[int] = []
    for k in range(n):
        for s in range(sizes[k]):
            for t in instance.domains[k].adjacent(s):
                tgt_l.append(t)
            tgt_off[sb[k] + s + 1] = len(tgt_l)

    def arr(data, dtype=np.int64):
        return np.asarray(data, dtype=dtype) if data else np.zeros(0, dtype=dtype)

    return (
        sb,
        tgt_off,
        arr(tgt_l),
        un_val,
        inc_off,
        arr(inc_other_l),
        arr(inc_tab_l),
        arr(inc_cols_l),
        arr(pool),
    )


def run_ordered(
    instance,
    start: Sequence[int],
    order: Sequence[int],
    back: Sequence[int],
    step_limit: int,
) -> tuple[int, bool, int, tuple[int, ...], int]:
    """Run the compiled ordered ascent; returns
    (steps, terminal, ambiguous_steps, final_assignment, total_gain)."""
    packed = _pack(instance)
    x = np.asarray(list(start), dtype=np.int64)
    steps, terminal, ambiguous, total = _kernel(
        x,
        *packed,
        np.asarray(list(order), dtype=np.int64),
        np.asarray(list(back), dtype=np.int64),
        np.int64(step_limit),
    )
    return int(steps), bool(terminal), int(ambiguous), tuple(int(v) for v in x), int(total)
