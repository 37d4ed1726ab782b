"""Compiled inner loops: grid build, neighbor queries, generation, delivery.

Everything here operates on plain numpy arrays so numba can compile it.
The public modules (`neighbors`, `traffic`) own the array layout and wrap
these functions; nothing in here is part of the package API.

Queues are singly linked lists threaded through a shared packet pool:
`q_head`/`q_tail` point at pool slots, `pool_next` chains them, and freed
slots are recycled through `free_stack`. Energy is tracked as the integer
number of hops a node has paid for (`spent`), so the ledger stays exact.
"""

import numpy as np
from numba import njit

# Relative floor applied to a neighbor's distance-to-destination before the
# routing weight is formed; avoids division by zero for co-located nodes.
DISTANCE_FLOOR_REL = 1e-9


@njit(cache=True, nogil=True)
def _tor_dist(ax, ay, bx, by, area_side):
    dx = abs(ax - bx)
    if dx > area_side - dx:
        dx = area_side - dx
    dy = abs(ay - by)
    if dy > area_side - dy:
        dy = area_side - dy
    return np.sqrt(dx * dx + dy * dy)


@njit(cache=True, nogil=True)
def build_grid(x, y, cells_per_side, cell_side, cell_of, bucket_start, bucket_items):
    """Counting-sort nodes into grid cells. Arrays are caller-allocated."""
    n = x.shape[0]
    nc = cells_per_side
    ncells = nc * nc
    for c in range(ncells + 1):
        bucket_start[c] = 0
    for i in range(n):
        cx = int(x[i] / cell_side)
        if cx >= nc:
            cx = nc - 1
        cy = int(y[i] / cell_side)
        if cy >= nc:
            cy = nc - 1
        c = cx * nc + cy
        cell_of[i] = c
        bucket_start[c + 1] += 1
    for c in range(ncells):
        bucket_start[c + 1] += bucket_start[c]
    cursor = bucket_start[:ncells].copy()
    for i in range(n):
        c = cell_of[i]
        bucket_items[cursor[c]] = i
        cursor[c] += 1


@njit(cache=True, nogil=True)
def neighbors_into(
    x, y, node, area_side, radius,
    cells_per_side, cell_side, bucket_start, bucket_items,
    out,
):
    """Fill `out` with ids within `radius` of `node` (inclusive, excluding self).

    Returns the neighbor count. With fewer than 3 cells per side the 3x3
    neighborhood cannot tile the torus without duplicates, so the caller
    builds the index in fallback mode (cells_per_side < 3) and this scans
    all nodes instead.
    """
    n = x.shape[0]
    px = x[node]
    py = y[node]
    count = 0
    if cells_per_side < 3:
        for j in range(n):
            if j == node:
                continue
            if _tor_dist(px, py, x[j], y[j], area_side) <= radius:
                out[count] = j
                count += 1
        return count
    nc = cells_per_side
    cx = int(px / cell_side)
    if cx >= nc:
        cx = nc - 1
    cy = int(py / cell_side)
    if cy >= nc:
        cy = nc - 1
    for ox in range(-1, 2):
        gx = (cx + ox) % nc
        for oy in range(-1, 2):
            gy = (cy + oy) % nc
            c = gx * nc + gy
            for k in range(bucket_start[c], bucket_start[c + 1]):
                j = bucket_items[k]
                if j == node:
                    continue
                if _tor_dist(px, py, x[j], y[j], area_side) <= radius:
                    out[count] = j
                    count += 1
    return count


@njit(cache=True, nogil=True)
def generate_kernel(
    n_nodes, whole_rate, frac_rate, now, next_pid,
    pool_dst, pool_src, pool_born, pool_hops, pool_pid, pool_next,
    q_head, q_tail, q_len, free_stack, free_top,
    gen,
):
    """Append per-node packets: floor(rate) each plus a Bernoulli remainder.

    Destinations are uniform over the other n-1 nodes. Returns
    (total_generated, next_pid, free_top).
    """
    total = 0
    pid = next_pid
    ft = free_top
    for i in range(n_nodes):
        k = whole_rate
        if frac_rate > 0.0 and gen.random() < frac_rate:
            k += 1
        for _ in range(k):
            d = int(gen.random() * (n_nodes - 1))
            if d >= n_nodes - 1:
                d = n_nodes - 2
            if d >= i:
                d += 1
            ft -= 1
            slot = free_stack[ft]
            pool_dst[slot] = d
            pool_src[slot] = i
            pool_born[slot] = now
            pool_hops[slot] = 0
            pool_pid[slot] = pid
            pool_next[slot] = -1
            pid += 1
            if q_len[i] == 0:
                q_head[i] = slot
            else:
                pool_next[q_tail[i]] = slot
            q_tail[i] = slot
            q_len[i] += 1
            total += 1
    return total, pid, ft


@njit(cache=True, nogil=True)
def deliver_kernel(
    x, y, area_side, radius, alpha, capacity,
    init_energy, hop_cost, hop_budget, spent,
    pool_dst, pool_hops, pool_next,
    q_head, q_tail, q_len, free_stack, free_top,
    cells_per_side, cell_side, bucket_start, bucket_items,
    order_buf, nbr_buf, nbr_mask,
    arrived_hops,
    gen,
):
    """One delivery phase over all nodes in a fresh random order.

    Each node pays one hop_cost per packet it moves, up to
    min(capacity, hops it can still afford). A packet whose destination is
    currently within radius is removed (its hop count goes to
    `arrived_hops`); otherwise it joins the tail of the neighbor scoring
    the highest routing weight energy^(1-alpha) / distance^alpha, with
    energies read as they stand at that moment within the phase. Ties keep
    the first neighbor in scan order.

    Returns (forwarded, arrived, free_top).
    """
    n = x.shape[0]
    for i in range(n):
        order_buf[i] = i
    for i in range(n - 1, 0, -1):
        j = int(gen.random() * (i + 1))
        if j > i:
            j = i
        tmp = order_buf[i]
        order_buf[i] = order_buf[j]
        order_buf[j] = tmp

    floor2 = (DISTANCE_FLOOR_REL * area_side) ** 2
    half = 0.5 * area_side
    forwarded = 0
    arrived = 0
    ft = free_top

    for oi in range(n):
        s = order_buf[oi]
        if q_len[s] == 0:
            continue
        budget = hop_budget - spent[s]
        if budget > capacity:
            budget = capacity
        if budget <= 0:
            continue
        k = neighbors_into(
            x, y, s, area_side, radius,
            cells_per_side, cell_side, bucket_start, bucket_items,
            nbr_buf,
        )
        if k == 0:
            continue  # no neighbors: packets wait, no energy is spent
        for m in range(k):
            nbr_mask[nbr_buf[m]] = 1

        served = 0
        while served < budget and q_len[s] > 0:
            slot = q_head[s]
            q_head[s] = pool_next[slot]
            q_len[s] -= 1
            if q_len[s] == 0:
                q_head[s] = -1
                q_tail[s] = -1
            dst = pool_dst[slot]
            if nbr_mask[dst] == 1:
                arrived_hops[arrived] = pool_hops[slot] + 1
                arrived += 1
                free_stack[ft] = slot
                ft += 1
            else:
                dx = x[dst]
                dy = y[dst]
                pick = nbr_buf[0]
                best = -np.inf
                for m in range(k):
                    j = nbr_buf[m]
                    ddx = abs(x[j] - dx)
                    if ddx > half:
                        ddx = area_side - ddx
                    ddy = abs(y[j] - dy)
                    if ddy > half:
                        ddy = area_side - ddy
                    d2 = ddx * ddx + ddy * ddy
                    if d2 < floor2:
                        d2 = floor2
                    e = init_energy - spent[j] * hop_cost
                    # ranking surrogates: monotone in E^(1-a) * l^(-a), sqrt-free
                    if alpha == 0.5:
                        w = e * e / d2
                    elif alpha == 0.0:
                        w = e
                    elif alpha == 1.0:
                        w = 1.0 / d2
                    else:
                        w = (1.0 - alpha) * np.log(e) - 0.5 * alpha * np.log(d2)
                    if w > best:
                        best = w
                        pick = j
                pool_hops[slot] += 1
                pool_next[slot] = -1
                if q_len[pick] == 0:
                    q_head[pick] = slot
                else:
                    pool_next[q_tail[pick]] = slot
                q_tail[pick] = slot
                q_len[pick] += 1
            spent[s] += 1
            forwarded += 1
            served += 1

        for m in range(k):
            nbr_mask[nbr_buf[m]] = 0

    return forwarded, arrived, ft
