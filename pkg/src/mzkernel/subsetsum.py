"""Search for a nonempty subset of live gamma columns summing to zero.

The decision procedure reduces to: does some nonempty set T of live
columns satisfy sum_{j in T} gamma[i][j] = 0 for every row i?  The
search works on integer "lanes":

* finite coefficient fields contribute one lane per (row, digit) pair
  with modulus p, where lane zero-sums are exact field zero-sums (base-p
  digit addition carries nothing);
* cyclotomic fields contribute one lane per row under a reduction
  zeta_e -> w modulo a large prime P = 1 (mod e), so a lane zero is only
  necessary; modular hits are verified in exact arithmetic, and failed
  verification stacks lanes from further primes until settled.

Witness order: among all hits, the reported subset minimizes first the
cardinality, then the sorted column sequence lexicographically.  Both
orders embed into the single integer key
    key(mask) = (popcount(mask) << t) | (all_ones - bitrev(mask, t)),
so every scan strategy just minimizes that key, which keeps the answer
identical across backends, thread counts and scan paths.

Three scan paths, chosen by the live column count t:
  t <= GRAY_PYTHON_MAX   plain python Gray-code walk (no warmup cost)
  t <= GRAY_MAX          exhaustive scan on the active backend
  beyond                 meet-in-the-middle on sorted half sums
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend as _backend
from .fields import CyclotomicField, factorize, is_prime

GRAY_PYTHON_MAX = 14
GRAY_MAX = 28
HIT_BUFFER_CAP = 64
EXACT_FALLBACK_MAX = 20     # largest t for the exact-walk last resort
MAX_FILTER_ATTEMPTS = 3
_PRIME_FLOOR = 1 << 60
_MITM_MAX_HALF_ELEMS = 1 << 27


class SearchError(RuntimeError):
    pass


@dataclass
class SubsetSearchResult:
    """Outcome of the zero-sum column search.

    columns are 0-based indices into the original gamma column list;
    modular_hits counts hits of the last modular filter (equal to the
    exact hit count when the lanes are exact, an upper bound otherwise).
    """

    found: bool
    columns: tuple | None
    mask: int
    modular_hits: int
    path: str
    primes: tuple = ()
    exact: bool = True


def mask_key(mask, t):
    """The witness-order key; smaller is better."""
    pc = mask.bit_count()
    rev = 0
    for b in range(t):
        if (mask >> b) & 1:
            rev |= 1 << (t - 1 - b)
    return (pc << t) | (((1 << t) - 1) - rev)


def _mask_to_columns(mask, live_columns):
    return tuple(live_columns[b] for b in range(len(live_columns)) if (mask >> b) & 1)


# ---------------------------------------------------------------------------
# lane construction

def _pick_filter_prime(e, denominators, skip):
    """Smallest prime P > 2^60 with P = 1 (mod e) and P coprime to every
    denominator, skipping the first `skip` qualifying primes."""
    m = _PRIME_FLOOR // e
    seen = 0
    while True:
        m += 1
        P = m * e + 1
        if not is_prime(P):
            continue
        if any(d % P == 0 for d in denominators):
            continue
        if seen == skip:
            return P
        seen += 1


def _root_mod_prime(e, P):
    """Element of exact multiplicative order e modulo P (needs e | P-1)."""
    if e == 1:
        return 1
    cof = (P - 1) // e
    checks = [e // ell for ell in factorize(e)]
    c = 2
    while True:
        w = pow(c, cof, P)
        if w != 1 and all(pow(w, t, P) != 1 for t in checks):
            return w
        c += 1


def _cyclo_lanes(field, entries, prime_skip):
    """One lane per gamma row: entries reduced modulo a filter prime.
    Returns (matrix, mods, prime)."""
    dens = {c.den for row in entries for c in row}
    P = _pick_filter_prime(field.e, dens, prime_skip)
    w = _root_mod_prime(field.e, P)
    wpow = [1] * field.e
    for s in range(1, field.e):
        wpow[s] = wpow[s - 1] * w % P
    rows = []
    for row in entries:
        lane = []
        for c in row:
            acc = 0
            for u, x in enumerate(c.num):
                if x:
                    acc += x * wpow[u]
            lane.append(acc * pow(c.den, -1, P) % P)
        rows.append(lane)
    mat = np.array(rows, dtype=np.int64)
    mods = np.full(len(rows), P, dtype=np.int64)
    return mat, mods, P


def _finite_lanes(field, entries):
    """One lane per (row, digit): base-p digits of each entry index.
    Lane zero-sums are exact zero-sums in GF(p^k)."""
    p, k = field.p, field.k
    rows = []
    for row in entries:
        digit_rows = [[] for _ in range(k)]
        for c in row:
            x = c.index
            for dig in range(k):
                digit_rows[dig].append(x % p)
                x //= p
        rows.extend(digit_rows)
    mat = np.array(rows, dtype=np.int64)
    mods = np.full(len(rows), p, dtype=np.int64)
    return mat, mods


# ---------------------------------------------------------------------------
# scan paths

def _gray_scan_python(cols, mods, cap):
    """Reference Gray-code walk; cols is a (lanes, t) int64 array."""
    lanes, t = cols.shape
    mods_l = [int(m) for m in mods]
    col_list = [[int(cols[ln, b]) for ln in range(lanes)] for b in range(t)]
    neg_list = [[(m - v) % m for v, m in zip(col, mods_l)] for col in col_list]
    run = [0] * lanes
    mask = 0
    count = 0
    best_key = None
    best_mask = -1
    buf = []
    total = 1 << t
    for i in range(1, total):
        b = (i & -i).bit_length() - 1
        mask ^= 1 << b
        src = col_list[b] if (mask >> b) & 1 else neg_list[b]
        for ln in range(lanes):
            v = run[ln] + src[ln]
            if v >= mods_l[ln]:
                v -= mods_l[ln]
            run[ln] = v
        if mask and not any(run):
            count += 1
            key = mask_key(mask, t)
            if best_key is None or key < best_key:
                best_key = key
                best_mask = mask
            if len(buf) < cap:
                buf.append(mask)
    return count, best_mask, buf


def _doubling_sums(cols, mods):
    """(2^tt, lanes) partial-sum table; row index is the subset mask."""
    lanes, tt = cols.shape
    out = np.zeros((1, lanes), dtype=np.int64)
    for b in range(tt):
        shifted = out + cols[:, b]
        np.subtract(shifted, mods, out=shifted, where=shifted >= mods)
        out = np.concatenate([out, shifted])
    return out


def _block_scan_numpy(cols, mods, cap):
    """Exhaustive scan in vectorized blocks: the low half of the mask is
    a precomputed table, the high half is looped."""
    lanes, t = cols.shape
    tl = min(t, 14)
    th = t - tl
    low = _doubling_sums(cols[:, :tl], mods)
    high = _doubling_sums(cols[:, tl:], mods)
    count = 0
    best_key = None
    best_mask = -1
    buf = []
    for h in range(1 << th):
        s = low + high[h]
        np.subtract(s, mods, out=s, where=s >= mods)
        zero = ~s.any(axis=1)
        if h == 0:
            zero[0] = False  # the empty subset is not a candidate
        hits = np.flatnonzero(zero)
        if hits.size == 0:
            continue
        count += int(hits.size)
        for ix in hits:
            mask = (h << tl) | int(ix)
            key = mask_key(mask, t)
            if best_key is None or key < best_key:
                best_key = key
                best_mask = mask
            if len(buf) < cap:
                buf.append(mask)
    return count, best_mask, buf


def _gray_scan_numba(cols, mods, cap, threads):
    from . import _kernels_numba as K

    lanes, t = cols.shape
    neg = (mods[:, None] - cols) % mods[:, None]
    total = 1 << t
    threads = max(1, threads)
    n_chunks = 1 if threads == 1 else min(threads * 4, max(1, total >> 14))
    bounds = [(total * c) // n_chunks for c in range(n_chunks + 1)]
    results = [None] * n_chunks
    bufs = [np.zeros(cap, dtype=np.int64) for _ in range(n_chunks)]

    def run(ci):
        out = K.gray_zero_scan(
            cols, neg, mods, np.int64(bounds[ci]), np.int64(bounds[ci + 1]), bufs[ci]
        )
        results[ci] = out

    if n_chunks == 1:
        run(0)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, range(n_chunks)))
    count = 0
    best_key = None
    best_mask = -1
    buf = []
    for ci in range(n_chunks):
        c_count, c_key, c_mask, c_buf = results[ci]
        count += int(c_count)
        if c_count and (best_key is None or c_key < best_key):
            best_key = int(c_key)
            best_mask = int(c_mask)
        if len(buf) < cap:
            buf.extend(int(x) for x in bufs[ci][: int(c_buf)])
    return count, best_mask, buf[:cap]


def _mitm_scan(cols, mods, cap):
    """Meet-in-the-middle over two half-column partial-sum tables.

    The witness key splits additively across the halves (popcounts add
    and the reversed-bit field concatenates), so the per-group minimum
    is min(key_a) + min(key_b) and no pair enumeration is needed to
    find the exact overall minimum.
    """
    lanes, t = cols.shape
    ta = t // 2
    tb = t - ta
    if (1 << max(ta, tb)) * lanes > _MITM_MAX_HALF_ELEMS:
        raise SearchError(
            f"zero-sum search over {t} live columns exceeds the tractable bound"
        )
    sums_a = _doubling_sums(cols[:, :ta], mods)
    sums_b = _doubling_sums(cols[:, ta:], mods)
    comp_b = (mods[None, :] - sums_b) % mods[None, :]
    na = 1 << ta
    nb = 1 << tb
    all_a = (1 << ta) - 1
    all_b = (1 << tb) - 1
    # key parts: ka = (pc_a << t) + ((all_a - rev_a) << tb), kb analogous
    pc_a = np.zeros(1, dtype=np.int64)
    rev_a = np.zeros(1, dtype=np.int64)
    for b in range(ta):
        pc_a = np.concatenate([pc_a, pc_a + 1])
        rev_a = np.concatenate([rev_a, rev_a | (1 << (ta - 1 - b))])
    pc_b = np.zeros(1, dtype=np.int64)
    rev_b = np.zeros(1, dtype=np.int64)
    for b in range(tb):
        pc_b = np.concatenate([pc_b, pc_b + 1])
        rev_b = np.concatenate([rev_b, rev_b | (1 << (tb - 1 - b))])
    ka = (pc_a << t) + ((all_a - rev_a) << tb)
    kb = (pc_b << t) + (all_b - rev_b)
    # group equal residue vectors by their raw row bytes
    stacked = np.ascontiguousarray(np.concatenate([sums_a, comp_b]))
    view = stacked.view(np.dtype((np.void, stacked.dtype.itemsize * lanes))).reshape(-1)
    _, inverse = np.unique(view, return_inverse=True)
    inverse = inverse.reshape(-1)
    la, lb = inverse[:na], inverse[na:]
    n_groups = int(inverse.max()) + 1
    ca = np.bincount(la, minlength=n_groups)
    cb = np.bincount(lb, minlength=n_groups)
    pair_count = int(np.dot(ca, cb)) - 1  # drop the empty|empty pair
    if pair_count == 0:
        return 0, -1, []
    big = np.int64(1) << 62
    min_ka = np.full(n_groups, big)
    np.minimum.at(min_ka, la, ka)
    min_kb = np.full(n_groups, big)
    np.minimum.at(min_kb, lb, kb)
    ka_x = ka.copy()
    ka_x[0] = big  # exclude the empty left half
    kb_x = kb.copy()
    kb_x[0] = big
    min_ka_x = np.full(n_groups, big)
    np.minimum.at(min_ka_x, la, ka_x)
    min_kb_x = np.full(n_groups, big)
    np.minimum.at(min_kb_x, lb, kb_x)
    gz = int(la[0])  # group of the all-zero residue vector
    # real keys stay below 2^59, so `big` safely marks groups without pairs
    group_best = np.where((ca > 0) & (cb > 0), min_ka + min_kb, big)
    # within the zero group the (empty, empty) pair is not a subset
    group_best[gz] = min(min_ka_x[gz] + min_kb[gz], min_ka[gz] + min_kb_x[gz])
    g_star = int(np.argmin(group_best))
    best_total = int(group_best[g_star])
    if best_total >= int(big):
        return 0, -1, []

    def pick(side_labels, side_keys, g, want):
        sel = np.flatnonzero((side_labels == g) & (side_keys == want))
        return int(sel[0])

    if g_star == gz:
        opt1 = int(min_ka_x[gz] + min_kb[gz])
        if opt1 == best_total:
            ia = pick(la, ka_x, gz, int(min_ka_x[gz]))
            ib = pick(lb, kb, gz, int(min_kb[gz]))
        else:
            ia = pick(la, ka, gz, int(min_ka[gz]))
            ib = pick(lb, kb_x, gz, int(min_kb_x[gz]))
    else:
        ia = pick(la, ka, g_star, int(min_ka[g_star]))
        ib = pick(lb, kb, g_star, int(min_kb[g_star]))
    best_mask = ia | (ib << ta)
    buf = []
    if pair_count <= cap:
        live_groups = np.flatnonzero((ca > 0) & (cb > 0))
        for g in live_groups:
            for i in np.flatnonzero(la == g):
                for j in np.flatnonzero(lb == g):
                    mask = int(i) | (int(j) << ta)
                    if mask:
                        buf.append(mask)
    return pair_count, best_mask, buf


# ---------------------------------------------------------------------------
# exact verification (cyclotomic lanes are only a necessary filter)

def _verify_mask_exact(entries, live_columns, mask):
    for row in entries:
        acc = None
        for b, col in enumerate(live_columns):
            if (mask >> b) & 1:
                acc = row[col] if acc is None else acc + row[col]
        if acc is None or not acc.is_zero():
            return False
    return True


def _exact_gray_walk(field, entries, live_columns):
    """Last-resort exact scan over integer coordinate vectors; only used
    when repeated modular filters stay inconclusive, which requires
    simultaneous collisions modulo several 60-bit primes."""
    t = len(live_columns)
    den = 1
    for row in entries:
        for col in live_columns:
            den = math.lcm(den, row[col].den)
    deg = field.degree
    vecs = []
    for b, col in enumerate(live_columns):
        v = []
        for row in entries:
            c = row[col]
            scale = den // c.den
            v.extend(x * scale for x in c.num)
        vecs.append(v)
    width = len(vecs[0])
    run = [0] * width
    mask = 0
    best = None
    for i in range(1, 1 << t):
        b = (i & -i).bit_length() - 1
        mask ^= 1 << b
        sign = 1 if (mask >> b) & 1 else -1
        col = vecs[b]
        for x in range(width):
            run[x] += sign * col[x]
        if mask and not any(run):
            key = mask_key(mask, t)
            if best is None or key < best[0]:
                best = (key, mask)
    return best


# ---------------------------------------------------------------------------
# entry point

def zero_sum_subset_search(gamma, live_columns, *, backend=None, threads=1,
                           prime_skip=0):
    """Find the minimal nonempty zero-sum subset of the live columns.

    gamma: a GammaMatrix; live_columns: 0-based column indices to search
    over.  Returns a SubsetSearchResult whose verdict is exact for both
    field kinds.
    """
    live_columns = tuple(live_columns)
    t = len(live_columns)
    field = gamma.field
    if t == 0:
        return SubsetSearchResult(False, None, 0, 0, "empty")
    if t > 62:
        raise SearchError(f"{t} live columns exceed the supported search width")
    entries = gamma.entries
    sub = [[row[c] for c in live_columns] for row in entries]
    cyclo = isinstance(field, CyclotomicField)

    primes = []
    if cyclo:
        mat, mods, P = _cyclo_lanes(field, sub, prime_skip)
        primes.append(P)
    else:
        mat, mods = _finite_lanes(field, sub)

    attempt = 0
    while True:
        count, best_mask, buf = _dispatch_scan(mat, mods, backend, threads)
        if count == 0:
            # modular hits form a superset of exact hits
            return SubsetSearchResult(
                False, None, 0, 0, _path_name(t), primes=tuple(primes)
            )
        if not cyclo:
            return SubsetSearchResult(
                True, _mask_to_columns(best_mask, live_columns), best_mask,
                count, _path_name(t), exact=True,
            )
        if _verify_mask_exact(entries, live_columns, best_mask):
            return SubsetSearchResult(
                True, _mask_to_columns(best_mask, live_columns), best_mask,
                count, _path_name(t), primes=tuple(primes), exact=True,
            )
        if count <= HIT_BUFFER_CAP:
            # the buffer holds every modular hit, hence every exact hit
            for mask in sorted(set(buf), key=lambda m: mask_key(m, t)):
                if _verify_mask_exact(entries, live_columns, mask):
                    return SubsetSearchResult(
                        True, _mask_to_columns(mask, live_columns), mask,
                        count, _path_name(t), primes=tuple(primes), exact=True,
                    )
            return SubsetSearchResult(
                False, None, 0, count, _path_name(t), primes=tuple(primes)
            )
        attempt += 1
        if attempt >= MAX_FILTER_ATTEMPTS:
            if t <= EXACT_FALLBACK_MAX:
                best = _exact_gray_walk(field, entries, live_columns)
                if best is None:
                    return SubsetSearchResult(
                        False, None, 0, count, "exact-walk", primes=tuple(primes)
                    )
                return SubsetSearchResult(
                    True, _mask_to_columns(best[1], live_columns), best[1],
                    count, "exact-walk", primes=tuple(primes), exact=True,
                )
            raise SearchError(
                "modular zero-sum filters stayed inconclusive; the instance "
                "defeats the configured prime stack"
            )
        # stack lanes from a fresh prime and rescan
        more_mat, more_mods, P = _cyclo_lanes(field, sub, prime_skip + attempt)
        primes.append(P)
        mat = np.concatenate([mat, more_mat])
        mods = np.concatenate([mods, more_mods])


def _path_name(t):
    if t <= GRAY_PYTHON_MAX:
        return "gray-python"
    if t <= GRAY_MAX:
        return "gray"
    return "mitm"


def _dispatch_scan(mat, mods, backend, threads):
    t = mat.shape[1]
    if t <= GRAY_PYTHON_MAX:
        return _gray_scan_python(mat, mods, HIT_BUFFER_CAP)
    if t <= GRAY_MAX:
        which = _backend.resolve_backend(backend)
        if which == "numba":
            return _gray_scan_numba(mat, mods, HIT_BUFFER_CAP, threads)
        return _block_scan_numpy(mat, mods, HIT_BUFFER_CAP)
    return _mitm_scan(mat, mods, HIT_BUFFER_CAP)
