"""Hot loops: suffix array, LCP, all-k common substrings, affine-gap DP.

Every kernel works on int64 code arrays.  With numba available the loop
kernels are compiled; otherwise they run as plain Python and the suffix
array switches to a vectorised prefix-doubling over numpy.
"""

import numpy as np

from ._accel import USE_NUMBA, jit

NEG_INF = -(1 << 60)

# traceback states
_DIAG = 0
_GAP_A = 1  # consumes a character of ``a``, gap in ``b``
_GAP_B = 2  # consumes a character of ``b``, gap in ``a``


@jit
def _suffix_array_loops(text):
    n = text.shape[0]
    sa = np.argsort(text, kind="mergesort")
    rank = np.empty(n, np.int64)
    rank[sa[0]] = 0
    for i in range(1, n):
        rank[sa[i]] = rank[sa[i - 1]] + (1 if text[sa[i]] != text[sa[i - 1]] else 0)
    key = np.empty(n, np.int64)
    k = 1
    while rank[sa[n - 1]] < n - 1 and k < n:
        for i in range(n):
            second = rank[i + k] + 1 if i + k < n else 0
            key[i] = rank[i] * (n + 1) + second
        sa = np.argsort(key, kind="mergesort")
        new_rank = np.empty(n, np.int64)
        new_rank[sa[0]] = 0
        for i in range(1, n):
            new_rank[sa[i]] = new_rank[sa[i - 1]] + (1 if key[sa[i]] != key[sa[i - 1]] else 0)
        rank = new_rank
        k *= 2
    return sa


def _suffix_array_numpy(text):
    n = text.shape[0]
    _, rank = np.unique(text, return_inverse=True)
    rank = rank.astype(np.int64).ravel()
    sa = np.argsort(rank, kind="stable")
    k = 1
    while rank.max() < n - 1 and k < n:
        second = np.zeros(n, dtype=np.int64)
        second[: n - k] = rank[k:] + 1
        sa = np.lexsort((second, rank))
        r, s = rank[sa], second[sa]
        step = (r[1:] != r[:-1]) | (s[1:] != s[:-1])
        rank = np.empty(n, dtype=np.int64)
        rank[sa] = np.concatenate(([0], np.cumsum(step)))
        k *= 2
    return sa.astype(np.int64)


def suffix_array(text):
    """Suffix array of an int64 code array (prefix doubling)."""
    text = np.ascontiguousarray(text, dtype=np.int64)
    if text.shape[0] == 0:
        return np.empty(0, dtype=np.int64)
    if USE_NUMBA:
        return _suffix_array_loops(text)
    return _suffix_array_numpy(text)


@jit
def lcp_array(text, sa):
    """Kasai LCP: ``lcp[i]`` = common prefix of suffixes ``sa[i-1]`` and ``sa[i]``."""
    n = text.shape[0]
    rank = np.empty(n, np.int64)
    for i in range(n):
        rank[sa[i]] = i
    lcp = np.zeros(n, np.int64)
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sa[r - 1]
        while i + h < n and j + h < n and text[i + h] == text[j + h]:
            h += 1
        lcp[r] = h
        if h > 0:
            h -= 1
    return lcp


@jit
def best_common_per_count(sa, lcp, doc_of, n_docs):
    """Deepest lcp-interval for every distinct-document count.

    Walks the lcp-interval tree bottom-up, counting distinct documents per
    interval with the previous-occurrence/LCA correction.  Returns
    ``(length, lb, rb)`` arrays indexed by k where entry k describes the
    longest string occurring in at least k documents (ties resolved to the
    smallest ``lb``, i.e. the lexicographically smallest string).  Length
    0 means only the empty string qualifies.
    """
    n = sa.shape[0]
    best_len = np.zeros(n_docs + 2, np.int64)
    best_lb = np.full(n_docs + 2, -1, np.int64)
    best_rb = np.full(n_docs + 2, -1, np.int64)

    st_lcp = np.empty(n + 1, np.int64)
    st_lb = np.empty(n + 1, np.int64)
    st_corr = np.empty(n + 1, np.int64)
    top = 0
    st_lcp[0] = 0
    st_lb[0] = 0
    st_corr[0] = 0

    last = np.full(n_docs, -1, np.int64)
    if n > 0:
        last[doc_of[sa[0]]] = 0

    for i in range(1, n + 1):
        cur = lcp[i] if i < n else 0
        lb = i - 1
        carried = 0
        while st_lcp[top] > cur:
            depth = st_lcp[top]
            node_lb = st_lb[top]
            corr = st_corr[top]
            top -= 1
            distinct = (i - node_lb) + corr
            if depth > best_len[distinct] or (
                depth == best_len[distinct] and node_lb < best_lb[distinct]
            ):
                best_len[distinct] = depth
                best_lb[distinct] = node_lb
                best_rb[distinct] = i - 1
            lb = node_lb
            if st_lcp[top] >= cur:
                st_corr[top] += corr
            else:
                carried += corr
        if st_lcp[top] < cur:
            top += 1
            st_lcp[top] = cur
            st_lb[top] = lb
            st_corr[top] = carried
        if i == n:
            break
        d = doc_of[sa[i]]
        p = last[d]
        if p >= 0:
            # deepest open interval starting at or before p is LCA(p, i)
            lo = 0
            hi = top
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if st_lb[mid] <= p:
                    lo = mid
                else:
                    hi = mid - 1
            if lo > 0:
                st_corr[lo] -= 1
        last[d] = i

    for k in range(n_docs - 1, -1, -1):
        if best_len[k + 1] > best_len[k] or (
            best_len[k + 1] == best_len[k]
            and best_lb[k + 1] >= 0
            and (best_lb[k] < 0 or best_lb[k + 1] < best_lb[k])
        ):
            best_len[k] = best_len[k + 1]
            best_lb[k] = best_lb[k + 1]
            best_rb[k] = best_rb[k + 1]
    return best_len, best_lb, best_rb


@jit
def _better(s1, l1, s2, l2):
    return s1 > s2 or (s1 == s2 and l1 < l2)


@jit
def affine_align(a, b, match, mismatch, open_gap, extend_gap):
    """Global alignment, gap run of g = open + (g - 1) * extend.

    Maximises the score; among optimal alignments picks the shortest, then
    prefers diagonal over gap states.  Returns
    ``(score, length, n_match, n_mismatch, n_open, n_extend)``.
    """
    n = a.shape[0]
    m = b.shape[0]
    score = np.full((3, n + 1, m + 1), NEG_INF, np.int64)
    length = np.zeros((3, n + 1, m + 1), np.int64)
    ptr = np.zeros((3, n + 1, m + 1), np.int8)

    score[_DIAG, 0, 0] = 0
    for i in range(1, n + 1):
        score[_GAP_A, i, 0] = open_gap + (i - 1) * extend_gap
        length[_GAP_A, i, 0] = i
        ptr[_GAP_A, i, 0] = _DIAG if i == 1 else _GAP_A
    for j in range(1, m + 1):
        score[_GAP_B, 0, j] = open_gap + (j - 1) * extend_gap
        length[_GAP_B, 0, j] = j
        ptr[_GAP_B, 0, j] = _DIAG if j == 1 else _GAP_B

    for i in range(1, n + 1):
        ai = a[i - 1]
        for j in range(1, m + 1):
            sub = match if ai == b[j - 1] else mismatch

            # diagonal
            bs = NEG_INF
            bl = 0
            bp = 0
            for s in range(3):
                v = score[s, i - 1, j - 1]
                if v == NEG_INF:
                    continue
                if bs == NEG_INF or _better(v, length[s, i - 1, j - 1], bs, bl):
                    bs = v
                    bl = length[s, i - 1, j - 1]
                    bp = s
            if bs != NEG_INF:
                score[_DIAG, i, j] = bs + sub
                length[_DIAG, i, j] = bl + 1
                ptr[_DIAG, i, j] = bp

            # gap in b (consume a[i-1])
            bs = NEG_INF
            bl = 0
            bp = 0
            for s in range(3):
                v = score[s, i - 1, j]
                if v == NEG_INF:
                    continue
                v = v + (extend_gap if s == _GAP_A else open_gap)
                if bs == NEG_INF or _better(v, length[s, i - 1, j], bs, bl):
                    bs = v
                    bl = length[s, i - 1, j]
                    bp = s
            if bs != NEG_INF:
                score[_GAP_A, i, j] = bs
                length[_GAP_A, i, j] = bl + 1
                ptr[_GAP_A, i, j] = bp

            # gap in a (consume b[j-1])
            bs = NEG_INF
            bl = 0
            bp = 0
            for s in range(3):
                v = score[s, i, j - 1]
                if v == NEG_INF:
                    continue
                v = v + (extend_gap if s == _GAP_B else open_gap)
                if bs == NEG_INF or _better(v, length[s, i, j - 1], bs, bl):
                    bs = v
                    bl = length[s, i, j - 1]
                    bp = s
            if bs != NEG_INF:
                score[_GAP_B, i, j] = bs
                length[_GAP_B, i, j] = bl + 1
                ptr[_GAP_B, i, j] = bp

    state = -1
    for s in range(3):
        v = score[s, n, m]
        if v == NEG_INF:
            continue
        if state < 0 or _better(v, length[s, n, m], score[state, n, m], length[state, n, m]):
            state = s
    best = score[state, n, m]
    total = length[state, n, m]

    n_match = 0
    n_mismatch = 0
    n_open = 0
    n_extend = 0
    i = n
    j = m
    while i > 0 or j > 0:
        prev = ptr[state, i, j]
        if state == _DIAG:
            if a[i - 1] == b[j - 1]:
                n_match += 1
            else:
                n_mismatch += 1
            i -= 1
            j -= 1
        elif state == _GAP_A:
            if prev == _GAP_A:
                n_extend += 1
            else:
                n_open += 1
            i -= 1
        else:
            if prev == _GAP_B:
                n_extend += 1
            else:
                n_open += 1
            j -= 1
        state = prev
    return best, total, n_match, n_mismatch, n_open, n_extend


@jit
def edit_distance(a, b):
    """Unit-cost Levenshtein distance, two-row DP."""
    n = a.shape[0]
    m = b.shape[0]
    prev = np.arange(m + 1).astype(np.int64)
    cur = np.empty(m + 1, np.int64)
    for i in range(1, n + 1):
        cur[0] = i
        for j in range(1, m + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            v = prev[j - 1] + cost
            if prev[j] + 1 < v:
                v = prev[j] + 1
            if cur[j - 1] + 1 < v:
                v = cur[j - 1] + 1
            cur[j] = v
        prev, cur = cur, prev
    return prev[m]
