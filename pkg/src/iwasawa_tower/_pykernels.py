"""Pure-Python versions of the compiled kernels, used when the extension is absent."""


def rank_mod_p(a, p):
    # Rows as sparse dicts: level matrices are mostly zeros.
    rows = []
    for row in a:
        d = {j: int(v) % p for j, v in enumerate(row) if int(v) % p}
        if d:
            rows.append(d)
    pivots = {}  # column -> normalized row
    rank = 0
    for row in rows:
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                inv = pow(row[c], p - 2, p)
                pivots[c] = {j: v * inv % p for j, v in row.items()}
                rank += 1
                break
            f = row[c]
            for j, v in prow.items():
                w = (row.get(j, 0) - f * v) % p
                if w:
                    row[j] = w
                else:
                    row.pop(j, None)
    return rank


def series_mul_mod(a, b, D, modulus):
    out = [0] * D
    na, nb = min(len(a), D), min(len(b), D)
    for i in range(na):
        x = a[i]
        if not x:
            continue
        for j in range(min(nb, D - i)):
            out[i + j] += x * b[j]
    return [c % modulus for c in out]
