"""Sign kernel shared by the permutation sums in multilinear and cohomology."""


def graded_sign_bits(sigma, bits):
    """Sign of ``sigma`` where each inverted pair (a, b) contributes
    -(-1)^bits[a*n + b]."""
    n = len(sigma)
    s = 0
    for p in range(n):
        a = sigma[p]
        row = a * n
        for q in range(p + 1, n):
            b = sigma[q]
            if a > b:
                s += 1 + bits[row + b]
    return -1 if s & 1 else 1


def sign_table(perms, bits):
    return tuple([graded_sign_bits(sigma, bits) for sigma in perms])
