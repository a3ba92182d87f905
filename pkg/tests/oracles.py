"""Independent reference implementations used as test oracles.

Nothing here imports conepda: each oracle recomputes its answer from the
definition of the group or graph directly.
"""

from itertools import product


def inv(x):
    return x[:-1] if x.endswith("^") else x + "^"


def reduce_free(w):
    out = []
    for x in w:
        if out and out[-1] == inv(x):
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_free_identity(w):
    return not reduce_free(w)


def exponent_sum(w, letter="a"):
    return sum(1 for x in w if x == letter) - sum(1 for x in w if x == letter + "^")


def all_words(letters, max_len):
    for n in range(max_len + 1):
        yield from product(letters, repeat=n)


def comb_walk(w, start=(0, 0)):
    k, l = start
    for x in w:
        if x == "b":
            l += 1
        elif x == "b^":
            l -= 1
        elif l == 0:
            k += 1 if x == "a" else -1
    return (k, l)


def lattice_walk(w):
    dx = {"a": (1, 0), "a^": (-1, 0), "b": (0, 1), "b^": (0, -1)}
    x = y = 0
    for c in w:
        x += dx[c][0]
        y += dx[c][1]
    return (x, y)


def in_quadratic_w(k):
    # W = {j(|j|+1)}: 0, 2, 6, 12, ... and -2, -6, -12, ...
    j = 0
    while j * (j + 1) <= abs(k):
        if j * (j + 1) == abs(k):
            return True
        j += 1
    return False


def xw_walk(w, member=in_quadratic_w):
    k, s = 0, 0
    for x in w:
        if x == "a":
            k += 1
        elif x == "a^":
            k -= 1
        elif x == "b":
            if member(k):
                s = 1 - s
            k += 1
        else:
            k -= 1
            if member(k):
                s = 1 - s
    return (k, s)


def dihedral_identity(w):
    st = []
    for x in w:
        if st and st[-1] == x:
            st.pop()
        else:
            st.append(x)
    return not st
