# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled word kernels; same contract as ``_kernels_py``."""

cdef extern from * nogil:
    int __builtin_popcountll(unsigned long long)
    int __builtin_clzll(unsigned long long)


cdef inline int _merge_sign(unsigned long long a, unsigned long long b) nogil:
    cdef unsigned long long low
    cdef int swaps = 0
    if a & b:
        return 0
    while b:
        low = b & (~b + 1)
        swaps += __builtin_popcountll(a & ~((low << 1) - 1))
        b ^= low
    return -1 if swaps & 1 else 1


def merge_sign(a, b):
    return _merge_sign(<unsigned long long>a, <unsigned long long>b)


cdef dict _prune(dict out):
    return {w: c for w, c in out.items() if c}


def wedge_terms(dict a, dict b):
    cdef dict out = {}
    cdef unsigned long long wa, wb
    cdef int s
    # keys stay Python ints; reboxing a C word on every dict access costs more than it saves
    for pa, ca in a.items():
        wa = pa
        for pb, cb in b.items():
            wb = pb
            if wa & wb:
                continue
            s = _merge_sign(wa, wb)
            c = ca * cb
            if s < 0:
                c = -c
            key = pa | pb
            prev = out.get(key)
            out[key] = c if prev is None else prev + c
    return _prune(out)


def antiderivation_terms(dict terms, list images):
    cdef dict out = {}
    cdef dict image
    cdef unsigned long long word, rest, low, below, above, wi, key
    cdef int pos, s, outer, letter
    for pw, coef in terms.items():
        word = pw
        pos = 0
        rest = word
        while rest:
            low = rest & (~rest + 1)
            rest ^= low
            letter = 63 - __builtin_clzll(low)
            image = images[letter]
            if image:
                below = word & (low - 1)
                above = word & ~((low << 1) - 1)
                outer = -1 if pos & 1 else 1
                for pi, ci in image.items():
                    wi = pi
                    if wi & (below | above):
                        continue
                    s = outer * _merge_sign(below, wi) * _merge_sign(below | wi, above)
                    c = coef * ci
                    if s < 0:
                        c = -c
                    key = below | wi | above
                    prev = out.get(key)
                    out[key] = c if prev is None else prev + c
            pos += 1
    return _prune(out)


def substitute_terms(dict terms, list images):
    cdef dict out = {}
    cdef dict acc
    cdef unsigned long long word, rest, low
    for pw, coef in terms.items():
        word = pw
        acc = {0: coef}
        rest = word
        while rest:
            low = rest & (~rest + 1)
            rest ^= low
            acc = wedge_terms(acc, images[63 - __builtin_clzll(low)])
            if not acc:
                break
        for w, c in acc.items():
            prev = out.get(w)
            out[w] = c if prev is None else prev + c
    return _prune(out)
