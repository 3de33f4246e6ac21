"""Pure-Python word kernels (reference implementation and fallback).

Words are bitmasks over letters ``0..N-1``; the letters of a word are read in
increasing order.  Term dictionaries map word -> coefficient, where the
coefficient is any object supporting ``+``, ``*``, unary ``-`` and truth
testing (zero coefficients are dropped from every result).
"""

__all__ = ["merge_sign", "wedge_terms", "antiderivation_terms", "substitute_terms"]


def merge_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenation ``a`` then ``b``; 0 if they share a letter."""
    if a & b:
        return 0
    swaps = 0
    while b:
        low = b & -b
        # letters of a strictly above this letter of b must hop over it
        swaps += bin(a & ~((low << 1) - 1)).count("1")
        b ^= low
    return -1 if swaps & 1 else 1


def _accumulate(out: dict, word: int, coef) -> None:
    prev = out.get(word)
    out[word] = coef if prev is None else prev + coef


def _prune(out: dict) -> dict:
    return {w: c for w, c in out.items() if c}


def wedge_terms(a: dict, b: dict) -> dict:
    out: dict = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            if wa & wb:
                continue
            s = merge_sign(wa, wb)
            c = ca * cb
            _accumulate(out, wa | wb, c if s > 0 else -c)
    return _prune(out)


def antiderivation_terms(terms: dict, images: list) -> dict:
    """Apply the graded derivation with ``letter -> images[letter]`` (odd degree 1).

    Each letter image must be homogeneous of degree 2 (the only case needed
    for a differential on 1-forms).
    """
    out: dict = {}
    for word, coef in terms.items():
        pos = 0
        rest = word
        while rest:
            low = rest & -rest
            rest ^= low
            letter = low.bit_length() - 1
            image = images[letter]
            if image:
                below = word & (low - 1)
                above = word & ~((low << 1) - 1)
                outer = -1 if pos & 1 else 1
                for wi, ci in image.items():
                    if wi & (below | above):
                        continue
                    s = outer * merge_sign(below, wi) * merge_sign(below | wi, above)
                    c = coef * ci
                    _accumulate(out, below | wi | above, c if s > 0 else -c)
            pos += 1
    return _prune(out)


def substitute_terms(terms: dict, images: list) -> dict:
    """Pull a form back along ``letter -> images[letter]`` (each image a 1-form)."""
    out: dict = {}
    for word, coef in terms.items():
        acc = {0: coef}
        rest = word
        while rest:
            low = rest & -rest
            rest ^= low
            acc = wedge_terms(acc, images[low.bit_length() - 1])
            if not acc:
                break
        for w, c in acc.items():
            _accumulate(out, w, c)
    return _prune(out)
