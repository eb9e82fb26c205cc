"""Words in a free group: tuples of nonzero signed generator indices (1-based)."""

from __future__ import annotations

Word = tuple


def reduce_word(letters) -> Word:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words) -> Word:
    out: list[int] = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def power(w, k: int) -> Word:
    if k < 0:
        w, k = inverse(w), -k
    return multiply(*([w] * k))


def cyclic_reduce(w) -> Word:
    w = list(reduce_word(w))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def substitute(w, images) -> Word:
    """Image of ``w`` under the homomorphism sending generator ``i`` to ``images[i-1]``."""
    out: list[int] = []
    for x in w:
        img = images[x - 1] if x > 0 else inverse(images[-x - 1])
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def format_word(w, names=None) -> str:
    if not w:
        return "<identity>"
    parts = []
    for x in w:
        name = names[abs(x) - 1] if names else f"f{abs(x)}"
        parts.append(name if x > 0 else name + "^-1")
    return "*".join(parts)
