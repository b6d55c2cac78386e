"""Built-in groups.

picard: PSL_2(Z[i]) generated by z -> z+1, z -> z+i and z -> -1/z.  Over a
Euclidean ring SL_2 is generated by elementary matrices, and these three
generate all of them.

figure8: the two-generator group <[[1,1],[0,1]], [[1,0],[-w,1]]> in
PSL_2(O_3), w = (1+sqrt(-3))/2, the holonomy of the figure-eight knot
complement (index 12 in the Bianchi group).

Covolumes are literature values used only as inputs to volume claims.
"""

from __future__ import annotations

from .matgroup import GroupContext, Mat2
from .quadfield import FieldSpec

PICARD_COVOLUME = 0.30532
FIGURE8_COVOLUME = 2.02988

# (field d, generator entry lists, covolume); entries are ints or (x, y) = x + y w
PRESETS = {
    "picard": (1, [
        [[1, 1], [0, 1]],
        [[1, (0, 1)], [0, 1]],
        [[0, -1], [1, 0]],
    ], PICARD_COVOLUME),
    "figure8": (3, [
        [[1, 1], [0, 1]],
        [[1, 0], [(0, -1), 1]],
    ], FIGURE8_COVOLUME),
}


def preset_generators(name: str) -> tuple[FieldSpec, list[Mat2]]:
    try:
        d, mats, _ = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    K = FieldSpec(d)
    return K, [Mat2.from_lists(m, K) for m in mats]


def preset_covolume(name: str) -> float:
    return PRESETS[name][2]


def preset(name: str, **kwargs) -> GroupContext:
    K, gens = preset_generators(name)
    return GroupContext(K, tuple(gens), name=name, **kwargs)


def picard(**kwargs) -> GroupContext:
    return preset("picard", **kwargs)


def figure8(**kwargs) -> GroupContext:
    return preset("figure8", **kwargs)
