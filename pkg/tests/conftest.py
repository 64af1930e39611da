from __future__ import annotations

from hypothesis import settings, strategies as st

from ordgraph.cones import (
    AbelianCone,
    BSCtCone,
    BSQCone,
    FreeCone,
    FreeProductCone,
    ProductCone,
    WreathCone,
    parse_word,
)

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("default")

Z = AbelianCone(1)
Z2 = AbelianCone(2)
F2 = FreeCone(("a", "b"))
BS_CT = BSCtCone()
BS_Q = BSQCone()
ZZ = FreeProductCone(Z, Z)
WZZ = WreathCone(Z, Z)

BUILTIN_CONES = {
    "free": F2,
    "abelian": Z2,
    "bs12_ct": BS_CT,
    "bs12_q": BS_Q,
    "product": ProductCone(Z, F2),
    "freeprod": ZZ,
    "freeprod_mixed": FreeProductCone(Z2, Z),
    "wreath": WZZ,
}


def words(cone, max_size=6):
    """Random group elements of ``cone`` as products of signed generators."""
    letters = st.sampled_from(cone.generator_names()).flatmap(
        lambda n: st.sampled_from([n, n + "^-1"])
    )
    return st.lists(letters, max_size=max_size).map(lambda toks: parse_word(cone, toks))


def positive_words(cone, max_size=5):
    gens = cone.positive_generators()
    return st.lists(st.sampled_from(gens), max_size=max_size).map(
        lambda gs: _product(cone, gs)
    )


def _product(cone, gs):
    out = cone.identity()
    for g in gs:
        out = out * g
    return out
