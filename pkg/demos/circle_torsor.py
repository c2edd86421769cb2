"""A line bundle on a circle built from two arcs, in both formulations.

The DF structure has characteristic N on each arc.  The class of the
generator is glued with a twist on one of the two overlaps, so it has no
global section, yet the structure converts to Kato form and back.

Run: python3 demos/circle_torsor.py
"""

from logstruct.corpus import circle_df
from logstruct.logsite import (
    check_df,
    check_log,
    coboundary,
    df_isomorphic,
    df_to_kato,
    global_rep,
    kato_to_df,
    transitions,
)
from logstruct.rootstack import fiber_rank


def main():
    d = circle_df()
    site = d.site
    print(f"site {site.name}: elements {list(site.elements)}, cover of X = {list(site.covers['X'][0])}")
    print("DF check:", check_df(d).status)

    gen = d.A.at("X").gens[0]
    cocycle = transitions(d, "X", gen)
    for (u, v, w), unit in sorted(cocycle.items()):
        print(f"  transition {u} -> {v} on {w}: {unit}")
    print("is the cocycle a coboundary?", coboundary(d, "X", cocycle) is not None)
    print("global representative of the class:", global_rep(d, "X", gen))

    k = df_to_kato(d)
    print("Kato check:", check_log(k).status)
    print("round trip DF -> Kato -> DF isomorphic:", df_isomorphic(d, kato_to_df(k)).found)
    print("fiber ranks:", {x: fiber_rank(k, x) for x in site.elements})


if __name__ == "__main__":
    main()
