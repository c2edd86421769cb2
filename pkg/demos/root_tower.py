"""Root stacks of the A1 cone: the levels n | 12 and how they fit together.

Run: python3 demos/root_tower.py
"""

from logstruct.corpus import A1_CONE
from logstruct.rootstack import chart_stack, export_toric, local_root_stack, tower


def main():
    base = chart_stack(A1_CONE)
    print("chart stack: group", base.group, "degrees", base.degrees())
    print(export_toric(base).render())

    g = local_root_stack(A1_CONE, 2)
    print("level 2: group", g.group)
    print("  generator degrees", g.degrees())
    print("  invariant part   ", g.degree_zero_part(), "(twice the chart generators)")
    print(export_toric(g).render())

    t = tower(A1_CONE, 12)
    print("tower N=12 levels:", t.divisors())
    for n in t.divisors():
        print(f"  level {n:>2}: {t.levels[n].group}")
    print("transitions:", len(t.transitions), "compositions checked:", t.composition_count())
    print("coherent:", t.verify())


if __name__ == "__main__":
    main()
