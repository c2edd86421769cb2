"""Command lines covered by the golden-file tests.

Each case is ``(name, argv, exit code)``; argv is relative to tests/data.
The expected output lives in tests/golden/<name>.out.
"""

CASES = [
    # monoid
    ("monoid-check-a1", ["monoid", "check", "a1.monoid"], 0),
    ("monoid-check-n23", ["monoid", "check", "n23.monoid"], 0),
    ("monoid-check-torsion", ["monoid", "check", "torsion.monoid"], 0),
    ("monoid-check-json", ["monoid", "check", "a1.json", "--format", "structured"], 0),
    ("monoid-check-duplicate", ["monoid", "check", "duplicate.monoid"], 2),
    ("monoid-gp", ["monoid", "gp", "n23.monoid", "torsion.monoid"], 0),
    ("monoid-units", ["monoid", "units", "a1.monoid", "torsion.monoid"], 0),
    ("monoid-sharpen", ["monoid", "sharpen", "nat2.monoid"], 0),
    ("monoid-saturate", ["monoid", "saturate", "n23.monoid", "hilbert.monoid"], 0),
    ("monoid-hilbert", ["monoid", "hilbert", "hilbert.monoid"], 0),
    ("monoid-present", ["monoid", "present", "a1.monoid", "n23.monoid"], 0),
    ("monoid-present-doc", ["monoid", "present", "a1.monoid", "-o", "-"], 0),
    ("monoid-cn", ["monoid", "cn", "a1.monoid", "nat2.monoid", "-n", "6"], 0),
    ("monoid-cn-missing-n", ["monoid", "cn", "a1.monoid"], 2),
    ("monoid-missing-file", ["monoid", "check", "no-such-file.monoid"], 2),
    # log
    ("log-check-plane", ["log", "check", "plane.log"], 0),
    ("log-check-circle", ["log", "check", "circle.log", "--cocycles"], 0),
    ("log-check-circle-no-cocycles", ["log", "check", "circle.log"], 2),
    ("log-check-nonqi", ["log", "check", "nonqi.log"], 0),
    ("log-check-nontransitive", ["log", "check", "nontransitive.log"], 2),
    ("log-kato2df-plane", ["log", "kato2df", "plane.log"], 0),
    ("log-kato2df-pushout-doc", ["log", "kato2df", "pushout.log", "-o", "-"], 0),
    ("log-kato2df-nonqi", ["log", "kato2df", "nonqi.log"], 2),
    ("log-df2kato-circle", ["log", "df2kato", "circle.log", "--cocycles", "--format", "structured"], 0),
    ("log-kato2df-reference", ["log", "kato2df", "line.log", "--reference", "line_df.log"], 0),
    ("log-df2kato-reference", ["log", "df2kato", "line_df.log", "--reference", "line.log"], 0),
    ("log-kato2df-wrong-reference", ["log", "kato2df", "line.log", "--reference", "line.log"], 2),
    ("log-pullback", ["log", "pullback", "closed_point.log"], 0),
    ("log-strict", ["log", "strict", "closed_point.log"], 0),
    ("log-strict-fails", ["log", "strict", "closed_point_trivial.log"], 1),
    ("log-chart-verify", ["log", "chart-verify", "plane.log"], 0),
    ("log-chart-verify-bad", ["log", "chart-verify", "line_bad_chart.log"], 1),
    ("log-chart-upgrade", ["log", "chart-upgrade", "line.log"], 0),
    ("log-lift-chart", ["log", "lift-chart", "circle.log", "--cocycles"], 0),
    ("log-lift-chart-bad", ["log", "lift-chart", "line_bad_chart.log"], 1),
    # root
    ("root-chart-stack", ["root", "chart-stack", "a1.monoid"], 0),
    ("root-local", ["root", "local", "a1.monoid", "-n", "2"], 0),
    ("root-local-unsaturated", ["root", "local", "n23.monoid", "-n", "2"], 2),
    ("root-tower", ["root", "tower", "nat2.monoid", "-N", "12", "--format", "structured"], 0),
    ("root-fiber-rank", ["root", "fiber-rank", "plane.log"], 0),
    ("root-fiber-rank-circle", ["root", "fiber-rank", "circle.log", "--cocycles"], 0),
    ("root-export-toric", ["root", "export-toric", "a1.monoid", "-o", "-"], 0),
    ("root-export-toric-level", ["root", "export-toric", "nat.monoid", "-n", "2"], 0),
]
