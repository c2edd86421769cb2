"""Log structures on finite poset sites in the Kato and DF formulations."""

from .charts import ChartResult, KatoChart, Upgrade, lift_chart, lift_projects, stalk_check, upgrade_chart, verify_chart
from .df import (
    DFStructure,
    check_df,
    check_transitions,
    class_rep,
    coboundary,
    df_isomorphic,
    df_to_kato,
    global_rep,
    kato_to_df,
    local_reps,
    same_class,
    transitions,
)
from .kato import (
    IsoResult,
    KatoStructure,
    LogMorphismData,
    StrictResult,
    affinize,
    associated,
    characteristic,
    characteristic_profile,
    check_log,
    compose_morphisms,
    identity_morphism,
    is_quasi_integral,
    isomorphic,
    pullback,
    quasi_integrality_witness,
    require_quasi_integral,
    trivial_structure,
    unit_map,
    verify_strict,
)
from .sheaf import CheckReport, Equalizer, MonoidSheaf, Violation, build_sheaf, check_sheaf, constant_sheaf, equalizer, glue
from .site import FiniteSite, SiteMorphism, point_site
