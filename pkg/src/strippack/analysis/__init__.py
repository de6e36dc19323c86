"""Strip partition, line occupancy, the lemma suite and the quadratic program."""

from .lemmas import (
    AnalysisContext,
    Check,
    LemmaReport,
    gap_width_check,
    lemma_suite,
    line_occupancy_check,
)
from .regions import (
    AnalysisError,
    ElementaryLine,
    ImproperLineError,
    LineProfile,
    LineType,
    RegionOccupancy,
    StripRegion,
    band_area,
    elementary_lines,
    line_profile,
    line_type,
    region_of,
    region_occupancy,
    strip_partition,
)
from .qp import (
    STATED_OPTIMUM,
    QpFeasibilityError,
    QpPoint,
    QpSearchResult,
    coordinate_ascent,
    qp_grid,
    qp_objective,
    qp_search,
    stated_point,
)
