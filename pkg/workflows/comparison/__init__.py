from .compare_variants import (
    COMPARISON_SCHEMA_VERSION,
    ComparisonResult,
    TaskJob,
    TaskOutcome,
    build_table,
    compare_variants,
    run_task,
    table_averages,
)
from .comparison_report import (
    HARD_PAIR_THRESHOLD,
    create_html_report,
    mark_hard_pairs,
    read_comparison_csv,
    summary_lines,
    write_comparison_outputs,
)

__all__ = [
    'COMPARISON_SCHEMA_VERSION',
    'ComparisonResult',
    'TaskJob',
    'TaskOutcome',
    'build_table',
    'compare_variants',
    'run_task',
    'table_averages',
    'HARD_PAIR_THRESHOLD',
    'create_html_report',
    'mark_hard_pairs',
    'read_comparison_csv',
    'summary_lines',
    'write_comparison_outputs',
]
