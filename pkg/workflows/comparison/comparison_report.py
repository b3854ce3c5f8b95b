"""
Write the comparison table as CSV, JSON and an HTML report.
"""
import os
import math
from datetime import datetime

import pandas as pd
from jinja2 import Environment, FileSystemLoader

from workflows.metadata_generator import write_json_atomic, write_text_atomic

HARD_PAIR_THRESHOLD = 0.90
TEMPLATE_NAME = 'comparison_report.html'


def format_percent(value):
    """0.9473 -> '94.73%', NaN -> '-'"""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return '-'
    return f"{100.0 * value:.2f}%"


def format_delta(value):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return '-'
    return f"{100.0 * value:+.2f} pp"


def mark_hard_pairs(table, threshold=HARD_PAIR_THRESHOLD):
    """Add 'hard' (CNN below threshold) and 'mitigated' (hybrid did better on a hard pair) columns"""
    marked = table.copy()
    marked['hard'] = marked['cnn_acc'] < threshold
    marked['mitigated'] = marked['hard'] & (marked['qnn_acc'] > marked['cnn_acc'])
    return marked


def summary_lines(table, averages):
    """Plain-text summary printed by the CLI"""
    lines = []
    for row in table.itertuples(index=False):
        if row.error:
            lines.append(f"{row.pair:<45} FAILED: {row.error}")
        else:
            lines.append(f"{row.pair:<45} cnn={format_percent(row.cnn_acc):>8} "
                         f"qnn={format_percent(row.qnn_acc):>8} delta={format_delta(row.delta)}")
    lines.append(f"Average over {averages['tasks']} task(s): CNN {format_percent(averages['cnn_avg'])}, "
                 f"QNN4EO {format_percent(averages['qnn_avg'])}")
    return lines


def create_html_report(table, averages, output_file, threshold=HARD_PAIR_THRESHOLD, title=None):
    """Render the comparison into a standalone HTML page"""
    env = Environment(loader=FileSystemLoader(os.path.dirname(__file__)), autoescape=True)
    env.filters['percent'] = format_percent
    env.filters['delta'] = format_delta
    template = env.get_template(TEMPLATE_NAME)

    marked = mark_hard_pairs(table, threshold)
    html = template.render(
        title=title or 'CNN vs QNN4EO comparison',
        generated=datetime.now().strftime('%Y-%m-%d %H:%M:%S'),
        rows=marked.to_dict(orient='records'),
        averages=averages,
        threshold=threshold,
        hard_count=int(marked['hard'].sum()),
        mitigated_count=int(marked['mitigated'].sum()),
    )
    return write_text_atomic(html, output_file)


def write_comparison_outputs(result, output_dir, threshold=HARD_PAIR_THRESHOLD):
    """comparison.csv, comparison.json and comparison.html under ``output_dir``"""
    os.makedirs(output_dir, exist_ok=True)
    paths = {
        'csv': os.path.join(output_dir, 'comparison.csv'),
        'json': os.path.join(output_dir, 'comparison.json'),
        'html': os.path.join(output_dir, 'comparison.html'),
    }
    write_text_atomic(result.table.to_csv(index=False, float_format='%.6f'), paths['csv'])
    write_json_atomic(result.to_json_dict(), paths['json'])
    create_html_report(result.table, result.averages, paths['html'], threshold=threshold)
    return paths


def read_comparison_csv(path):
    """Load a table written by ``write_comparison_outputs``"""
    table = pd.read_csv(path, keep_default_na=False, na_values=[''])
    table['error'] = table['error'].fillna('')
    return table
