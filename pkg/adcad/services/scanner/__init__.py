"""
全片扫描服务
"""

from .scanner import SCORING_CHUNK, Scorer, extract_grid, label_roi, max_heatmap, scan_exam
from .report import write_scan_artifacts, summary_frame, write_summary, best_exam

__all__ = [
    'SCORING_CHUNK',
    'Scorer',
    'extract_grid',
    'label_roi',
    'max_heatmap',
    'scan_exam',
    'write_scan_artifacts',
    'summary_frame',
    'write_summary',
    'best_exam',
]
