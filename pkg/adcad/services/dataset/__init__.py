"""
数据集服务
ROI 提取、分层划分、合成数据、PGM 读写、清单与样本加载
"""

from .pgm import PgmImage, read_pgm, read_pgm_image, write_pgm, decode_pgm, decode_pgm_image, encode_pgm
from .roi import window_origin, crop_roi, sample_normal_roi, extract_roi_pairs
from .split import largest_remainder, assign_splits, stratified_split
from .synth import synth_samples, synth_generate, synth_exam, breast_mask
from .manifest import read_manifest, write_manifest, expand_manifest, validate_manifest, plan_position
from .loader import SampleSet, ArrayDataset, ManifestDataset, load_split
from .exam import read_exam, write_exam, marks_path

__all__ = [
    'PgmImage',
    'read_pgm',
    'read_pgm_image',
    'write_pgm',
    'decode_pgm',
    'decode_pgm_image',
    'encode_pgm',
    'window_origin',
    'crop_roi',
    'sample_normal_roi',
    'extract_roi_pairs',
    'largest_remainder',
    'assign_splits',
    'stratified_split',
    'synth_samples',
    'synth_generate',
    'synth_exam',
    'breast_mask',
    'read_manifest',
    'write_manifest',
    'expand_manifest',
    'validate_manifest',
    'plan_position',
    'SampleSet',
    'ArrayDataset',
    'ManifestDataset',
    'load_split',
    'read_exam',
    'write_exam',
    'marks_path',
]
