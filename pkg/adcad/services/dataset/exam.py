"""
全片检查文件
PGM 图像加同名 <stem>.marks.csv 标记表（表头 row,col）
"""

import logging
from pathlib import Path
from typing import Union

import pandas as pd

from ...models.image import AdMark, ExamImage
from ...utils.exceptions import DataValidationError
from .pgm import read_pgm_image, write_pgm

logger = logging.getLogger(__name__)

MARKS_SUFFIX = ".marks.csv"
MARK_COLUMNS = ('row', 'col')


def marks_path(image_path: Union[str, Path]) -> Path:
    """检查图像对应的标记表路径"""
    image_path = Path(image_path)
    return image_path.with_name(image_path.stem + MARKS_SUFFIX)


def read_exam(path: Union[str, Path]) -> ExamImage:
    """
    读取检查图像与标记

    Args:
        path: PGM 文件路径；标记表缺失时视为无标记

    Returns:
        ExamImage，exam_id 为文件名主干
    """
    path = Path(path)
    image = read_pgm_image(path)
    marks = []
    table = marks_path(path)
    if table.exists():
        try:
            frame = pd.read_csv(table, encoding='utf-8')
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise DataValidationError(f"无法读取标记表 {table}: {e}") from e
        if tuple(frame.columns) != MARK_COLUMNS:
            raise DataValidationError(
                f"标记表表头必须为 row,col，实际为 {','.join(map(str, frame.columns))}",
                validation_errors=[{'field': 'columns', 'file': str(table)}]
            )
        marks = [AdMark(row=int(row), col=int(col)) for row, col in frame.itertuples(index=False)]
    else:
        logger.warning(f"检查 {path.name} 没有标记表 {table.name}")

    try:
        exam = ExamImage(exam_id=path.stem, pixels=image.pixels, marks=marks, maxval=image.maxval)
    except ValueError as e:
        raise DataValidationError(f"检查 {path.name} 无效: {e}") from e
    logger.info(f"读取检查 {exam.exam_id}: {exam.height}x{exam.width}，标记 {len(marks)} 个")
    return exam


def write_exam(exam: ExamImage, directory: Union[str, Path]) -> Path:
    """写出检查图像与标记表，返回图像路径"""
    directory = Path(directory)
    image_path = write_pgm(exam.pixels, directory / f"{exam.exam_id}.pgm", maxval=exam.maxval)
    frame = pd.DataFrame([(m.row, m.col) for m in exam.marks], columns=list(MARK_COLUMNS))
    frame.to_csv(marks_path(image_path), index=False, encoding='utf-8', lineterminator='\n')
    return image_path
