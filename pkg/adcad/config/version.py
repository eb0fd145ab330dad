"""
版本配置模块
统一管理项目版本号与文件格式版本
"""

# 项目主版本号
PROJECT_VERSION = "0.1.0"

# 检查点文件格式版本（写入魔数的最后两个字节）
CHECKPOINT_FORMAT_VERSION = "v1"

# 清单文件格式版本
MANIFEST_FORMAT_VERSION = "1"


def get_version_info():
    """获取完整的版本信息（含关键依赖版本），写入运行日志用于复现"""
    from importlib import metadata

    info = {
        'project': PROJECT_VERSION,
        'checkpoint_format': CHECKPOINT_FORMAT_VERSION,
        'manifest_format': MANIFEST_FORMAT_VERSION,
    }
    for package in ('numpy', 'scipy', 'scikit-image', 'pandas', 'pydantic', 'pydantic-settings'):
        try:
            info[package] = metadata.version(package)
        except metadata.PackageNotFoundError:
            info[package] = 'unknown'
    return info
