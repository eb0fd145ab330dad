"""
运行配置单元测试
"""

from pathlib import Path

import pytest

from adcad.config.validation import PathsSection, RunConfig, deep_merge, load_config
from adcad.models.dataset import SplitMode
from adcad.utils.exceptions import ConfigurationError


class TestLoadConfig:
    """配置加载测试类"""

    def test_defaults(self):
        """不给配置文件时使用默认值"""
        config = load_config()
        assert config == RunConfig()
        assert config.network.input_size == 64
        assert config.network.to_network_config().stages == 4
        assert config.train.batch_size == 60
        assert config.split.mode is SplitMode.ROI_LEVEL
        assert config.scan.roi_size == 256

    def test_empty_file(self, temp_dir):
        """空文件等同默认值"""
        path = temp_dir / "empty.toml"
        path.write_text("", encoding="utf-8")
        assert load_config(path) == RunConfig()

    def test_file_values(self, temp_dir):
        """文件中的取值"""
        path = temp_dir / "run.toml"
        path.write_text(
            "seed = 7\n[train]\nbatch_size = 16\n[split]\nmode = \"paper-faithful\"\n",
            encoding="utf-8"
        )
        config = load_config(path)
        assert config.seed == 7
        assert config.train.batch_size == 16
        assert config.split.mode is SplitMode.PAPER_FAITHFUL
        assert config.train.learning_rate == 0.01

    def test_invalid_value_names_key(self, temp_dir):
        """非法取值报告完整键名"""
        path = temp_dir / "bad.toml"
        path.write_text("[train]\nbatch_size = 0\n", encoding="utf-8")
        with pytest.raises(ConfigurationError) as excinfo:
            load_config(path)
        assert excinfo.value.config_key == "train.batch_size"
        assert "train.batch_size" in excinfo.value.message

    def test_unknown_key(self, temp_dir):
        """未知配置项"""
        path = temp_dir / "unknown.toml"
        path.write_text("[train]\nepochs = 3\n", encoding="utf-8")
        with pytest.raises(ConfigurationError) as excinfo:
            load_config(path)
        assert excinfo.value.config_key == "train.epochs"

    def test_bad_toml(self, temp_dir):
        """TOML 语法错误"""
        path = temp_dir / "broken.toml"
        path.write_text("[train\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_config(path)

    def test_missing_file(self, temp_dir):
        """配置文件不存在"""
        with pytest.raises(ConfigurationError):
            load_config(temp_dir / "missing.toml")

    def test_overrides_win(self, temp_dir):
        """命令行覆盖优先于文件"""
        path = temp_dir / "run.toml"
        path.write_text("seed = 7\n[train]\nbatch_size = 16\nmomentum = 0.5\n", encoding="utf-8")
        config = load_config(path, {'seed': 9, 'train': {'batch_size': 32}})
        assert config.seed == 9
        assert config.train.batch_size == 32
        assert config.train.momentum == 0.5

    def test_ratio_sum(self):
        """划分比例之和必须为 1"""
        with pytest.raises(ConfigurationError):
            load_config(overrides={'split': {'train': 0.8}})


class TestConfigHelpers:
    """配置辅助函数测试类"""

    def test_deep_merge(self):
        """递归合并且不修改输入"""
        base = {'a': {'b': 1, 'c': 2}, 'd': 3}
        merged = deep_merge(base, {'a': {'b': 10}, 'e': 4})
        assert merged == {'a': {'b': 10, 'c': 2}, 'd': 3, 'e': 4}
        assert base == {'a': {'b': 1, 'c': 2}, 'd': 3}

    def test_paths_resolve(self, temp_dir):
        """相对路径位于工作目录下，绝对路径不变"""
        paths = PathsSection(workdir=str(temp_dir), checkpoint=str(temp_dir / "elsewhere.ckpt"))
        assert paths.resolve('workdir') == temp_dir
        assert paths.resolve('manifest') == temp_dir / "manifest.csv"
        assert paths.resolve('checkpoint') == temp_dir / "elsewhere.ckpt"

    def test_seeds(self):
        """训练种子与噪声种子"""
        config = load_config(overrides={'seed': 5, 'augment': {'seed_offset': 2}})
        assert config.training_config().seed == 5
        assert config.noise_seed == 7

    def test_example_file_matches_defaults(self):
        """示例配置文件与默认值一致"""
        example = Path(__file__).resolve().parents[3] / "config.example.toml"
        if not example.exists():
            pytest.skip("示例配置文件不在源码树中")
        assert load_config(example) == RunConfig()
