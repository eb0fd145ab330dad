"""
模型检查点单元测试
"""

import json

import numpy as np
import pytest

from adcad.models.network import CheckpointMeta
from adcad.services.model import MAGIC, ConvNet, decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint
from adcad.utils.exceptions import CheckpointFormatError


class TestCheckpoint:
    """检查点测试类"""

    def test_magic(self, tiny_network):
        """8 字节魔数"""
        data = encode_checkpoint(tiny_network)
        assert MAGIC == b"ADCNN\x00v1"
        assert data[:8] == MAGIC

    def test_header_line(self, tiny_network):
        """头部为单行 JSON"""
        data = encode_checkpoint(tiny_network)
        header = json.loads(data[8:data.index(b"\n", 8)].decode("utf-8"))
        assert header['config']['input_size'] == 16
        assert header['epoch'] == 0
        assert header['val_cost'] is None

    def test_restore_bitwise(self, tiny_network, rng):
        """恢复后参数逐位相同、预测一致"""
        trained = ConvNet(tiny_network.config, tiny_network.parameters(), CheckpointMeta(epoch=3, val_cost=0.25))
        restored = decode_checkpoint(encode_checkpoint(trained))
        assert restored.config == trained.config
        assert restored.metadata == trained.metadata
        for a, b in zip(trained.parameters(), restored.parameters()):
            assert a.tobytes() == b.tobytes()
        batch = rng.normal(size=(3, 16, 16))
        np.testing.assert_array_equal(trained.predict_scores(batch), restored.predict_scores(batch))

    def test_scores_reproduced_on_many_inputs(self, tiny_network, temp_dir):
        """保存再加载的网络在 100 个随机输入上的分数逐位相同"""
        path = save_checkpoint(tiny_network, temp_dir / "model.ckpt")
        restored = load_checkpoint(path)
        batch = np.random.default_rng(17).normal(size=(100, 16, 16))
        expected = tiny_network.predict_scores(batch)
        assert restored.predict_scores(batch).tobytes() == expected.tobytes()
        assert save_checkpoint(restored, temp_dir / "again.ckpt").read_bytes() == path.read_bytes()

    def test_payload_little_endian(self, tiny_network):
        """参数为小端 float64"""
        data = encode_checkpoint(tiny_network)
        payload = data[data.index(b"\n", 8) + 1:]
        first = np.frombuffer(payload[:8], dtype='<f8')[0]
        assert first == tiny_network.parameters()[0].reshape(-1)[0]

    def test_bad_magic(self, tiny_network):
        """魔数错误"""
        data = b"XXXXXXXX" + encode_checkpoint(tiny_network)[8:]
        with pytest.raises(CheckpointFormatError) as excinfo:
            decode_checkpoint(data)
        assert excinfo.value.byte_offset == 0

    def test_unsupported_version(self, tiny_network):
        """版本不支持"""
        data = b"ADCNN\x00v9" + encode_checkpoint(tiny_network)[8:]
        with pytest.raises(CheckpointFormatError) as excinfo:
            decode_checkpoint(data)
        assert excinfo.value.byte_offset == 6

    def test_truncated_payload(self, tiny_network):
        """参数截断"""
        with pytest.raises(CheckpointFormatError):
            decode_checkpoint(encode_checkpoint(tiny_network)[:-8])

    def test_bad_header(self):
        """头部不是合法 JSON"""
        with pytest.raises(CheckpointFormatError) as excinfo:
            decode_checkpoint(MAGIC + b"{not json\n")
        assert excinfo.value.byte_offset == 8

    def test_file_io(self, tiny_network, temp_dir):
        """保存与加载"""
        path = save_checkpoint(tiny_network, temp_dir / "models" / "model.ckpt")
        restored = load_checkpoint(path)
        for a, b in zip(tiny_network.parameters(), restored.parameters()):
            np.testing.assert_array_equal(a, b)
