import pytest

from src.core.errors import SecurityDomainError
from src.protocol.security import minimal_length, security_level


class TestSecurityLevel:
    def test_default_parameters(self):
        report = security_level(256, 16)
        assert report.matrix_bits == 128.0
        assert report.key_bits == 128.0
        assert report.tvalue_bits == 127.819
        assert report.braid_bits is None
        assert report.overall_bits is None

    def test_minimal_length(self):
        length, bound = minimal_length(256, 16)
        assert length == 360
        assert bound == pytest.approx(359.386, abs=1e-3)
        assert security_level(256, 16).length_bound == 359.386

    def test_minimal_length_does_not_balance_the_levels(self):
        report = security_level(256, 16, 360)
        assert report.braid_bits < report.tvalue_bits

    def test_balanced_length(self):
        balanced = security_level(256, 16).balanced_length
        assert security_level(256, 16, balanced).braid_bits >= 127.819
        assert security_level(256, 16, balanced - 1).braid_bits < 127.819
        assert security_level(5, 4).balanced_length == 9

    def test_long_braids(self):
        report = security_level(256, 16, 5318)
        assert report.braid_bits == pytest.approx(170.65, abs=0.01)
        assert report.overall_bits == 127.819

    def test_toy_parameters(self):
        report = security_level(5, 4, 8)
        assert report.tvalue_bits == 6.340
        assert report.braid_bits == 6.0
        assert report.overall_bits == 6.0

    @pytest.mark.parametrize("q, n, length", [(3, 16, None), (256, 1, None), (256, 16, 1)])
    def test_domain(self, q, n, length):
        with pytest.raises(SecurityDomainError):
            security_level(q, n, length)

    def test_lines(self):
        lines = security_level(256, 16, 5318).lines()
        assert lines[0] == "q = 256, N = 16, L = 5318"
        assert any("127.819" in line for line in lines)
        assert "minimal L = 360 (bound 359.386)" in lines
