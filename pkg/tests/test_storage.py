"""Unit tests for the membership cache and file storage."""

import shutil
import tempfile
from pathlib import Path

from src.core.mfis import enumerate_mfis
from src.core.models import BinaryRepresentation
from src.storage.database import MembershipCache
from src.storage.files import CatalogStorage, CertificateStorage


class TestMembershipCache:
    """Test the sqlite decision cache."""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()
        self.cache = MembershipCache(Path(self.temp_dir) / "nested" / "memo.db")

    def teardown_method(self):
        shutil.rmtree(self.temp_dir)

    def test_get_missing(self):
        assert self.cache.get("B?", 1, 1) is None
        assert self.cache.get_certificate("B?", 1, 1) is None

    def test_put_and_get(self):
        self.cache.put("BW", 1, 1, False, nodes=12)
        self.cache.put("Bw", 1, 1, True, "1 1 3\n1\n1\n1\n")
        assert self.cache.get("BW", 1, 1) is False
        assert self.cache.get("Bw", 1, 1) is True
        assert self.cache.get("Bw", 2, 1) is None
        assert self.cache.get_certificate("Bw", 1, 1) == "1 1 3\n1\n1\n1\n"

    def test_certificate_dropped_for_non_members(self):
        self.cache.put("BW", 1, 1, False, "1 1 3\n1\n1\n1\n")
        assert self.cache.get_certificate("BW", 1, 1) is None

    def test_overwrite(self):
        self.cache.put("BW", 2, 1, False)
        self.cache.put("BW", 2, 1, True, "2 1 3\n10\n11\n01\n")
        assert self.cache.get("BW", 2, 1) is True
        assert self.cache.stats() == {"members": 1, "non_members": 0}

    def test_stats(self):
        self.cache.put("BW", 1, 1, False)
        self.cache.put("Bw", 1, 1, True, "1 1 3\n1\n1\n1\n")
        self.cache.put("BW", 2, 1, True, "2 1 3\n10\n11\n01\n")
        assert self.cache.stats() == {"members": 2, "non_members": 1}

    def test_persists_across_instances(self):
        self.cache.put("BW", 1, 1, False)
        reopened = MembershipCache(self.cache.db_path)
        assert reopened.get("BW", 1, 1) is False


class TestCatalogStorage:
    """Test catalog files."""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()
        self.storage = CatalogStorage(self.temp_dir)

    def teardown_method(self):
        shutil.rmtree(self.temp_dir)

    def test_save_and_get(self):
        catalog = enumerate_mfis(1, 1, 4)
        path = self.storage.save_catalog(catalog)
        assert path.name == "mfis-d1-p1-n4.txt"
        assert self.storage.exists("mfis-d1-p1-n4")
        assert self.storage.get_catalog(1, 1, 4) == catalog

    def test_identical_bytes(self):
        catalog = enumerate_mfis(1, 1, 4)
        first = self.storage.save_catalog(catalog).read_bytes()
        second = self.storage.save_catalog(enumerate_mfis(1, 1, 4)).read_bytes()
        assert first == second

    def test_missing(self):
        assert self.storage.get_catalog(3, 2, 5) is None
        assert not self.storage.exists("mfis-d3-p2-n5")

    def test_list_for(self):
        self.storage.save_catalog(enumerate_mfis(1, 1, 5))
        self.storage.save_catalog(enumerate_mfis(1, 1, 3))
        self.storage.save_catalog(enumerate_mfis(2, 1, 3))
        found = self.storage.list_for(1, 1)
        assert [c.max_n for c in found] == [3, 5]

    def test_skips_malformed(self):
        self.storage.save_catalog(enumerate_mfis(1, 1, 3))
        (Path(self.temp_dir) / "broken.txt").write_text("not a catalog\n")
        assert len(self.storage.list_all()) == 1
        assert self.storage.get("broken") is None


class TestCertificateStorage:
    """Test certificate files."""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()
        self.storage = CertificateStorage(self.temp_dir)

    def teardown_method(self):
        shutil.rmtree(self.temp_dir)

    def test_round_trip(self):
        rep = BinaryRepresentation(3, 2, (0b011, 0b110, 0b111))
        path = self.storage.save("cert-d3-p2-1", rep)
        assert path.suffix == ".cert"
        assert path.read_text() == "3 2 3\n110\n011\n111\n"
        assert self.storage.get("cert-d3-p2-1") == rep

    def test_malformed(self):
        (Path(self.temp_dir) / "bad.cert").write_text("3 2 1\n11\n")
        assert self.storage.get("bad") is None
        assert self.storage.list_all() == []
