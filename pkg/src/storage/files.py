"""Text file storage for catalogs and representation certificates."""

import logging
from pathlib import Path
from typing import Callable, Generic, TypeVar

from src.core.mfis import CatalogFormatError, format_catalog, parse_catalog
from src.core.models import BinaryRepresentation, MfisCatalog
from src.core.representation import RepresentationError, format_certificate, parse_certificate

logger = logging.getLogger(__name__)

T = TypeVar("T", MfisCatalog, BinaryRepresentation)


class FileStorage(Generic[T]):
    """Generic directory of text files, one item per file."""

    suffix = ".txt"

    def __init__(
        self,
        directory: str | Path,
        parse: Callable[[str], T],
        render: Callable[[T], str],
        errors: tuple[type[Exception], ...] = (ValueError,),
    ):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._parse = parse
        self._render = render
        self._errors = errors

    def _get_path(self, id: str) -> Path:
        """Get file path for an item."""
        return self.directory / f"{id}{self.suffix}"

    def ids(self) -> list[str]:
        return sorted(path.stem for path in self.directory.glob(f"*{self.suffix}"))

    def list_all(self) -> list[T]:
        """Load every readable item, skipping malformed files."""
        items = []
        for id in self.ids():
            try:
                items.append(self._load(self._get_path(id)))
            except self._errors as e:
                logger.warning("could not load %s: %s", self._get_path(id), e)
        return items

    def _load(self, path: Path) -> T:
        return self._parse(path.read_text(encoding="ascii"))

    def get(self, id: str) -> T | None:
        """Get an item by ID."""
        path = self._get_path(id)
        if not path.exists():
            return None
        try:
            return self._load(path)
        except self._errors:
            return None

    def save(self, id: str, item: T) -> Path:
        """Write an item; the same item always produces the same bytes."""
        path = self._get_path(id)
        with open(path, "w", encoding="ascii", newline="\n") as f:
            f.write(self._render(item))
        return path

    def exists(self, id: str) -> bool:
        """Check if an item exists."""
        return self._get_path(id).exists()


class CatalogStorage(FileStorage[MfisCatalog]):
    """Catalog files named mfis-d<d>-p<p>-n<max_n>.txt."""

    def __init__(self, directory: str | Path):
        super().__init__(directory, parse=parse_catalog, render=format_catalog,
                         errors=(CatalogFormatError,))

    @staticmethod
    def catalog_id(d: int, p: int, max_n: int) -> str:
        return f"mfis-d{d}-p{p}-n{max_n}"

    def save_catalog(self, catalog: MfisCatalog) -> Path:
        return self.save(self.catalog_id(catalog.d, catalog.p, catalog.max_n), catalog)

    def get_catalog(self, d: int, p: int, max_n: int) -> MfisCatalog | None:
        return self.get(self.catalog_id(d, p, max_n))

    def list_for(self, d: int, p: int) -> list[MfisCatalog]:
        """Stored catalogs for one (d, p), smallest max_n first."""
        found = [c for c in self.list_all() if c.d == d and c.p == p]
        return sorted(found, key=lambda c: c.max_n)


class CertificateStorage(FileStorage[BinaryRepresentation]):
    """Representation certificates in the "d p n" text format."""

    suffix = ".cert"

    def __init__(self, directory: str | Path):
        super().__init__(directory, parse=parse_certificate, render=format_certificate,
                         errors=(RepresentationError,))
