"""Data persistence layer."""

# Import directly where needed to avoid circular imports
# from .database import MembershipCache
# from .files import CatalogStorage, CertificateStorage

__all__ = ["MembershipCache", "CatalogStorage", "CertificateStorage"]
