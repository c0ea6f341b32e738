"""SQLite cache of class-membership decisions."""

import sqlite3
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Optional


class MembershipCache:
    """Persistent memo of "is g in G(d,p)", keyed by canonical graph6."""

    def __init__(self, db_path: str | Path):
        self.db_path = Path(db_path)
        self.db_path.parent.mkdir(parents=True, exist_ok=True)
        self._init_db()

    def _init_db(self):
        """Initialize database schema."""
        with self._connection() as conn:
            conn.executescript("""
                CREATE TABLE IF NOT EXISTS membership (
                    graph6 TEXT NOT NULL,
                    d INTEGER NOT NULL,
                    p INTEGER NOT NULL,
                    member INTEGER NOT NULL,
                    certificate TEXT,
                    nodes INTEGER NOT NULL DEFAULT 0,
                    decided_at TIMESTAMP NOT NULL,
                    PRIMARY KEY (graph6, d, p)
                );

                CREATE INDEX IF NOT EXISTS idx_membership_dp ON membership(d, p);
            """)

    @contextmanager
    def _connection(self):
        """Context manager for database connections."""
        conn = sqlite3.connect(
            self.db_path,
            detect_types=sqlite3.PARSE_DECLTYPES | sqlite3.PARSE_COLNAMES
        )
        conn.row_factory = sqlite3.Row
        try:
            yield conn
            conn.commit()
        except Exception:
            conn.rollback()
            raise
        finally:
            conn.close()

    def get(self, graph6: str, d: int, p: int) -> Optional[bool]:
        """Cached decision, or None when the triple was never decided."""
        with self._connection() as conn:
            row = conn.execute(
                "SELECT member FROM membership WHERE graph6 = ? AND d = ? AND p = ?",
                (graph6, d, p)
            ).fetchone()
            if row:
                return bool(row["member"])
            return None

    def get_certificate(self, graph6: str, d: int, p: int) -> Optional[str]:
        with self._connection() as conn:
            row = conn.execute(
                "SELECT certificate FROM membership WHERE graph6 = ? AND d = ? AND p = ?",
                (graph6, d, p)
            ).fetchone()
            return row["certificate"] if row else None

    def put(self, graph6: str, d: int, p: int, member: bool,
            certificate: Optional[str] = None, nodes: int = 0) -> None:
        """Record a decision; certificate text is kept for members only."""
        with self._connection() as conn:
            conn.execute("""
                INSERT INTO membership (graph6, d, p, member, certificate, nodes, decided_at)
                VALUES (?, ?, ?, ?, ?, ?, ?)
                ON CONFLICT(graph6, d, p) DO UPDATE SET
                    member = excluded.member,
                    certificate = excluded.certificate,
                    nodes = excluded.nodes,
                    decided_at = excluded.decided_at
            """, (graph6, d, p, int(member), certificate if member else None, nodes, datetime.now()))

    def stats(self) -> dict[str, int]:
        """Counts of cached members and non-members."""
        with self._connection() as conn:
            rows = conn.execute("""
                SELECT member, COUNT(*) as count
                FROM membership
                GROUP BY member
            """).fetchall()
            stats = {"members": 0, "non_members": 0}
            for row in rows:
                stats["members" if row["member"] else "non_members"] = row["count"]
            return stats
