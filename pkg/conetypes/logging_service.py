"""Structured log entries for commands and routes, stored in ``system_log``."""
from __future__ import annotations

from typing import Optional
from uuid import uuid4

from flask import current_app
from sqlalchemy import or_

from .extensions import db
from .models import SystemLog, utc_isoformat

LEVELS = ("info", "warn", "error")
RESULTS = {"info": "success", "warn": "warn", "error": "failure"}
TITLE_LIMIT = 120


class LogManager:
    """Write and query the log table on behalf of every blueprint."""

    def __init__(self) -> None:
        self.app = None
        self.available_components: list[str] = []

    def init_app(self, app) -> None:
        self.app = app

    def register_component(self, component: str) -> None:
        if component not in self.available_components:
            self.available_components.append(component)
            self.available_components.sort()

    def record(
        self,
        *,
        component: str,
        action: str,
        level: str = "info",
        result: Optional[str] = None,
        title: str,
        user_summary: str,
        technical_details: str,
        correlation_id: Optional[str] = None,
    ) -> SystemLog:
        """Store one entry and return it.

        ``result`` defaults to the outcome implied by ``level``. Entries past
        ``LOG_RETENTION`` are dropped oldest first in the same transaction.
        """
        if level not in LEVELS:
            raise ValueError(f"Unsupported level '{level}'")

        self.register_component(component)
        entry = SystemLog(
            component=component,
            action=action,
            level=level,
            result=result or RESULTS[level],
            title=title[:TITLE_LIMIT],
            user_summary=user_summary,
            technical_details=technical_details,
            correlation_id=correlation_id or str(uuid4()),
            environment=current_app.config.get("ENVIRONMENT", "development"),
        )
        db.session.add(entry)
        db.session.flush()
        self._enforce_retention(current_app.config.get("LOG_RETENTION", 200))
        db.session.commit()
        return entry

    def record_failure(
        self, component: str, action: str, error: Exception, *, level: str = "error", title: str
    ) -> SystemLog:
        """Store a failed command or request, keeping the exception class for triage."""
        return self.record(
            component=component,
            action=action,
            level=level,
            result="failure",
            title=title,
            user_summary=str(error),
            technical_details=f"{error.__class__.__name__}: {error}",
        )

    def _enforce_retention(self, retention: int) -> None:
        newest = (
            db.session.query(SystemLog.id)
            .order_by(*SystemLog.newest_first())
            .limit(retention)
        )
        SystemLog.query.filter(SystemLog.id.not_in(newest.scalar_subquery())).delete(
            synchronize_session=False
        )

    def fetch_logs(
        self,
        *,
        level: Optional[str] = None,
        component: Optional[str] = None,
        search: Optional[str] = None,
        limit: int = 50,
    ) -> list[dict[str, str]]:
        """Newest entries first, filtered by level, component and free text."""
        query = SystemLog.query
        if level in LEVELS:
            query = query.filter(SystemLog.level == level)
        if component:
            query = query.filter(SystemLog.component == component)
        if search:
            pattern = f"%{search}%"
            query = query.filter(
                or_(
                    *(
                        column.ilike(pattern)
                        for column in (
                            SystemLog.title,
                            SystemLog.user_summary,
                            SystemLog.technical_details,
                            SystemLog.correlation_id,
                        )
                    )
                )
            )
        entries = query.order_by(*SystemLog.newest_first()).limit(limit)
        return [entry.serialize() for entry in entries]

    def latest_timestamp(self) -> Optional[str]:
        entry = SystemLog.query.order_by(*SystemLog.newest_first()).first()
        return utc_isoformat(entry.timestamp) if entry else None


log_manager = LogManager()
