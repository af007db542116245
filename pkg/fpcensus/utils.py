"""Structured logging and timing helpers."""

import json
import logging
from datetime import datetime, timezone
from typing import Any, Dict

from .config import get_settings

settings = get_settings()

# Configure logging
logging.basicConfig(
    level=getattr(logging, settings.log_level.upper(), logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger("fpcensus")


def log_structured(event: str, data: Dict[str, Any], level: int = logging.INFO):
    """Log structured events as JSON."""

    if not settings.log_json:
        logger.log(level, "%s %s", event, data)
        return

    log_entry = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "event": event,
        **data
    }

    logger.log(level, json.dumps(log_entry, default=str))


def format_processing_time(seconds: float) -> str:
    """Format processing time for display."""

    if seconds < 1:
        return f"{seconds*1000:.0f}ms"
    elif seconds < 60:
        return f"{seconds:.1f}s"
    else:
        minutes = int(seconds // 60)
        remaining_seconds = seconds % 60
        return f"{minutes}m {remaining_seconds:.1f}s"
