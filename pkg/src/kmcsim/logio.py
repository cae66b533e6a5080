"""Activity-log serialization.

The log is the compatibility contract with downstream consumers: a
UTF-8 CSV with LF line endings and the fixed header
``time,initiating_token,action,value,receiving_token``.

* ``time``: ``YYYY-MM-DD HH:MM:SS.ss`` wall-clock timestamps at
  centisecond precision, nondecreasing in file order.
* ``initiating_token``: pseudonymous account token, ``C_`` plus the
  first 8 hex characters of the SHA-1 of the decimal numeric id.
* ``action``: enumerated action name; p2p transfers are logged as
  ``p2p_sent``.
* ``value``: money with exactly two decimals, ``True``/``False`` for
  identity checks, empty for join events.
* ``receiving_token``: present for p2p transfers only.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Iterable

from . import actions as act
from .engine import SimEvent

HEADER = "time,initiating_token,action,value,receiving_token"
_HEADER_FIELDS = tuple(HEADER.split(","))

_TOKEN_RE = re.compile(r"^C_[0-9a-z]{8}$")
_MONEY_RE = re.compile(r"^\d+\.\d{2}$")
_TIME_RE = re.compile(
    r"^(\d{4})-(\d{2})-(\d{2}) (\d{2}):(\d{2}):(\d{2})\.(\d{2})$"
)

_CS_PER_DAY = 24 * 60 * 60 * 100

_token_cache: dict[int, str] = {}

_LOG_ACTIONS = frozenset(
    [act.log_name(a) for a in act.ALL_ACTIONS] + [act.CUSTOMER_JOIN]
)


class LogFormatError(ValueError):
    """Raised for a structurally invalid log file."""


def token_for(numeric_id: int) -> str:
    """Stable pseudonymous token for an account id."""
    tok = _token_cache.get(numeric_id)
    if tok is None:
        digest = hashlib.sha1(str(numeric_id).encode("ascii")).hexdigest()
        tok = "C_" + digest[:8]
        _token_cache[numeric_id] = tok
    return tok


def format_timestamp(epoch: datetime, sim_time_days: float) -> str:
    """Render epoch + sim_time as wall-clock text, centisecond precision."""
    cs = round(sim_time_days * _CS_PER_DAY)
    moment = epoch + timedelta(microseconds=cs * 10_000)
    return f"{moment:%Y-%m-%d %H:%M:%S}.{moment.microsecond // 10_000:02d}"


def format_money(value_cents: int) -> str:
    """Integer cents to two-decimal text."""
    if value_cents < 0:
        raise ValueError(f"negative amount: {value_cents}")
    return f"{value_cents // 100}.{value_cents % 100:02d}"


def parse_money(text: str) -> int:
    """Two-decimal text to integer cents; strict format."""
    if not _MONEY_RE.match(text):
        raise ValueError(f"invalid money literal: {text!r}")
    whole, frac = text.split(".")
    return int(whole) * 100 + int(frac)


def parse_timestamp_cs(text: str) -> int:
    """Timestamp text to absolute integer centiseconds (exact)."""
    m = _TIME_RE.match(text)
    if not m:
        raise ValueError(f"invalid timestamp: {text!r}")
    year, month, day, hh, mm, ss, cc = (int(g) for g in m.groups())
    days = datetime(year, month, day).toordinal()
    return ((days * 86_400) + hh * 3600 + mm * 60 + ss) * 100 + cc


def event_row(event: SimEvent, epoch: datetime) -> str:
    """One CSV line (no newline) for an executed event."""
    if event.action == act.ID_VERIFICATION:
        value = "True" if event.success else "False"
    elif event.value_cents is not None:
        value = format_money(event.value_cents)
    else:
        value = ""
    receiving = token_for(event.receiver_id) if event.receiver_id is not None else ""
    return ",".join((
        format_timestamp(epoch, event.sim_time),
        token_for(event.numeric_id),
        act.log_name(event.action),
        value,
        receiving,
    ))


def write_log(events: Iterable[SimEvent], epoch: datetime, path: str,
              *, header: bool = True) -> int:
    """Write the whole log; returns the number of data rows.

    Output is buffered and flushed on close, including on error paths.
    """
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if header:
            fh.write(HEADER + "\n")
        for event in events:
            fh.write(event_row(event, epoch) + "\n")
            count += 1
    return count


@dataclass(frozen=True)
class LogRecord:
    """One parsed log row."""

    time_text: str
    time_cs: int               # absolute centiseconds, exact integer
    token: str
    action: str                # log-file spelling (p2p_sent etc.)
    value_text: str
    receiving_token: str | None

    @property
    def value_cents(self) -> int:
        return parse_money(self.value_text)

    @property
    def id_check_passed(self) -> bool:
        return self.value_text == "True"


def parse_row(line: str, row_number: int) -> LogRecord:
    """Validate and parse one data row; raises LogFormatError."""
    fields = line.split(",")
    if len(fields) != 5:
        raise LogFormatError(
            f"row {row_number}: expected 5 fields, got {len(fields)}"
        )
    time_text, token, action, value, receiving = fields
    try:
        time_cs = parse_timestamp_cs(time_text)
    except ValueError as e:
        raise LogFormatError(f"row {row_number}: {e}") from e
    if not _TOKEN_RE.match(token):
        raise LogFormatError(f"row {row_number}: invalid token {token!r}")
    if action not in _LOG_ACTIONS:
        raise LogFormatError(f"row {row_number}: unknown action {action!r}")

    if action == act.ID_VERIFICATION:
        if value not in ("True", "False"):
            raise LogFormatError(
                f"row {row_number}: id_verification value must be True/False, "
                f"got {value!r}"
            )
    elif action == act.CUSTOMER_JOIN:
        if value != "":
            raise LogFormatError(
                f"row {row_number}: customer_join rows carry no value, "
                f"got {value!r}"
            )
    else:
        if not _MONEY_RE.match(value):
            raise LogFormatError(
                f"row {row_number}: expected a two-decimal amount, got {value!r}"
            )

    if action == act.log_name(act.P2P_SEND):
        if not _TOKEN_RE.match(receiving):
            raise LogFormatError(
                f"row {row_number}: p2p_sent needs a receiving token, "
                f"got {receiving!r}"
            )
        receiver: str | None = receiving
    else:
        if receiving != "":
            raise LogFormatError(
                f"row {row_number}: receiving_token must be empty for {action}"
            )
        receiver = None

    return LogRecord(time_text=time_text, time_cs=time_cs, token=token,
                     action=action, value_text=value, receiving_token=receiver)


def read_log(path: str) -> list[LogRecord]:
    """Parse a log file; accepts the header row and headerless files."""
    records: list[LogRecord] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row_number, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if row_number == 1 and tuple(line.split(",")) == _HEADER_FIELDS:
                continue
            if line == "":
                continue
            records.append(parse_row(line, row_number))
    return records
