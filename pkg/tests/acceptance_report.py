"""Shared sink for the acceptance suite's one-line verdicts.

Each acceptance test records exactly one PASS or FAIL line here before
asserting; the conftest terminal-summary hook prints the collected
lines at the end of the run so the verdicts are visible even when
pytest captures stdout.
"""

LINES: list[str] = []


def record(number: int, name: str, ok: bool, detail: str) -> str:
    line = f"criterion {number} ({name}): {'PASS' if ok else 'FAIL'} - {detail}"
    LINES.append(line)
    print(line)
    return line
