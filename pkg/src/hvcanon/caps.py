"""Enumeration caps, overridable through the ``HVCANON_CAP`` environment variable.

``HVCANON_CAP`` is either a bare integer (the strategy cap) or a comma list
such as ``subsets=10,strategies=5000``.
"""

import os

DEFAULTS = {"subsets": 8, "strategies": 10**6}


def get_cap(name: str) -> int:
    value = DEFAULTS[name]
    raw = os.environ.get("HVCANON_CAP", "").strip()
    if not raw:
        return value
    if raw.isdigit():
        return int(raw) if name == "strategies" else value
    for item in raw.split(","):
        key, _, num = item.partition("=")
        if key.strip() == name:
            try:
                return int(num)
            except ValueError:
                raise ValueError(f"bad HVCANON_CAP entry {item!r}") from None
    return value
