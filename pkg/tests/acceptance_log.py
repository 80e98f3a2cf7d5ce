"""Pass/fail record for the acceptance criteria, printed after the run."""

import functools

RESULTS: dict[int, tuple[str, bool, str]] = {}


def criterion(number: int, title: str):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                RESULTS[number] = (title, False, f"{type(exc).__name__}: {exc}".splitlines()[0][:120])
                raise
            RESULTS[number] = (title, True, detail or "")
        return wrapper
    return deco
