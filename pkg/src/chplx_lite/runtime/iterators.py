"""Pull-based iterators.

Chapel ``iter`` procedures become Python generators; :func:`make_iter` wraps
any producer in an object with an explicit ``next()`` that returns ``None``
once the sequence is exhausted.
"""

from __future__ import annotations

_DONE = object()


class PullIterator:
    def __init__(self, producer):
        if callable(producer) and not hasattr(producer, "__next__"):
            producer = producer()
        self._it = iter(producer)
        self._peeked = _DONE
        self.exhausted = False

    def next(self):
        """Next yielded value, or ``None`` when the producer has finished."""
        if self._peeked is not _DONE:
            value, self._peeked = self._peeked, _DONE
            return value
        if self.exhausted:
            return None
        try:
            return next(self._it)
        except StopIteration:
            self.exhausted = True
            return None

    def has_next(self) -> bool:
        if self._peeked is not _DONE:
            return True
        if self.exhausted:
            return False
        try:
            self._peeked = next(self._it)
        except StopIteration:
            self.exhausted = True
            return False
        return True

    def __iter__(self):
        return self

    def __next__(self):
        if not self.has_next():
            raise StopIteration
        value, self._peeked = self._peeked, _DONE
        return value


def make_iter(producer) -> PullIterator:
    return PullIterator(producer)
