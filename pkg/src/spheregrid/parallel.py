"""Deterministic in-process multi-rank runtime.

N rank programs run as isolated threads communicating only through typed,
per-(source, tag) FIFO byte-payload mailboxes.  Blocking two-sided
semantics only.  A central monitor detects deadlock: if every unfinished
rank is blocked and no blocked rank's wake condition holds, all of them
raise DeadlockDetected.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, List, Optional

from .errors import DeadlockDetected, InvalidRank, UnconsumedMessages

_GATHER_TAG = 1 << 20
_BCAST_TAG = (1 << 20) + 1


@dataclass
class Message:
    tag: int
    source: int
    payload: bytes


class _Aborted(Exception):
    """Internal: another rank failed; unwind quietly."""


class _Runtime:
    def __init__(self, nranks: int):
        self.nranks = nranks
        self.cond = threading.Condition()
        self.queues = {}  # (source, dest) -> deque of Message
        self.blocked = {}  # rank -> wake predicate (called under lock)
        self.finished = set()
        self.deadlock = False
        self.abort = False
        self.barrier_epoch = 0
        self.barrier_count = 0

    def queue(self, source: int, dest: int) -> deque:
        return self.queues.setdefault((source, dest), deque())

    def _check_deadlock(self):
        # called under lock
        if self.deadlock or self.abort:
            return
        if len(self.blocked) + len(self.finished) < self.nranks:
            return
        if len(self.finished) == self.nranks:
            return
        if any(pred() for pred in self.blocked.values()):
            return
        self.deadlock = True
        self.cond.notify_all()

    def wait_for(self, rank: int, pred: Callable[[], bool]):
        """Block rank until pred() holds; raises on deadlock/abort."""
        self.blocked[rank] = pred
        self._check_deadlock()
        try:
            while not pred():
                if self.deadlock:
                    raise DeadlockDetected(f"rank {rank} blocked with no possible sender")
                if self.abort:
                    raise _Aborted()
                self.cond.wait()
        finally:
            del self.blocked[rank]


@dataclass
class RankContext:
    rank: int
    nranks: int
    _rt: _Runtime = field(repr=False, default=None)
    messages_sent: int = 0
    bytes_sent: int = 0
    messages_received: int = 0

    def _check_peer(self, peer: int):
        if not isinstance(peer, int) or not 0 <= peer < self.nranks:
            raise InvalidRank(f"rank {peer} not in [0, {self.nranks})")
        if peer == self.rank:
            raise InvalidRank("self-send/receive not allowed")

    def send(self, dest: int, tag: int, payload: bytes):
        self._check_peer(dest)
        payload = bytes(payload)
        rt = self._rt
        with rt.cond:
            rt.queue(self.rank, dest).append(Message(tag=tag, source=self.rank, payload=payload))
            self.messages_sent += 1
            self.bytes_sent += len(payload)
            rt.cond.notify_all()

    def receive(self, source: int, tag: int) -> bytes:
        self._check_peer(source)
        rt = self._rt
        with rt.cond:
            q = rt.queue(source, self.rank)

            def _match() -> Optional[int]:
                for k, msg in enumerate(q):
                    if msg.tag == tag:
                        return k
                return None

            if _match() is None:
                rt.wait_for(self.rank, lambda: _match() is not None)
            k = _match()
            msg = q[k]
            del q[k]
            self.messages_received += 1
            return msg.payload

    def barrier(self):
        rt = self._rt
        with rt.cond:
            epoch = rt.barrier_epoch
            rt.barrier_count += 1
            if rt.barrier_count == rt.nranks:
                rt.barrier_epoch += 1
                rt.barrier_count = 0
                rt.cond.notify_all()
                return
            rt.wait_for(self.rank, lambda: rt.barrier_epoch > epoch)

    def gather_to_root(self, payload: bytes) -> Optional[List[bytes]]:
        """Collective: rank 0 returns payloads ordered by rank, others None."""
        if self.rank == 0:
            out = [bytes(payload)]
            for src in range(1, self.nranks):
                out.append(self.receive(src, _GATHER_TAG))
            return out
        self.send(0, _GATHER_TAG, payload)
        return None

    def broadcast_from_root(self, payload: Optional[bytes]) -> bytes:
        """Collective: rank 0 sends payload to everyone; all return it."""
        if self.rank == 0:
            payload = bytes(payload)
            for dest in range(1, self.nranks):
                self.send(dest, _BCAST_TAG, payload)
            return payload
        return self.receive(0, _BCAST_TAG)


def run_ranks(nranks: int, program: Callable[[RankContext], object]) -> list:
    """Run program(ctx) on every rank; results ordered by rank.

    Raises DeadlockDetected if execution can no longer progress and
    UnconsumedMessages if queued messages survive a clean shutdown.
    """
    if nranks < 1:
        raise ValueError("nranks must be >= 1")
    rt = _Runtime(nranks)
    contexts = [RankContext(rank=r, nranks=nranks, _rt=rt) for r in range(nranks)]
    results = [None] * nranks
    errors = [None] * nranks

    def _run(r):
        try:
            results[r] = program(contexts[r])
        except _Aborted:
            pass
        except BaseException as exc:  # noqa: BLE001 - re-raised below
            errors[r] = exc
            with rt.cond:
                rt.abort = True
                rt.cond.notify_all()
        finally:
            with rt.cond:
                rt.finished.add(r)
                rt._check_deadlock()
                rt.cond.notify_all()

    threads = [threading.Thread(target=_run, args=(r,), daemon=True) for r in range(nranks)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    for exc in errors:
        if exc is not None:
            raise exc
    leftover = sum(len(q) for q in rt.queues.values())
    if leftover:
        raise UnconsumedMessages(f"{leftover} messages left in queues at shutdown")
    return results
