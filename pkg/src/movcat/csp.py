"""Backtracking search over functional constraints ``value[t] = op ∘ value[s]``.

Both the object-level uniform movability problem and the finite thread
problem for inverse systems have exactly this shape: one variable per
morphism (or level), a finite domain of candidate morphisms, and binary
constraints saying one value is obtained from another by post-composition.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Sequence


@dataclass(frozen=True)
class Link:
    """Constraint ``value[target] == op ∘ value[source]``."""

    target: Hashable
    op: Hashable
    source: Hashable
    tag: tuple = ()


@dataclass
class Failure:
    reason: str  # "empty domain" | "contradiction" | "exhausted"
    variable: Hashable = None
    link: Link | None = None
    nodes: int = 0


@dataclass
class Outcome:
    solution: dict | None
    failure: Failure | None = None
    nodes: int = 0
    stats: dict = field(default_factory=dict)


def _propagate(domains, links, watch, compose, queue) -> Link | None:
    """Arc consistency; narrows ``domains`` in place, returns a contradicting link or None."""
    pending = set(queue)
    while queue:
        i = queue.popleft()
        pending.discard(i)
        link = links[i]
        dt, ds = domains[link.target], domains[link.source]
        images = {}
        for h in ds:
            images.setdefault(compose(link.op, h), []).append(h)
        keep_t = [v for v in dt if v in images]
        allowed = set(keep_t)
        keep_s = [h for h in ds if compose(link.op, h) in allowed]
        if not keep_t or not keep_s:
            return link
        for var, new, old in ((link.target, keep_t, dt), (link.source, keep_s, ds)):
            if len(new) != len(old):
                domains[var] = new
                for j in watch[var]:
                    if j not in pending:
                        pending.add(j)
                        queue.append(j)
    return None


def solve(
    variables: Sequence[Hashable],
    domains: Mapping[Hashable, Sequence],
    links: Sequence[Link],
    compose: Callable[[Hashable, Hashable], Hashable],
) -> Outcome:
    """First solution in variable/value order, or a failure record.

    The root failure reason is reported precisely: an initially empty domain,
    or the link on which root propagation wiped out a domain.  Failures deeper
    in the tree are reported as ``"exhausted"``.
    """
    links = list(links)
    watch = defaultdict(list)
    for i, link in enumerate(links):
        watch[link.target].append(i)
        watch[link.source].append(i)
    doms = {v: list(domains[v]) for v in variables}
    for v in variables:
        if not doms[v]:
            return Outcome(None, Failure("empty domain", variable=v))
    bad = _propagate(doms, links, watch, compose, deque(range(len(links))))
    if bad is not None:
        return Outcome(None, Failure("contradiction", link=bad))

    nodes = 0

    def search(doms):
        nonlocal nodes
        nodes += 1
        for v in variables:
            if len(doms[v]) > 1:
                break
        else:
            return {v: doms[v][0] for v in variables}
        for value in doms[v]:
            trial = dict(doms)
            trial[v] = [value]
            if _propagate(trial, links, watch, compose, deque(watch[v])) is None:
                found = search(trial)
                if found is not None:
                    return found
        return None

    solution = search(doms)
    if solution is None:
        return Outcome(None, Failure("exhausted", nodes=nodes), nodes=nodes)
    return Outcome(solution, None, nodes=nodes)
