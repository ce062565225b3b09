"""Scripted decision makers for batch runs of the concessions engine."""

from __future__ import annotations

import concurrent.futures
from collections.abc import Callable
from dataclasses import dataclass

from .engine import (
    AcceptCost,
    CaseKind,
    Decision,
    DecisionPrompt,
    DeferTasks,
    StateSummary,
)
from .model import ZERO_TOL


class Abstain:
    """Returned when a policy has no legal answer; the session stalls."""

    def __repr__(self) -> str:  # pragma: no cover
        return "Abstain"


ABSTAIN = Abstain()


def _defer_largest_demand(prompt: DecisionPrompt, summary: StateSummary) -> Decision | Abstain:
    """Defer the single ready task with the largest total demand (ties by id).

    Deferring frees the most workers per prompt. Respects the progress rule:
    with one ready task and nothing running there is nothing legal to defer.
    """
    if len(prompt.ready) <= 1 and summary.running_tasks == 0:
        return ABSTAIN
    victim = min(prompt.ready_demand_totals, key=lambda pair: (-pair[1], pair[0]))
    return DeferTasks([victim[0]])


@dataclass(frozen=True)
class AlwaysAccept:
    """Accept every cost overrun; on infeasibility defer the hungriest task."""

    def decide(self, prompt: DecisionPrompt, summary: StateSummary) -> Decision | Abstain:
        if prompt.case is CaseKind.COST_OVERRUN:
            return AcceptCost()
        return _defer_largest_demand(prompt, summary)


@dataclass(frozen=True)
class BudgetCap:
    """Accept overruns only while the committed cost stays within the limit."""

    limit: float

    def decide(self, prompt: DecisionPrompt, summary: StateSummary) -> Decision | Abstain:
        if prompt.case is CaseKind.COST_OVERRUN:
            projected = summary.committed_cost + float(prompt.proposed_cost or 0.0)
            if projected <= self.limit + ZERO_TOL:
                return AcceptCost()
        return _defer_largest_demand(prompt, summary)


@dataclass(frozen=True)
class DeadlineCap:
    """Avoid deferrals whose delay bound would overrun the deadline."""

    limit: float

    def decide(self, prompt: DecisionPrompt, summary: StateSummary) -> Decision | Abstain:
        headroom = self.limit - summary.clock
        if prompt.case is CaseKind.COST_OVERRUN:
            if prompt.defer_delay_bound > headroom + ZERO_TOL:
                return AcceptCost()
            deferral = _defer_largest_demand(prompt, summary)
            return deferral if not isinstance(deferral, Abstain) else AcceptCost()
        if prompt.defer_delay_bound > headroom + ZERO_TOL:
            return ABSTAIN
        return _defer_largest_demand(prompt, summary)


@dataclass(frozen=True)
class External:
    """Forwards prompts to an out-of-process decision source (e.g. a UI).

    The handler blocks the session's writer; with a timeout configured, a
    late or missing answer becomes an abstention.
    """

    handler: Callable[[DecisionPrompt, StateSummary], Decision | Abstain | None]
    timeout: float | None = None

    def decide(self, prompt: DecisionPrompt, summary: StateSummary) -> Decision | Abstain:
        if self.timeout is None:
            answer = self.handler(prompt, summary)
            return answer if answer is not None else ABSTAIN
        with concurrent.futures.ThreadPoolExecutor(max_workers=1) as pool:
            future = pool.submit(self.handler, prompt, summary)
            try:
                answer = future.result(timeout=self.timeout)
            except concurrent.futures.TimeoutError:
                future.cancel()
                return ABSTAIN
        return answer if answer is not None else ABSTAIN


Policy = AlwaysAccept | BudgetCap | DeadlineCap | External


def decide(policy: Policy, prompt: DecisionPrompt, summary: StateSummary) -> Decision | Abstain:
    return policy.decide(prompt, summary)


def parse_policy(
    spec: str,
    external_handler: Callable[[DecisionPrompt, StateSummary], Decision | Abstain | None]
    | None = None,
) -> Policy:
    """Parse a policy spec: always-accept, budget:<real>, deadline:<real>, external."""
    text = spec.strip().lower()
    if text == "always-accept":
        return AlwaysAccept()
    if text.startswith("budget:"):
        return BudgetCap(float(text.split(":", 1)[1]))
    if text.startswith("deadline:"):
        return DeadlineCap(float(text.split(":", 1)[1]))
    if text == "external":
        if external_handler is None:
            raise ValueError("policy 'external' needs an interactive decision source")
        return External(external_handler)
    raise ValueError(f"unknown policy spec {spec!r}")


__all__ = [
    "ABSTAIN",
    "Abstain",
    "AlwaysAccept",
    "BudgetCap",
    "DeadlineCap",
    "External",
    "Policy",
    "decide",
    "parse_policy",
]
