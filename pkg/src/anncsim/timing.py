"""Interface timing checks for the event-interface bus and the core-facing
register clock domain.

Two checks are implemented:

* a source-synchronous data check bounding the skew of the event-interface
  signals (``address[5:0]``, ``select[4:0]``, ``stable``) against the
  ``pulse`` strobe, together with a total-spread budget at the core pins,
* a setup condition for the core-facing registers driven from a processor
  partition, expressed through clock-tree and data-path delay terms.

All arithmetic runs on integer picoseconds so results are bit-exact; in
particular the setup slack is computed with the in-partition clock-tree
delay included on both sides and is therefore exactly independent of it.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .errors import ParseError

# Data signals checked against the pulse strobe, in report order.
SKEW_SIGNALS = tuple(
    [f"address{i}" for i in range(6)] + [f"select{i}" for i in range(5)] + ["stable"]
)

SETUP_PARAMS = ("t_cp", "delta_t_cp", "t_dp", "t_dt", "t_co", "t_sut", "t_ct", "t_per")

SKEW_LIMIT_DEFAULT = 150e-12
PIN_BUDGET_DEFAULT = 200e-12
CLOCK_SKEW_ALLOWANCE_DEFAULT = 50e-12


def _to_ps(seconds: float) -> int:
    return round(seconds * 1e12)


@dataclass
class SkewCheckInput:
    """Arrival times of one corner's event-interface signals.

    Arrivals are absolute times in seconds; ``pulse_arrival`` is the strobe
    reference. Limits default to a 150 ps per-signal window and a 200 ps pin
    budget with a 50 ps clock-skew allowance reserved for the launching
    registers.
    """

    arrivals: Dict[str, float]
    pulse_arrival: float
    skew_limit: float = SKEW_LIMIT_DEFAULT
    pin_budget: float = PIN_BUDGET_DEFAULT
    clock_skew_allowance: float = CLOCK_SKEW_ALLOWANCE_DEFAULT

    def __post_init__(self):
        for name in self.arrivals:
            if name not in SKEW_SIGNALS:
                raise ValueError(f"unknown skew signal {name!r}")
        if self.skew_limit + self.clock_skew_allowance > self.pin_budget:
            raise ValueError(
                "skew_limit + clock_skew_allowance exceeds pin_budget"
            )


@dataclass
class SkewCheckResult:
    signal_pass: Dict[str, bool]
    signal_skew: Dict[str, float]
    spread: float
    budget_pass: bool
    passed: bool


@dataclass
class SetupCheckInput:
    """Delay terms of the register setup condition, all in seconds.

    ``t_cp`` is the in-partition clock-tree delay, ``delta_t_cp`` the skew
    remaining after clock-tree synthesis, ``t_dp`` the in-partition data-path
    delay, ``t_dt`` the fixed partition-to-core signal delay, ``t_co`` the
    launching register's clock-to-output time, ``t_sut`` the capturing
    register's setup time, ``t_ct`` the clock-tree portion between partition
    and core, and ``t_per`` the clock period.
    """

    t_cp: float
    delta_t_cp: float
    t_dp: float
    t_dt: float
    t_co: float
    t_sut: float
    t_ct: float
    t_per: float

    def __post_init__(self):
        if self.t_per <= 0:
            raise ValueError("t_per must be positive")
        for name in SETUP_PARAMS:
            if name != "t_per" and getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


def check_data_skew(inp: SkewCheckInput) -> SkewCheckResult:
    """Check each signal's arrival against the per-signal window around the
    pulse strobe and the total arrival spread against the pin budget.

    A signal passes iff |arrival - pulse_arrival| <= skew_limit. The spread
    statistic is max - min over the data-signal arrivals; it must stay within
    the pin budget. A failed check is a result, not an exception.
    """

    pulse_ps = _to_ps(inp.pulse_arrival)
    limit_ps = _to_ps(inp.skew_limit)
    budget_ps = _to_ps(inp.pin_budget)

    signal_pass = {}
    signal_skew = {}
    arrival_ps = {}
    for name, arrival in inp.arrivals.items():
        ps = _to_ps(arrival)
        arrival_ps[name] = ps
        skew = ps - pulse_ps
        signal_skew[name] = skew * 1e-12
        signal_pass[name] = abs(skew) <= limit_ps

    if arrival_ps:
        spread_ps = max(arrival_ps.values()) - min(arrival_ps.values())
    else:
        spread_ps = 0
    budget_pass = spread_ps <= budget_ps

    return SkewCheckResult(
        signal_pass=signal_pass,
        signal_skew=signal_skew,
        spread=spread_ps * 1e-12,
        budget_pass=budget_pass,
        passed=budget_pass and all(signal_pass.values()),
    )


def check_setup(inp: SetupCheckInput) -> float:
    """Return the signed setup slack in seconds.

    slack = (t_cp + t_ct + t_per) - ((t_cp + delta_t_cp) + t_dp + t_dt
            + t_co + t_sut)

    Computed on integer picoseconds with t_cp present on both sides, so the
    result is bit-exactly independent of t_cp. Pass iff slack >= 0.
    """

    t_cp = _to_ps(inp.t_cp)
    required = t_cp + _to_ps(inp.t_ct) + _to_ps(inp.t_per)
    arrival = (
        (t_cp + _to_ps(inp.delta_t_cp))
        + _to_ps(inp.t_dp)
        + _to_ps(inp.t_dt)
        + _to_ps(inp.t_co)
        + _to_ps(inp.t_sut)
    )
    return (required - arrival) * 1e-12


@dataclass
class CornerChecks:
    """Parsed timing inputs of one process corner."""

    corner: str
    skew: Optional[SkewCheckInput] = None
    setup: Optional[SetupCheckInput] = None


_LIMIT_KEYS = ("skew_limit", "pin_budget", "clock_skew_allowance")


def parse_timing_report(text: str) -> List[CornerChecks]:
    """Parse a line-oriented timing report into per-corner check inputs.

    Each line reads ``corner,name,value_ps``; blank lines and ``#`` comments
    are skipped. Signal names (``pulse``, ``stable``, ``addressN``,
    ``selectN``) collect into a skew-check input, parameter names (``t_*``
    and limit overrides) into a setup-check input. Unknown names and
    malformed values raise :class:`ParseError` with the line number; a corner
    with arrival rows but no ``pulse`` row is rejected.
    """

    corners: Dict[str, dict] = {}
    order: List[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise ParseError(lineno, f"expected 'corner,name,value_ps', got {raw!r}")
        corner, name, value_text = parts
        try:
            value_ps = float(value_text)
        except ValueError:
            raise ParseError(lineno, f"malformed number {value_text!r}") from None
        if corner not in corners:
            corners[corner] = {
                "arrivals": {},
                "pulse": None,
                "params": {},
                "limits": {},
                "line": lineno,
            }
            order.append(corner)
        entry = corners[corner]
        if name == "pulse":
            entry["pulse"] = value_ps
        elif name in SKEW_SIGNALS:
            entry["arrivals"][name] = value_ps
        elif name in SETUP_PARAMS:
            entry["params"][name] = value_ps
        elif name in _LIMIT_KEYS:
            entry["limits"][name] = value_ps
        else:
            raise ParseError(lineno, f"unknown field {name!r}")

    results = []
    for corner in order:
        entry = corners[corner]
        checks = CornerChecks(corner=corner)
        if entry["arrivals"] or entry["pulse"] is not None:
            if entry["pulse"] is None:
                raise ParseError(entry["line"], f"corner {corner!r} has no 'pulse' row")
            limits = {k: v * 1e-12 for k, v in entry["limits"].items()}
            checks.skew = SkewCheckInput(
                arrivals={k: v * 1e-12 for k, v in entry["arrivals"].items()},
                pulse_arrival=entry["pulse"] * 1e-12,
                **limits,
            )
        if entry["params"]:
            missing = [p for p in SETUP_PARAMS if p not in entry["params"]]
            if missing:
                raise ParseError(
                    entry["line"],
                    f"corner {corner!r} missing setup parameters {missing}",
                )
            checks.setup = SetupCheckInput(
                **{k: v * 1e-12 for k, v in entry["params"].items()}
            )
        results.append(checks)
    return results


def serialize_timing_report(corners: List[CornerChecks]) -> str:
    """Inverse of :func:`parse_timing_report` (values rendered in ps)."""

    lines = []
    for checks in corners:
        if checks.skew is not None:
            lines.append(f"{checks.corner},pulse,{checks.skew.pulse_arrival * 1e12:g}")
            for name in SKEW_SIGNALS:
                if name in checks.skew.arrivals:
                    value = checks.skew.arrivals[name] * 1e12
                    lines.append(f"{checks.corner},{name},{value:g}")
            defaults = (
                SKEW_LIMIT_DEFAULT,
                PIN_BUDGET_DEFAULT,
                CLOCK_SKEW_ALLOWANCE_DEFAULT,
            )
            for key, default in zip(_LIMIT_KEYS, defaults):
                value = getattr(checks.skew, key)
                if value != default:
                    lines.append(f"{checks.corner},{key},{value * 1e12:g}")
        if checks.setup is not None:
            for name in SETUP_PARAMS:
                value = getattr(checks.setup, name) * 1e12
                lines.append(f"{checks.corner},{name},{value:g}")
    return "\n".join(lines) + "\n"


@dataclass
class CornerResult:
    corner: str
    skew: Optional[SkewCheckResult]
    setup_slack: Optional[float]
    passed: bool = field(init=False)

    def __post_init__(self):
        ok = True
        if self.skew is not None:
            ok = ok and self.skew.passed
        if self.setup_slack is not None:
            ok = ok and self.setup_slack >= 0
        self.passed = ok


def run_checks(corners: List[CornerChecks]) -> List[CornerResult]:
    """Evaluate every parsed corner; failing corners stay in the list."""

    results = []
    for checks in corners:
        skew = check_data_skew(checks.skew) if checks.skew is not None else None
        slack = check_setup(checks.setup) if checks.setup is not None else None
        results.append(CornerResult(corner=checks.corner, skew=skew, setup_slack=slack))
    return results
