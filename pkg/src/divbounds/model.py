"""Input types for a call on a stock paying one known cash dividend."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields


class ValidationError(ValueError):
    """Raised for economically invalid inputs; ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(message)
        self.field = field


class DomainError(ValueError):
    """Raised when a formula is evaluated outside its domain."""


@dataclass(frozen=True)
class MarketParams:
    spot: float
    rate: float
    volatility: float
    drift: float = 0.0  # physical drift; never used for pricing


@dataclass(frozen=True)
class CallSpec:
    strike: float
    maturity: float


@dataclass(frozen=True)
class DividendEvent:
    amount: float
    time: float


@dataclass(frozen=True)
class PricingProblem:
    market: MarketParams
    call: CallSpec
    dividend: DividendEvent

    # shorthands used by the formulas
    @property
    def spot(self) -> float:
        return self.market.spot

    @property
    def strike(self) -> float:
        return self.call.strike

    @property
    def rate(self) -> float:
        return self.market.rate

    @property
    def vol(self) -> float:
        return self.market.volatility

    @property
    def maturity(self) -> float:
        return self.call.maturity

    @property
    def div_amount(self) -> float:
        return self.dividend.amount

    @property
    def div_time(self) -> float:
        return self.dividend.time

    @property
    def residual_time(self) -> float:
        """Time left between the dividend and expiry, T - tau."""
        return self.call.maturity - self.dividend.time

    @property
    def discounted_strike(self) -> float:
        """K exp(-r (T - tau)), the strike seen from the dividend date."""
        return self.call.strike * math.exp(-self.market.rate * self.residual_time)

    @classmethod
    def from_values(
        cls,
        spot: float,
        strike: float,
        rate: float,
        volatility: float,
        maturity: float,
        dividend_amount: float,
        dividend_time: float,
        drift: float = 0.0,
    ) -> "PricingProblem":
        return cls(
            MarketParams(float(spot), float(rate), float(volatility), float(drift)),
            CallSpec(float(strike), float(maturity)),
            DividendEvent(float(dividend_amount), float(dividend_time)),
        )

    def to_dict(self) -> dict:
        """Flat JSON-ready mapping; keys match the CLI params file."""
        return {
            "spot": self.spot,
            "rate": self.rate,
            "volatility": self.vol,
            "drift": self.market.drift,
            "strike": self.strike,
            "maturity": self.maturity,
            "dividend_amount": self.div_amount,
            "dividend_time": self.div_time,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PricingProblem":
        known = set(JSON_KEYS)
        unknown = set(data) - known
        if unknown:
            raise ValidationError(sorted(unknown)[0], f"unknown parameter(s): {', '.join(sorted(unknown))}")
        missing = [k for k in JSON_KEYS if k != "drift" and k not in data]
        if missing:
            raise ValidationError(missing[0], f"missing parameter(s): {', '.join(missing)}")
        try:
            values = {k: float(data[k]) for k in data}
        except (TypeError, ValueError) as exc:
            raise ValidationError("params", f"non-numeric parameter: {exc}") from None
        return cls.from_values(**values)

    def replace(self, **changes) -> "PricingProblem":
        """Copy with some flat fields changed (same keys as ``to_dict``)."""
        data = self.to_dict()
        data.update(changes)
        return PricingProblem.from_dict(data)


JSON_KEYS = (
    "spot",
    "rate",
    "volatility",
    "drift",
    "strike",
    "maturity",
    "dividend_amount",
    "dividend_time",
)


def validate(problem: PricingProblem) -> PricingProblem:
    """Check every economic invariant and return ``problem`` unchanged.

    Raises :class:`ValidationError` naming the first offending field.
    """
    for part in (problem.market, problem.call, problem.dividend):
        for f in fields(part):
            value = getattr(part, f.name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                name = f.name if part is not problem.dividend else f"dividend_{f.name}"
                raise ValidationError(name, f"{name} must be finite")

    if problem.spot <= 0:
        raise ValidationError("spot", "spot must be positive")
    if problem.strike <= 0:
        raise ValidationError("strike", "strike must be positive")
    if problem.vol <= 0:
        raise ValidationError("volatility", "volatility must be positive")
    if problem.maturity <= 0:
        raise ValidationError("maturity", "maturity must be positive")
    if not 0 < problem.div_time < problem.maturity:
        raise ValidationError("dividend_time", "dividend time outside option life")
    if problem.div_amount < 0:
        raise ValidationError("dividend_amount", "dividend amount must be non-negative")
    return problem
