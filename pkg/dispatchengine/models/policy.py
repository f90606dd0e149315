from pydantic import BaseModel, ConfigDict, Field


class ConfidencePolicy(BaseModel):
    """Thresholds that turn trial confidences into dialogue decisions"""

    model_config = ConfigDict(frozen=True)

    lambda1: float = Field(
        default=0.70, gt=0.0, lt=1.0, description="Itemization threshold; slot done iff conf_1 > lambda1"
    )
    lambda2: float = Field(
        default=0.85, gt=0.0, lt=1.0, description="Type threshold; type confirmed iff conf_2 > lambda2"
    )
    trials: int = Field(default=10, gt=0, description="Stochastic trials per decision (seeds 1..T)")
    clarification_cap: int = Field(
        default=3, gt=0, description="Clarifications per field before handover"
    )
    human_request_repeats: int = Field(
        default=2, gt=0, description="Human requests needed to trigger handover"
    )
    clarification_prefix: str = Field(
        default="Sorry, I didn't quite catch that.",
        description="Prepended to a field prompt when clarifying",
    )

    def trial_seeds(self) -> range:
        return range(1, self.trials + 1)

    def turn_bound(self, slot_count: int) -> int:
        """Maximum caller turns for a session with ``slot_count`` fields."""
        return slot_count * (self.clarification_cap + 1) + 1
