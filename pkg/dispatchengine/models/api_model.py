from typing import List, Optional, Union

from pydantic import BaseModel, Field, field_validator


class InferenceRequest(BaseModel):
    """Request body sent to a remote model service"""

    task: str = Field(description="classify or extract")
    question: str = Field(description="Label id for classification, question text for extraction")
    context: str = Field(description="Text the model reads")
    trial_seed: int = Field(description="Seed selecting the dropout mask of this trial")
    field_id: Optional[str] = Field(default=None, description="Field being extracted")
    exclude: List[str] = Field(
        default_factory=list, description="Labels already identified by earlier layers"
    )


class InferenceResponse(BaseModel):
    """Response body of a remote model service"""

    output: Optional[Union[str, bool]] = Field(
        default=None, description="Extracted span or class decision"
    )
    probability: Optional[float] = Field(
        default=None, description="Probability of the positive class"
    )
    error: Optional[str] = Field(default=None, description="Error message if any")

    @field_validator("probability")
    @classmethod
    def _in_unit_interval(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not 0.0 <= v <= 1.0:
            raise ValueError(f"probability {v} outside [0, 1]")
        return v
