from pydantic import BaseModel, ConfigDict, Field


class RangeSample(BaseModel):
    """
    One set of noisy range estimates, one per antenna in array order.

    `seed_tag` and `trial` identify the counter-based noise stream that produced
    it; `noiseless` marks the zero-noise limit.
    """

    model_config = ConfigDict(frozen=True)
    estimates: tuple[float, ...] = Field(min_length=1)
    seed_tag: int
    trial: int = 0
    noiseless: bool = False
