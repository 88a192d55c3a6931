from pydantic_settings import BaseSettings, SettingsConfigDict


class EnvConfig(BaseSettings):
    """
    Configuration class for loading environment variables.

    This class uses `pydantic`'s `BaseSettings` to read process-level settings
    from the environment (prefix `PINCRLB_`) or an optional `.env` file. Every
    setting has a default, so no environment is required.

    Attributes:
        LOG_LEVEL (str): Level for the `pincrlb` logger namespace.
        OUTPUT_DIR (str): Output directory used when neither the config document
            nor `--out` names one.
        WORKERS (int): Default number of threads for Monte-Carlo trials.
    """

    model_config = SettingsConfigDict(
        env_prefix="PINCRLB_", env_file=".env", env_file_encoding="utf-8"
    )
    LOG_LEVEL: str = "INFO"
    OUTPUT_DIR: str = "out"
    WORKERS: int = 1


env = EnvConfig()
