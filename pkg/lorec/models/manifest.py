# File: lorec/models/manifest.py
# manifest.json: everything needed to re-run a command and get the same bytes.
# Holds no timestamps or hostnames.

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field


class RunManifest(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: str
    config: dict[str, Any]
    seed: Optional[int] = None
    tool_version: str
    input_digests: dict[str, str] = Field(default_factory=dict)  # file name -> sha256
