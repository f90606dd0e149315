import asyncio
import logging
from typing import Any, Dict, Optional, Sequence

import aiohttp
from pydantic import SecretStr, ValidationError

from dispatchengine.backends.base import ensure_verbatim
from dispatchengine.core.errors import BackendError
from dispatchengine.models.api_model import InferenceRequest, InferenceResponse
from dispatchengine.utils.utils import get_secret_from_env, run_async_safely

logger = logging.getLogger(__name__)

API_KEY_ENV = "DISPATCH_ENGINE_API_KEY"
API_BASE_URL_ENV = "DISPATCH_ENGINE_API_BASE_URL"


class APIBackend:
    """Remote model service backend.

    Implements both the stochastic classifier and the stochastic extractor
    interfaces by POSTing an ``InferenceRequest`` to ``<api_base_url>/v1/infer``.
    The service is expected to honour ``trial_seed`` so that trials are
    reproducible.
    """

    def __init__(
        self,
        api_base_url: str,
        api_key: Optional[SecretStr] = None,
        request_timeout: int = 30,
        max_retries: int = 3,
        name: str = "api-backend",
    ):
        """Initialize API backend

        Args:
            api_base_url: Base URL of the model service
            api_key: Bearer token (optional)
            request_timeout: Request timeout in seconds
            max_retries: Maximum number of attempts per request
            name: Backend name used in logs
        """
        self.name = name
        self.api_base_url = api_base_url.rstrip("/")
        self.api_key = api_key
        self.request_timeout = request_timeout
        self.max_retries = max_retries

    @classmethod
    def from_env(cls, **kwargs: Any) -> "APIBackend":
        base_url = get_secret_from_env(API_BASE_URL_ENV)
        if base_url is None:
            raise ValueError(f"Set {API_BASE_URL_ENV} to use the remote model backend")
        return cls(
            api_base_url=base_url.get_secret_value(),
            api_key=get_secret_from_env(API_KEY_ENV),
            **kwargs,
        )

    def __str__(self) -> str:
        return f"- API Backend: remote model service at {self.api_base_url}"

    async def _async_make_api_request(
        self, endpoint: str, data: Dict[str, Any]
    ) -> Dict[str, Any]:
        """POST ``data`` to ``endpoint`` and return the decoded JSON body.

        Raises:
            BackendError: If every attempt fails
        """
        url = f"{self.api_base_url}/{endpoint.lstrip('/')}"
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key.get_secret_value()}"

        last_error: Optional[str] = None
        for attempt in range(self.max_retries):
            try:
                async with aiohttp.ClientSession() as session:
                    async with session.post(
                        url,
                        json=data,
                        headers=headers,
                        timeout=aiohttp.ClientTimeout(total=self.request_timeout),
                    ) as response:
                        response_data: Dict[str, Any] = await response.json()
                        if response.status < 400:
                            return response_data
                        last_error = response_data.get(
                            "error", f"API request failed: {response.status}"
                        )
                        logger.error(f"API request failed: {last_error}")
            except asyncio.TimeoutError:
                last_error = "API request timeout"
                logger.warning(
                    f"API request timeout (attempt {attempt + 1}/{self.max_retries})"
                )
            except aiohttp.ClientError as e:
                last_error = str(e)
                logger.error(f"API request error: {last_error}")

            if attempt < self.max_retries - 1:
                await asyncio.sleep(1 * (attempt + 1))

        raise BackendError(last_error or "API request failed")

    async def _async_infer(self, request: InferenceRequest) -> InferenceResponse:
        data = await self._async_make_api_request("v1/infer", request.model_dump())
        try:
            result = InferenceResponse.model_validate(data)
        except ValidationError as e:
            raise BackendError(f"Malformed response from {self.api_base_url}: {e}") from e
        if result.error:
            raise BackendError(result.error)
        return result

    async def async_classify(
        self, text: str, label: str, trial_seed: int, exclude: Sequence[str] = ()
    ) -> float:
        result = await self._async_infer(
            InferenceRequest(
                task="classify",
                question=label,
                context=text,
                trial_seed=trial_seed,
                exclude=list(exclude),
            )
        )
        if result.probability is None:
            raise BackendError(f"Response for label '{label}' has no probability")
        return result.probability

    def classify(
        self, text: str, label: str, trial_seed: int, exclude: Sequence[str] = ()
    ) -> float:
        """Classification (sync version)"""
        return float(run_async_safely(self.async_classify(text, label, trial_seed, exclude)))

    async def async_extract(
        self, field_id: str, question: str, utterance: str, trial_seed: int
    ) -> Optional[str]:
        result = await self._async_infer(
            InferenceRequest(
                task="extract",
                question=question,
                context=utterance,
                trial_seed=trial_seed,
                field_id=field_id,
            )
        )
        if result.output is None or isinstance(result.output, bool):
            return None
        return ensure_verbatim(result.output, utterance, field_id)

    def extract(
        self, field_id: str, question: str, utterance: str, trial_seed: int
    ) -> Optional[str]:
        """Extraction (sync version)"""
        span: Optional[str] = run_async_safely(
            self.async_extract(field_id, question, utterance, trial_seed)
        )
        return span
