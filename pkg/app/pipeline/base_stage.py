import time
from typing import Any, Tuple

from app.utils.logging_utils import setup_logger

# Set up logger
logger = setup_logger("pipeline.base_stage")


class BaseStage:
    """Base class for the stages of the classification pipeline."""

    def __init__(self, name: str):
        """
        Initialize the stage.

        Args:
            name: Name of the stage, also its key in the timings
        """
        self.name = name
        logger.debug(f"Initializing {name}")

    def execute(self, **inputs: Any) -> Any:
        raise NotImplementedError

    def run(self, **inputs: Any) -> Tuple[Any, float]:
        """
        Run the stage on the given inputs.

        Returns:
            The stage result and the elapsed seconds
        """
        start = time.perf_counter()
        try:
            logger.info(f"Running {self.name}")
            logger.debug(f"Input keys: {list(inputs.keys())}")
            result = self.execute(**inputs)
            elapsed = round(time.perf_counter() - start, 4)
            logger.info(f"{self.name} completed in {elapsed}s")
            return result, elapsed
        except Exception as e:
            logger.error(f"Error running {self.name}: {str(e)}", exc_info=True)
            raise
