"""Soup registry mapping method names to soup classes."""

from typing import Any, Union

from src.exceptions import ConfigurationError
from src.models.enums import SoupMethod
from src.soups.base_soup import BaseSoup
from src.soups.greedy_soup import GreedySoup
from src.soups.manifold_soup import ManifoldMixSoup
from src.soups.uniform_soup import UniformSoup
from src.utils.seeding import subcommand_seed

SOUP_SEED_LABEL = "soup"


class SoupRegistry:
    """Registry of soup algorithms selectable by name."""

    def __init__(self):
        self.soups: dict[str, type[BaseSoup]] = {}
        self._register_all_soups()

    def _register_all_soups(self):
        self.register(SoupMethod.UNIFORM.value, UniformSoup)
        self.register(SoupMethod.GREEDY.value, GreedySoup)
        self.register(SoupMethod.MANIFOLD.value, ManifoldMixSoup)

    def register(self, method: str, soup_class: type[BaseSoup]):
        self.soups[method] = soup_class

    def create(self, method: Union[str, SoupMethod], **kwargs: Any) -> BaseSoup:
        """Instantiate the soup registered under `method`.

        Raises:
            ConfigurationError: unknown method or invalid arguments
        """
        key = method.value if isinstance(method, SoupMethod) else str(method)
        if key not in self.soups:
            raise ConfigurationError(f"Unknown soup method '{key}', available: {sorted(self.soups)}")
        try:
            return self.soups[key](**kwargs)
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"Invalid arguments for {key} soup: {e}") from e

    def methods(self) -> list[str]:
        return list(self.soups)


soup_registry = SoupRegistry()


def soup_seed(seed: int) -> int:
    """Seed handed to a soup for a run-level `--seed`."""
    return subcommand_seed(seed, SOUP_SEED_LABEL)
