"""trustlogic configuration options."""

import collections.abc
import copy
import logging
import pprint
import traceback
from contextlib import ContextDecorator
from dataclasses import dataclass, field
from pathlib import Path
from types import TracebackType
from typing import Any, Dict, Mapping, Optional, Type, Union

import yaml

from trustlogic import _MODULE_PATH

logger = logging.getLogger(__name__)


class ConfigMixin(object):
    _options_source: str

    def _to_dict(self) -> Dict[str, Any]:
        return {
            k: v._to_dict() if isinstance(v, ConfigMixin) else v
            for k, v in public_dict(self.__dict__).items()
        }

    def __repr__(self) -> str:
        return str(self)

    def __str__(self) -> str:
        string = f"{pprint.pformat(self._to_dict(), sort_dicts=False)}"
        if hasattr(self, "_options_source"):
            string += (
                f"\nSource: {self._options_source}" if self._options_source else ""
            )
        return string


@dataclass(repr=False)
class SearchOptions(yaml.YAMLObject, ConfigMixin):
    """Options for sequent proof search.

    Attributes:
        node_budget (int):
            Search nodes expanded before a query reports budget-exceeded.
        loop_check (bool):
            Prune goals already open below an ancestor with a larger context.
        cache_results (bool):
            Reuse proved and failed subgoals within one search.

    """

    yaml_loader = yaml.SafeLoader
    yaml_tag = "!SearchOptions"

    node_budget: int = 200_000
    loop_check: bool = True
    cache_results: bool = True


@dataclass(repr=False)
class ModelOptions(yaml.YAMLObject, ConfigMixin):
    """Options for Kripke countermodel search.

    Attributes:
        max_worlds (int):
            Largest frame enumerated by the countermodel search.
        max_tokens (int):
            Tokens given non-empty valuations during the search.
        max_assignments (int):
            Relation assignments tried before the search gives up.
        random_frame_worlds (int):
            Upper bound on the size of randomly drawn frames.

    """

    yaml_loader = yaml.SafeLoader
    yaml_tag = "!ModelOptions"

    max_worlds: int = 3
    max_tokens: int = 4
    max_assignments: int = 100_000
    random_frame_worlds: int = 4


@dataclass(repr=False)
class TermOptions(yaml.YAMLObject, ConfigMixin):
    """Options for proof terms.

    Attributes:
        step_limit (int):
            Rewrite steps before normalization gives up.

    """

    yaml_loader = yaml.SafeLoader
    yaml_tag = "!TermOptions"

    step_limit: int = 1000


@dataclass(repr=False)
class TrustOptions(yaml.YAMLObject, ConfigMixin):
    """Options for trust networks.

    Attributes:
        forward_index (str):
            Which forwarded copies of a shared trust statement are assumed:
            'trustee', 'truster' or 'both'.
        literal_second_rule (bool):
            Also saturate with the order-(n+1)-second composition rule.
        simplify (bool):
            Drop `true` clutter from generated trust formulas.

    """

    yaml_loader = yaml.SafeLoader
    yaml_tag = "!TrustOptions"

    forward_index: str = "both"
    literal_second_rule: bool = False
    simplify: bool = True


@dataclass(repr=False)
class LogicOptions(yaml.YAMLObject, ConfigMixin):
    """Options for the logic, its engines and the workbench.

    Config options will automatically be loaded if a yaml file is found at
    either `./trustlogic-config.yaml` or `~/.trustlogic/trustlogic-config.yaml`.

    Attributes:
        decomposability_bound (int):
            Longest unfolding checked when validating a custom axiom system.
        include_box (bool):
            Add the public-knowledge modality to standard systems.
        wish_inheritance (bool):
            Let wishes follow the agent preorder.
        output_format (str):
            Report format of the command line: 'text' or 'json'.
        log_level (str):
            Logging level installed by the command line.
        report_template (str):
            Path to the jinja template of text reports.
        html_template (str):
            Path to the jinja template wrapping HTML reports.

        search: Options for proof search.
        models: Options for countermodel search.
        terms: Options for proof terms.
        trust: Options for trust networks.

    """

    yaml_loader = yaml.SafeLoader
    yaml_tag = "!LogicOptions"

    decomposability_bound: int = 4
    include_box: bool = False
    wish_inheritance: bool = False
    output_format: str = "text"
    log_level: str = "WARNING"
    report_template: str = str(_MODULE_PATH / "resources/jinja/report.md.jinja")
    html_template: str = str(_MODULE_PATH / "resources/jinja/report.html.jinja")

    search: SearchOptions = field(default_factory=SearchOptions)
    models: ModelOptions = field(default_factory=ModelOptions)
    terms: TermOptions = field(default_factory=TermOptions)
    trust: TrustOptions = field(default_factory=TrustOptions)

    _options_source: str = ""

    def save(self, path: Union[str, Path] = "./trustlogic-config.yaml") -> None:
        """Save config to yaml file at `path`."""
        Path(path).write_text(self._to_yaml_str())

    @classmethod
    def load(cls, path: Union[str, Path]) -> "LogicOptions":
        """Load config from yaml file at `path`."""
        yaml_str = Path(path).read_text()
        opts: LogicOptions = yaml.safe_load(yaml_str)
        opts._options_source = str(path)
        return opts

    def _to_yaml_str(self) -> str:
        self_copy = copy.copy(self)
        del self_copy._options_source
        return str(yaml.dump(self_copy, default_flow_style=False, sort_keys=False))

    @classmethod
    def _autoload(cls) -> "LogicOptions":
        config_paths = [
            Path("./trustlogic-config.yaml"),
            Path.home() / ".trustlogic/trustlogic-config.yaml",
        ]

        for p in config_paths:
            if p.is_file():
                opts = cls.load(p)
                opts._options_source = str(p)
                logger.info("trustlogic config loaded from: %s", p)
                return opts
        return cls()


options = LogicOptions._autoload()


def update_recursive(
    source_dict: Dict[Any, Any], update_map: Mapping[Any, Any]
) -> Dict[Any, Any]:
    """Recursively update nested dictionaries."""
    for k, v in update_map.items():
        if isinstance(v, collections.abc.Mapping):
            source_dict[k] = update_recursive(source_dict.get(k, {}), v)
        else:
            source_dict[k] = v
    return source_dict


class options_context(ContextDecorator):
    """Temporarily replace the global options, restoring them on exit."""

    def __init__(self, new_options: LogicOptions):
        self.new_options = new_options
        self.default_options = copy.copy(options)

    def __enter__(self) -> None:
        update_recursive(options.__dict__, self.new_options.__dict__)

    def __exit__(
        self, exc_type: Type[BaseException], exc_value: BaseException, tb: TracebackType
    ) -> None:
        if exc_type is not None:  # pragma: no cover
            traceback.print_exception(exc_type, exc_value, tb)
        update_recursive(options.__dict__, self.default_options.__dict__)


def resolve_config_option(config_option: str, value: Optional[Any]) -> Any:
    """Return `value`, or the option at dotted path `config_option` when it is None."""
    if value is not None:
        return value
    found: Any = options
    for part in config_option.split("."):
        found = getattr(found, part)
    return found


def public_dict(d: Dict[str, Any]) -> Dict[str, Any]:
    """Remove keys starting with '_' from dict."""
    return {
        k: v for k, v in d.items() if not (isinstance(k, str) and k.startswith("_"))
    }
