"""Abstract syntax classes shared by modalities, formulas and proof terms."""

from abc import ABC
from dataclasses import fields
from typing import Any, Callable, Dict, Tuple, Type, TypeVar

T = TypeVar("T", bound="AbstractSyntax")


class AbstractSyntax(ABC):
    """Template for immutable syntax trees.

    Concrete node classes are frozen dataclasses decorated with `cached_hash`,
    so nodes compare structurally and can be used as dict keys and set members.

    """

    # ------------------------------------------------------------------------+
    #                              Public Methods                             |
    # ------------------------------------------------------------------------+

    def render(self) -> str:
        """Render node in the canonical text syntax.

        Returns:
            str: Text that parses back to an equal node.

        """
        raise NotImplementedError

    def children(self) -> Tuple["AbstractSyntax", ...]:
        """Immediate sub-nodes, left to right."""
        return ()

    # ------------------------------------------------------------------------+
    #                              Magic Methods                              |
    # ------------------------------------------------------------------------+

    def __str__(self) -> str:
        return self.render()


def cached_hash(cls: Type[T]) -> Type[T]:
    """Give a frozen dataclass a memoised structural hash and a hash-guarded `__eq__`.

    Apply on top of `@dataclass(frozen=True, eq=False)`.
    """
    names = tuple(f.name for f in fields(cls))  # type: ignore[arg-type]
    tag = cls.__name__

    def __hash__(self: Any) -> int:
        cached = self.__dict__.get("_hash")
        if cached is None:
            cached = hash((tag,) + tuple(getattr(self, n) for n in names))
            object.__setattr__(self, "_hash", cached)
        return int(cached)

    def __eq__(self: Any, other: Any) -> bool:
        if self is other:
            return True
        if other.__class__ is not self.__class__:
            return False
        if hash(self) != hash(other):
            return False
        return all(getattr(self, n) == getattr(other, n) for n in names)

    def __getstate__(self: Any) -> Dict[str, Any]:
        # str hashes differ between interpreters, so the memo never travels.
        return {n: getattr(self, n) for n in names}

    def __setstate__(self: Any, state: Dict[str, Any]) -> None:
        for key, value in state.items():
            object.__setattr__(self, key, value)

    methods: Dict[str, Callable[..., Any]] = {
        "__hash__": __hash__,
        "__eq__": __eq__,
        "__getstate__": __getstate__,
        "__setstate__": __setstate__,
    }
    for name, method in methods.items():
        setattr(cls, name, method)
    return cls
