from __future__ import annotations

from typing import Iterator

import numpy as np
from scipy import stats

from .errors import ShapeError
from .tensor import Tensor


def trunc_normal(rng: np.random.Generator, shape: tuple[int, ...], std: float = 0.02) -> np.ndarray:
    """Normal(0, std) truncated at two standard deviations."""
    return stats.truncnorm.rvs(-2.0, 2.0, scale=std, size=shape, random_state=rng)


class Module:
    """
    Base for anything holding trainable tensors.

    Parameters are Tensors made by parameter(), found by walking attributes
    in definition order; submodules may sit in attributes or in lists.
    """

    def named_parameters(self, prefix: str = "") -> Iterator[tuple[str, Tensor]]:
        for attr, value in vars(self).items():
            name = f"{prefix}{attr}"
            if isinstance(value, Tensor):
                if value.name == "param":
                    yield name, value
            elif isinstance(value, Module):
                yield from value.named_parameters(f"{name}.")
            elif isinstance(value, list):
                for i, item in enumerate(value):
                    if isinstance(item, Module):
                        yield from item.named_parameters(f"{name}.{i}.")

    def parameters(self) -> dict[str, Tensor]:
        return dict(self.named_parameters())

    def num_parameters(self) -> int:
        return sum(p.size for p in self.parameters().values())

    def zero_grad(self) -> None:
        for param in self.parameters().values():
            param.grad = None

    def freeze(self) -> None:
        for param in self.parameters().values():
            param.requires_grad = False
            param.grad = None

    def unfreeze(self) -> None:
        for param in self.parameters().values():
            param.requires_grad = True

    @property
    def frozen(self) -> bool:
        return not any(p.requires_grad for p in self.parameters().values())

    def state_dict(self) -> dict[str, np.ndarray]:
        return {name: p.data.copy() for name, p in self.parameters().items()}

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        params = self.parameters()
        missing = set(params) - set(state)
        unexpected = set(state) - set(params)
        if missing or unexpected:
            raise ShapeError(
                f"state mismatch: missing {sorted(missing)}, unexpected {sorted(unexpected)}"
            )
        for name, param in params.items():
            if state[name].shape != param.shape:
                raise ShapeError(f"{name}: expected {param.shape}, got {state[name].shape}")
            param.data[...] = state[name]


def parameter(data: np.ndarray) -> Tensor:
    """A trainable leaf. Tagged so it stays discoverable after freeze()."""
    return Tensor(data, requires_grad=True, name="param")
