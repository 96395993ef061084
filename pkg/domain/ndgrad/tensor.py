"""
Dense double-precision tensors with a reverse-mode gradient tape.

A Tensor produced by an operation keeps references to its parents and a
gradient function mapping the incoming gradient to one gradient per parent.
Nothing is recorded when no parent requires a gradient, so forward passes
through frozen parameters build no graph.
"""

from __future__ import annotations

from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .errors import NonScalarRoot, ShapeError

GradFn = Callable[[np.ndarray], Sequence[np.ndarray | None]]


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "parents", "grad_fn", "op", "name")

    def __init__(
        self,
        data: Any,
        requires_grad: bool = False,
        name: str | None = None,
    ) -> None:
        self.data: np.ndarray = np.array(data, dtype=np.float64)
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad
        self.parents: tuple[Tensor, ...] = ()
        self.grad_fn: GradFn | None = None
        self.op: str | None = None
        self.name = name

    def __repr__(self) -> str:
        label = self.name or self.op or "leaf"
        return f"<Tensor {label} shape={self.shape} requires_grad={self.requires_grad}>"

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return int(self.data.size)

    @property
    def is_leaf(self) -> bool:
        return self.grad_fn is None

    def item(self) -> float:
        if self.size != 1:
            raise ShapeError(f"item() needs a single element, got shape {self.shape}")
        return float(self.data.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        return self.data.copy()

    def zero_grad(self) -> None:
        self.grad = None

    def backward(self, inputs: Iterable[Tensor] | None = None) -> None:
        backward(self, inputs)

    # Operators delegate to ops; imported lazily to avoid a cycle.

    def __add__(self, other: Any) -> Tensor:
        from . import ops

        return ops.add(self, other)

    def __radd__(self, other: Any) -> Tensor:
        from . import ops

        return ops.add(other, self)

    def __sub__(self, other: Any) -> Tensor:
        from . import ops

        return ops.sub(self, other)

    def __rsub__(self, other: Any) -> Tensor:
        from . import ops

        return ops.sub(other, self)

    def __mul__(self, other: Any) -> Tensor:
        from . import ops

        return ops.mul(self, other)

    def __rmul__(self, other: Any) -> Tensor:
        from . import ops

        return ops.mul(other, self)

    def __truediv__(self, other: float) -> Tensor:
        from . import ops

        return ops.mul(self, 1.0 / float(other))

    def __neg__(self) -> Tensor:
        from . import ops

        return ops.mul(self, -1.0)

    def __matmul__(self, other: Tensor) -> Tensor:
        from . import ops

        return ops.matmul(self, other)

    def reshape(self, *shape: int | tuple[int, ...]) -> Tensor:
        from . import ops

        if len(shape) == 1 and isinstance(shape[0], tuple):
            return ops.reshape(self, shape[0])
        return ops.reshape(self, tuple(int(s) for s in shape))  # type: ignore[arg-type]

    def transpose(self, axes: tuple[int, ...]) -> Tensor:
        from . import ops

        return ops.transpose(self, axes)

    def sum(self, axis: int | tuple[int, ...] | None = None, keepdims: bool = False) -> Tensor:
        from . import ops

        return ops.sum(self, axis=axis, keepdims=keepdims)

    def mean(self, axis: int | tuple[int, ...] | None = None, keepdims: bool = False) -> Tensor:
        from . import ops

        return ops.mean(self, axis=axis, keepdims=keepdims)


def as_tensor(value: Any) -> Tensor:
    """Wrap arrays and scalars as constant tensors; pass tensors through."""
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def record(
    data: np.ndarray,
    parents: tuple[Tensor, ...],
    grad_fn: GradFn,
    op: str,
) -> Tensor:
    """Create an operation result, attaching graph edges only when needed."""
    out = Tensor(data)
    if any(p.requires_grad for p in parents):
        out.requires_grad = True
        out.parents = parents
        out.grad_fn = grad_fn
        out.op = op
    return out


class Tape:
    """
    The recorded operations reachable from a root, in topological order.

    Backward walks the nodes in reverse, visiting each exactly once, and sums
    gradients over every path. Every node keeps its gradient afterwards, so
    intermediate results can be inspected in tests.
    """

    def __init__(self, root: Tensor) -> None:
        self.root = root
        self.nodes = self._topological_order(root)

    @staticmethod
    def _topological_order(root: Tensor) -> list[Tensor]:
        order: list[Tensor] = []
        visited: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node.parents:
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
        return order

    def backward(self) -> None:
        if self.root.size != 1:
            raise NonScalarRoot(
                f"backward needs a scalar root, got shape {self.root.shape}"
            )
        pending: dict[int, np.ndarray] = {id(self.root): np.ones_like(self.root.data)}
        for node in reversed(self.nodes):
            grad = pending.pop(id(node), None)
            if grad is None:
                grad = np.zeros_like(node.data)
            if node.is_leaf:
                # leaves accumulate across backward calls until zero_grad
                node.grad = grad if node.grad is None else node.grad + grad
                continue
            node.grad = grad
            assert node.grad_fn is not None
            for parent, parent_grad in zip(node.parents, node.grad_fn(grad)):
                if parent_grad is None or not parent.requires_grad:
                    continue
                key = id(parent)
                if key in pending:
                    pending[key] = pending[key] + parent_grad
                else:
                    pending[key] = parent_grad


def backward(root: Tensor, inputs: Iterable[Tensor] | None = None) -> None:
    """
    Run reverse-mode differentiation from a scalar root.

    Args:
        root: Scalar tensor to differentiate.
        inputs: Leaves that should end up with a gradient array even when no
            path connects them to the root (they receive zeros).

    Raises:
        NonScalarRoot: If the root holds more than one element.
    """
    if root.size != 1:
        raise NonScalarRoot(f"backward needs a scalar root, got shape {root.shape}")
    if root.requires_grad:
        Tape(root).backward()
    for leaf in inputs or ():
        if leaf.grad is None:
            leaf.grad = np.zeros_like(leaf.data)
