"""Rule-labeled derivation trees shared by all three checkers.

One node shape serves G3C, the higher-order calculus and NC; the calculus
tag lives on the containing file or the checking call, not on the node.
"""
from __future__ import annotations

from dataclasses import dataclass

from .syntax import Sequent


@dataclass(frozen=True)
class Derivation:
    """A rule application with its conclusion and premise subtrees.

    discharges and label are only meaningful for NC derivations: a
    discharging rule names the assumption labels it closes, an "assume"
    leaf carries its own label.
    """

    rule: str
    conclusion: Sequent
    children: tuple["Derivation", ...] = ()
    discharges: tuple[str, ...] = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "discharges", tuple(self.discharges))

    def size(self) -> int:
        n = 0
        stack = [self]
        while stack:
            d = stack.pop()
            n += 1
            stack.extend(d.children)
        return n

    def postorder(self):
        """Yield (node, path) pairs, children before parents, left to right."""
        out = []
        stack = [(self, ())]
        while stack:
            node, path = stack.pop()
            out.append((node, path))
            for i, child in enumerate(node.children):
                stack.append((child, path + (i,)))
        return reversed(out)


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    path: tuple[int, ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.accepted

    def location(self) -> str:
        return ".".join(map(str, self.path)) if self.path else "root"


ACCEPT = Verdict(True)


def reject(path: tuple[int, ...], reason: str) -> Verdict:
    return Verdict(False, path, reason)
