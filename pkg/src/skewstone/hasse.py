"""DOT rendering of the natural partial order."""

from __future__ import annotations

from .algebra import SkewBA


def covers(S: SkewBA) -> list:
    """Pairs ``(a, b)`` with ``a < b`` and nothing strictly between."""
    below = {b: [a for a in S.elements() if a != b and S.leq(a, b)] for b in S.elements()}
    out = []
    for b in S.elements():
        for a in below[b]:
            if not any(S.leq(a, c) for c in below[b] if c != a):
                out.append((a, b))
    return sorted(out)


def emit_hasse(S: SkewBA, name: str = "hasse") -> str:
    """Covering relation as a DOT digraph; each D-class is one rank."""
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for a in S.elements():
        lines.append(f'  {a} [label="{S.name(a)}"];')
    for cls in S.classes:
        lines.append("  { rank=same; " + " ".join(f"{a};" for a in cls) + " }")
    for a, b in covers(S):
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
