"""
Export distributions, graphs and comparison curves as CSV / text
"""
import json
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

from config.settings import settings
from distributions.exact import DegreeDistribution
from distributions.joint import JointDegreeDistribution


def _fmt(value: float, digits: Optional[int] = None) -> str:
    digits = settings.significant_digits if digits is None else digits
    return f"{float(value):.{digits}g}"


def vdd_to_csv(dist: DegreeDistribution, digits: Optional[int] = None) -> str:
    """`k,Q` rows followed by a `# tail_mass=... mean_weight=...` line"""
    lines = ["k,Q"]
    for k, q in zip(dist.degrees(), dist.q):
        lines.append(f"{int(k)},{_fmt(q, digits)}")
    lines.append(f"# tail_mass={_fmt(dist.tail_mass, digits)} mean_weight={_fmt(dist.mean_weight, digits)}")
    return "\n".join(lines) + "\n"


def joint_to_csv(joint: JointDegreeDistribution, digits: Optional[int] = None) -> str:
    """Header comments, then `l,k,value` for every entry that is not a structural zero"""
    params = " ".join(f"{key}={value}" for key, value in joint.params.items())
    lines = [
        f"# kind={joint.kind.value} k_min={joint.k_min} kmax={joint.k_max}",
        f"# {params}" if params else "#",
        f"# tail_mass={_fmt(joint.tail_mass, digits)}",
        "l,k,value",
    ]
    degrees = joint.degrees()
    for i, l in enumerate(degrees):
        row = joint.q[i]
        for j, k in enumerate(degrees):
            value = row[j]
            if value == 0.0 and joint.is_structural_zero(int(l), int(k)):
                continue
            lines.append(f"{int(l)},{int(k)},{_fmt(value, digits)}")
    return "\n".join(lines) + "\n"


def edge_list_text(arcs: Iterable[Tuple[int, int]]) -> str:
    """One `source target` pair per line, in creation order"""
    return "".join(f"{u} {v}\n" for u, v in arcs)


def curves_to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], digits: Optional[int] = None) -> str:
    lines = [",".join(header)]
    for row in rows:
        k, *values = row
        lines.append(",".join([str(int(k))] + [_fmt(v, digits) for v in values]))
    return "\n".join(lines) + "\n"


def json_line(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, sort_keys=False) + "\n"


def write_output(text: str, path: Optional[str] = None) -> None:
    """Write to `path`, or to stdout when no path is given"""
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
