"""Machine-readable per-group reports (one key: value block per group)."""

from __future__ import annotations

from dataclasses import dataclass, field


def format_bool(b: bool) -> str:
    return "true" if b else "false"


def format_set(values) -> str:
    return "{" + ",".join(str(v) for v in values) + "}"


@dataclass
class VerdictReport:
    """Invariant report for one group.

    Reports are byte-stable across runs: the timing field is only rendered
    when explicitly requested.
    """

    name: str
    degree: int
    order: int
    solvable: bool
    capacity_note: str | None = None
    simple: bool | None = None
    spectrum: tuple[int, ...] | None = None
    omega: int | None = None
    at_group: bool | None = None
    characteristic_orders: tuple[int, ...] | None = None
    orbit_census: tuple[tuple[int, int], ...] | None = None
    claim_lines: tuple[str, ...] = field(default=())
    timing_ms: float | None = None

    def to_lines(self, include_timing: bool = False) -> list[str]:
        lines = [
            f"group: {self.name}",
            f"degree: {self.degree}",
            f"order: {self.order}",
            f"solvable: {format_bool(self.solvable)}",
        ]
        if self.capacity_note:
            lines.append(f"capacity: {self.capacity_note}")
        if self.simple is not None:
            lines.append(f"simple: {format_bool(self.simple)}")
        if self.spectrum is not None:
            lines.append(f"spectrum: {format_set(self.spectrum)}")
        if self.omega is not None:
            lines.append(f"omega: {self.omega}")
        if self.at_group is not None:
            lines.append(f"at_group: {format_bool(self.at_group)}")
        if self.characteristic_orders is not None:
            lines.append(
                "characteristic_orders: " + " ".join(str(o) for o in self.characteristic_orders)
            )
        if self.orbit_census is not None:
            lines.append(
                "orbit_cells: " + " ".join(f"{o}:{s}" for o, s in self.orbit_census)
            )
        lines.extend(self.claim_lines)
        if include_timing and self.timing_ms is not None:
            lines.append(f"timing_ms: {self.timing_ms:.1f}")
        return lines

    def to_json_dict(self) -> dict:
        out = {
            "group": self.name,
            "degree": self.degree,
            "order": self.order,
            "solvable": self.solvable,
        }
        if self.capacity_note:
            out["capacity"] = self.capacity_note
        if self.simple is not None:
            out["simple"] = self.simple
        if self.spectrum is not None:
            out["spectrum"] = list(self.spectrum)
        if self.omega is not None:
            out["omega"] = self.omega
        if self.at_group is not None:
            out["at_group"] = self.at_group
        if self.characteristic_orders is not None:
            out["characteristic_orders"] = list(self.characteristic_orders)
        if self.orbit_census is not None:
            out["orbit_cells"] = [[o, s] for o, s in self.orbit_census]
        if self.claim_lines:
            out["claims"] = list(self.claim_lines)
        return out
