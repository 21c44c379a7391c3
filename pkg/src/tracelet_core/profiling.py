"""Profile substrate: online call-path aggregation with visit counts and inclusive times.

Each location owns a cursor into its own tree; a node exists per observed
call path (direct recursion is represented path-exactly, one level per
frame actually seen). Location trees are merged by region-id path at
finalize and written to ``profile.json``.
"""

import json
from pathlib import Path

from .errors import ParseError
from .model import Event, EventKind

PROFILE_FILENAME = "profile.json"


class CallPathNode:
    """Node of the aggregated tree; the root is synthetic (region_id None)."""

    __slots__ = ("region_id", "visits", "inclusive_ns", "children")

    def __init__(self, region_id: int | None = None):
        self.region_id = region_id
        self.visits = 0
        self.inclusive_ns = 0
        self.children: dict[int, CallPathNode] = {}

    def child(self, region_id: int) -> "CallPathNode":
        node = self.children.get(region_id)
        if node is None:
            node = self.children[region_id] = CallPathNode(region_id)
        return node

    @property
    def exclusive_ns(self) -> int:
        return self.inclusive_ns - sum(c.inclusive_ns for c in self.children.values())


class CallPathProfile:
    """Online aggregation over the event stream; one cursor per location."""

    def __init__(self):
        self._roots: dict[int, CallPathNode] = {}
        self._cursors: dict[int, list[tuple[CallPathNode, int]]] = {}

    def on_event(self, event: Event) -> None:
        location_id = event.location_id
        cursor = self._cursors.get(location_id)
        if cursor is None:
            cursor = self._cursors[location_id] = []
            self._roots[location_id] = CallPathNode()
        if event.kind is EventKind.ENTER:
            parent = cursor[-1][0] if cursor else self._roots[location_id]
            cursor.append((parent.child(event.region_id), event.ts))
        else:
            if not cursor:
                return
            node, entered_at = cursor.pop()
            node.visits += 1
            node.inclusive_ns += event.ts - entered_at

    def location_roots(self) -> dict[int, CallPathNode]:
        return dict(self._roots)

    def merged_root(self) -> CallPathNode:
        merged = CallPathNode()
        for root in self._roots.values():
            _merge_into(merged, root)
        return merged

    def write(self, out_dir) -> Path:
        doc = {
            "root": _root_dict(self.merged_root()),
            "per_location": [
                {"location": location_id, "root": _root_dict(root)}
                for location_id, root in sorted(self._roots.items())
            ],
        }
        path = Path(out_dir) / PROFILE_FILENAME
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        return path


def _merge_into(target: CallPathNode, source: CallPathNode) -> None:
    target.visits += source.visits
    target.inclusive_ns += source.inclusive_ns
    for region_id, child in source.children.items():
        _merge_into(target.child(region_id), child)


def _node_dict(node: CallPathNode) -> dict:
    return {
        "region": node.region_id,
        "visits": node.visits,
        "inclusive_ns": node.inclusive_ns,
        "exclusive_ns": node.exclusive_ns,
        "children": [_node_dict(c) for c in node.children.values()],
    }


def _root_dict(root: CallPathNode) -> dict:
    return {"children": [_node_dict(c) for c in root.children.values()]}


def read_profile(path) -> dict:
    """Load and structurally validate a profile.json document."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ParseError(path, "profile document not found") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or "root" not in doc:
        raise ParseError(path, "missing key 'root'")
    _validate_children(doc["root"], path)
    return doc


def _validate_children(node: dict, path) -> None:
    if not isinstance(node, dict) or not isinstance(node.get("children"), list):
        raise ParseError(path, "node without a 'children' list")
    for child in node["children"]:
        for key in ("region", "visits", "inclusive_ns", "exclusive_ns"):
            if key not in child:
                raise ParseError(path, f"node missing key {key!r}")
        _validate_children(child, path)


def flatten_paths(root: dict) -> dict[tuple[int, ...], tuple[int, int, int]]:
    """Map each region-id path to (visits, inclusive_ns, exclusive_ns).

    Accepts the dict form of a tree root as stored in profile.json.
    """
    out: dict[tuple[int, ...], tuple[int, int, int]] = {}

    def walk(node: dict, prefix: tuple[int, ...]) -> None:
        for child in node["children"]:
            path = prefix + (child["region"],)
            out[path] = (child["visits"], child["inclusive_ns"], child["exclusive_ns"])
            walk(child, path)

    walk(root, ())
    return out
