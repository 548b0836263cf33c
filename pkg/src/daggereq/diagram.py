"""Closed string diagrams and their isomorphisms.

A closed diagram is a finite set of labeled wires and labeled boxes.
Every wire has exactly one producer (a box output port) and exactly one
consumer (a box input port).  Closed loops that touch no box cannot be
seen by ports at all, so they are carried separately as a multiset of
object labels (``trivial_cycles``).

Terms compile to diagrams by union-find over wire ends: identities,
symmetries, duality units and counits contribute no boxes, only
wiring.  Compact closed structure is removed first: every morphism
variable is replaced by its star-free translation and the original
port positions are routed through the translation table.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cached_property

from .errors import DiagramError, ParseError, TypeCheckError
from . import terms as tm
from .signature import (
    MorphismVar,
    ObjectVar,
    Signature,
    TranslationTable,
    int_translate,
)


@dataclass(frozen=True)
class Diagram:
    """Immutable closed diagram.

    ``box_inputs[b]`` lists the wire consumed at each input port of box
    ``b`` in port order, ``box_outputs[b]`` the wire produced at each
    output port.  ``trivial_cycles`` maps each looped object label to a
    positive count, sorted by name.
    """

    wire_labels: tuple[ObjectVar, ...]
    box_labels: tuple[MorphismVar, ...]
    box_inputs: tuple[tuple[int, ...], ...]
    box_outputs: tuple[tuple[int, ...], ...]
    trivial_cycles: tuple[tuple[ObjectVar, int], ...] = ()

    @property
    def n_wires(self) -> int:
        return len(self.wire_labels)

    @property
    def n_boxes(self) -> int:
        return len(self.box_labels)

    @property
    def is_simple(self) -> bool:
        return not self.trivial_cycles

    @cached_property
    def producer(self) -> tuple[tuple[int, int], ...]:
        """For each wire, the ``(box, output port)`` that produces it."""
        out: list[tuple[int, int] | None] = [None] * self.n_wires
        for b, ws in enumerate(self.box_outputs):
            for j, w in enumerate(ws):
                out[w] = (b, j)
        return tuple(out)  # type: ignore[arg-type]

    @cached_property
    def consumer(self) -> tuple[tuple[int, int], ...]:
        """For each wire, the ``(box, input port)`` that consumes it."""
        out: list[tuple[int, int] | None] = [None] * self.n_wires
        for b, ws in enumerate(self.box_inputs):
            for j, w in enumerate(ws):
                out[w] = (b, j)
        return tuple(out)  # type: ignore[arg-type]

    def validate(self) -> None:
        """Check all structural invariants, raising :class:`DiagramError`."""
        if len(self.box_inputs) != self.n_boxes or len(self.box_outputs) != self.n_boxes:
            raise DiagramError("box port tables do not match box count")
        produced = Counter(w for ws in self.box_outputs for w in ws)
        consumed = Counter(w for ws in self.box_inputs for w in ws)
        for w in range(self.n_wires):
            if produced[w] != 1:
                raise DiagramError(f"wire w{w} has {produced[w]} producers")
            if consumed[w] != 1:
                raise DiagramError(f"wire w{w} has {consumed[w]} consumers")
        if set(produced) - set(range(self.n_wires)) or set(consumed) - set(range(self.n_wires)):
            raise DiagramError("port tables mention unknown wires")
        for b, f in enumerate(self.box_labels):
            if f.dom.has_stars or f.cod.has_stars:
                raise DiagramError(f"box b{b} label {f.display_name!r} has starred sorts")
            if len(self.box_inputs[b]) != len(f.dom):
                raise DiagramError(f"box b{b} input arity does not match {f.dom}")
            if len(self.box_outputs[b]) != len(f.cod):
                raise DiagramError(f"box b{b} output arity does not match {f.cod}")
            for j, w in enumerate(self.box_inputs[b]):
                if self.wire_labels[w] != f.dom.factors[j].base:
                    raise DiagramError(
                        f"wire w{w} label {self.wire_labels[w]} does not match "
                        f"input port {j + 1} of b{b} : {f.display_name}"
                    )
            for j, w in enumerate(self.box_outputs[b]):
                if self.wire_labels[w] != f.cod.factors[j].base:
                    raise DiagramError(
                        f"wire w{w} label {self.wire_labels[w]} does not match "
                        f"output port {j + 1} of b{b} : {f.display_name}"
                    )
        labels = [a for a, _ in self.trivial_cycles]
        if labels != sorted(set(labels), key=lambda a: a.name):
            raise DiagramError("trivial cycle labels must be sorted and unique")
        if any(k < 1 for _, k in self.trivial_cycles):
            raise DiagramError("trivial cycle counts must be positive")

    def relabel(self, wire_perm: tuple[int, ...], box_perm: tuple[int, ...]) -> Diagram:
        """Rename wires and boxes; ``wire_perm[old] = new``."""
        if sorted(wire_perm) != list(range(self.n_wires)):
            raise DiagramError("wire_perm is not a permutation")
        if sorted(box_perm) != list(range(self.n_boxes)):
            raise DiagramError("box_perm is not a permutation")
        wire_labels: list[ObjectVar | None] = [None] * self.n_wires
        for w, label in enumerate(self.wire_labels):
            wire_labels[wire_perm[w]] = label
        box_labels: list[MorphismVar | None] = [None] * self.n_boxes
        box_inputs: list[tuple[int, ...]] = [()] * self.n_boxes
        box_outputs: list[tuple[int, ...]] = [()] * self.n_boxes
        for b in range(self.n_boxes):
            box_labels[box_perm[b]] = self.box_labels[b]
            box_inputs[box_perm[b]] = tuple(wire_perm[w] for w in self.box_inputs[b])
            box_outputs[box_perm[b]] = tuple(wire_perm[w] for w in self.box_outputs[b])
        return Diagram(
            tuple(wire_labels),  # type: ignore[arg-type]
            tuple(box_labels),  # type: ignore[arg-type]
            tuple(box_inputs),
            tuple(box_outputs),
            self.trivial_cycles,
        )

    def without_trivial_cycles(self) -> Diagram:
        return Diagram(self.wire_labels, self.box_labels,
                       self.box_inputs, self.box_outputs, ())


def mirror(d: Diagram) -> Diagram:
    """The dagger of a closed diagram: flip every box, reverse every wire."""
    return Diagram(
        d.wire_labels,
        tuple(f.dagger() for f in d.box_labels),
        d.box_outputs,
        d.box_inputs,
        d.trivial_cycles,
    )


# -- compiling terms ---------------------------------------------------

class _Wiring:
    """Union-find over wire ends created during compilation."""

    def __init__(self) -> None:
        self.parent: list[int] = []
        self.label: list[ObjectVar] = []

    def new(self, label: ObjectVar) -> int:
        self.parent.append(len(self.parent))
        self.label.append(label)
        return len(self.parent) - 1

    def find(self, n: int) -> int:
        root = n
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[n] != root:
            self.parent[n], n = root, self.parent[n]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if self.label[ra] != self.label[rb]:
            raise DiagramError(
                f"cannot join a {self.label[ra]} wire with a {self.label[rb]} wire"
            )
        if ra != rb:
            self.parent[ra] = rb


class _Builder:
    def __init__(self, sig: Signature, table: TranslationTable):
        self.sig = sig
        self.table = table
        self.wiring = _Wiring()
        self.box_labels: list[MorphismVar] = []
        self.box_dom_nodes: list[list[int]] = []
        self.box_cod_nodes: list[list[int]] = []

    def build(self, t: tm.Term) -> tuple[list[int], list[int]]:
        """Compile ``t``; return its boundary ends (dom list, cod list)."""
        if isinstance(t, tm.Var):
            return self.box(self.sig.morphism(t.var_name))
        if isinstance(t, tm.Id):
            ends = [self.wiring.new(sf.base) for sf in t.sort]
            return ends, list(ends)
        if isinstance(t, tm.Compose):
            dom1, cod1 = self.build(t.first)
            dom2, cod2 = self.build(t.then)
            if len(cod1) != len(dom2):
                raise DiagramError("composition arity mismatch")
            for a, b in zip(cod1, dom2):
                self.wiring.union(a, b)
            return dom1, cod2
        if isinstance(t, tm.Tensor):
            dom1, cod1 = self.build(t.left)
            dom2, cod2 = self.build(t.right)
            return dom1 + dom2, cod1 + cod2
        if isinstance(t, tm.Symmetry):
            left = [self.wiring.new(sf.base) for sf in t.left]
            right = [self.wiring.new(sf.base) for sf in t.right]
            return left + right, right + left
        if isinstance(t, tm.Trace):
            dom, cod = self.build(t.body)
            k = len(t.over)
            for a, b in zip(cod[len(cod) - k:], dom[len(dom) - k:]):
                self.wiring.union(a, b)
            return dom[: len(dom) - k], cod[: len(cod) - k]
        if isinstance(t, tm.Dagger):
            first_new_box = len(self.box_labels)
            dom, cod = self.build(t.body)
            for b in range(first_new_box, len(self.box_labels)):
                self.box_labels[b] = self.box_labels[b].dagger()
                self.box_dom_nodes[b], self.box_cod_nodes[b] = (
                    self.box_cod_nodes[b], self.box_dom_nodes[b])
            return cod, dom
        if isinstance(t, tm.Unit):
            n = self.wiring.new(t.obj.base)
            return [], [n, n]
        if isinstance(t, tm.Counit):
            n = self.wiring.new(t.obj.base)
            return [n, n], []
        raise TypeError(f"not a term: {t!r}")

    def box(self, f: MorphismVar) -> tuple[list[int], list[int]]:
        g = self.table.variable(f)
        dom_nodes = [self.wiring.new(sf.base) for sf in g.dom]
        cod_nodes = [self.wiring.new(sf.base) for sf in g.cod]
        self.box_labels.append(g)
        self.box_dom_nodes.append(dom_nodes)
        self.box_cod_nodes.append(cod_nodes)

        def end(side: str, i: int) -> int:
            new_side, k = self.table.port(f, (side, i))
            return dom_nodes[k] if new_side == "dom" else cod_nodes[k]

        return ([end("dom", i) for i in range(len(f.dom))],
                [end("cod", j) for j in range(len(f.cod))])

    def finalize(self) -> Diagram:
        producers: dict[int, list[tuple[int, int]]] = {}
        consumers: dict[int, list[tuple[int, int]]] = {}
        for b in range(len(self.box_labels)):
            for j, n in enumerate(self.box_cod_nodes[b]):
                producers.setdefault(self.wiring.find(n), []).append((b, j))
            for j, n in enumerate(self.box_dom_nodes[b]):
                consumers.setdefault(self.wiring.find(n), []).append((b, j))

        roots = {self.wiring.find(n) for n in range(len(self.wiring.parent))}
        wire_roots: list[int] = []
        trivial: Counter[ObjectVar] = Counter()
        for r in sorted(roots):
            np, nc = len(producers.get(r, ())), len(consumers.get(r, ()))
            if np == 1 and nc == 1:
                wire_roots.append(r)
            elif np == 0 and nc == 0:
                trivial[self.wiring.label[r]] += 1
            else:
                raise DiagramError(
                    f"open wire: {np} producers and {nc} consumers"
                )

        wire_roots.sort(key=lambda r: producers[r][0])
        wire_of = {r: w for w, r in enumerate(wire_roots)}
        box_inputs = tuple(
            tuple(wire_of[self.wiring.find(n)] for n in nodes)
            for nodes in self.box_dom_nodes
        )
        box_outputs = tuple(
            tuple(wire_of[self.wiring.find(n)] for n in nodes)
            for nodes in self.box_cod_nodes
        )
        d = Diagram(
            tuple(self.wiring.label[r] for r in wire_roots),
            tuple(self.box_labels),
            box_inputs,
            box_outputs,
            tuple(sorted(trivial.items(), key=lambda item: item[0].name)),
        )
        d.validate()
        return d


def compile_term(t: tm.Term, sig: Signature) -> Diagram:
    """Compile a closed term to its diagram.

    The compact closed structure is eliminated on the fly, so box
    labels in the result are the star-free translations of the
    signature's morphism variables.
    """
    dom, cod = tm.type_check(t, sig)
    if not (dom.is_unit and cod.is_unit):
        raise TypeCheckError(f"term is not closed: {dom} -> {cod}")
    _, table = int_translate(sig)
    builder = _Builder(sig, table)
    boundary = builder.build(t)
    assert boundary == ([], [])
    return builder.finalize()


# -- isomorphisms ------------------------------------------------------

@dataclass(frozen=True)
class DiagramIso:
    """A pair of bijections witnessing isomorphism of two diagrams.

    ``wire_map[w]`` and ``box_map[b]`` give the image in the second
    diagram of wire ``w`` and box ``b`` of the first.
    """

    wire_map: tuple[int, ...]
    box_map: tuple[int, ...]

    def verify(self, n: Diagram, m: Diagram) -> bool:
        """Check every isomorphism condition from scratch."""
        if sorted(self.wire_map) != list(range(m.n_wires)):
            return False
        if sorted(self.box_map) != list(range(m.n_boxes)):
            return False
        if n.n_wires != m.n_wires or n.n_boxes != m.n_boxes:
            return False
        if n.trivial_cycles != m.trivial_cycles:
            return False
        for w in range(n.n_wires):
            if n.wire_labels[w] != m.wire_labels[self.wire_map[w]]:
                return False
        for b in range(n.n_boxes):
            c = self.box_map[b]
            if n.box_labels[b] != m.box_labels[c]:
                return False
            if tuple(self.wire_map[w] for w in n.box_inputs[b]) != m.box_inputs[c]:
                return False
            if tuple(self.wire_map[w] for w in n.box_outputs[b]) != m.box_outputs[c]:
                return False
        return True


def _refine(d: Diagram, colors: list) -> list[tuple]:
    return [
        (
            colors[b],
            tuple(colors[d.producer[w][0]] for w in d.box_inputs[b]),
            tuple(colors[d.consumer[w][0]] for w in d.box_outputs[b]),
        )
        for b in range(d.n_boxes)
    ]


def _joint_colors(n: Diagram, m: Diagram) -> tuple[list, list]:
    """Neighbourhood refinement of box labels, shared across both diagrams.

    Boxes that could correspond under some isomorphism always end up
    with the same color; the converse may fail, so colors only prune.
    """
    colors_n: list = [f.display_name for f in n.box_labels]
    colors_m: list = [f.display_name for f in m.box_labels]
    for _ in range(max(n.n_boxes, m.n_boxes)):
        refined_n, refined_m = _refine(n, colors_n), _refine(m, colors_m)
        canon = {
            c: i for i, c in enumerate(sorted(set(refined_n) | set(refined_m), key=repr))
        }
        new_n = [canon[c] for c in refined_n]
        new_m = [canon[c] for c in refined_m]
        if new_n == colors_n and new_m == colors_m:
            break
        colors_n, colors_m = new_n, new_m
    return colors_n, colors_m


def find_isos(n: Diagram, m: Diagram, limit: int | None = None) -> list[DiagramIso]:
    """All isomorphisms from ``n`` to ``m`` in a canonical order.

    Boxes are matched by backtracking; wire images are forced through
    input ports, so the wire bijection is never searched.  ``limit``
    caps the number of isomorphisms returned.
    """
    if n.n_wires != m.n_wires or n.n_boxes != m.n_boxes:
        return []
    if n.trivial_cycles != m.trivial_cycles:
        return []
    if sorted(a.name for a in n.wire_labels) != sorted(a.name for a in m.wire_labels):
        return []
    if (sorted(f.display_name for f in n.box_labels)
            != sorted(f.display_name for f in m.box_labels)):
        return []
    if n.n_boxes == 0:
        return [DiagramIso((), ())]

    colors_n, colors_m = _joint_colors(n, m)
    candidates: list[list[int]] = []
    by_color: dict[int, list[int]] = {}
    for c, color in enumerate(colors_m):
        by_color.setdefault(color, []).append(c)
    for b in range(n.n_boxes):
        cands = by_color.get(colors_n[b], [])
        if not cands:
            return []
        candidates.append(cands)

    order = sorted(range(n.n_boxes), key=lambda b: len(candidates[b]))
    isos: list[DiagramIso] = []
    box_map: dict[int, int] = {}
    wire_map: dict[int, int] = {}
    used: set[int] = set()

    def extend(b: int, c: int) -> list[int] | None:
        """Map box b to c; returns newly fixed wires, or None on clash."""
        added: list[int] = []
        for w, w2 in itertools.chain(
            zip(n.box_inputs[b], m.box_inputs[c]),
            zip(n.box_outputs[b], m.box_outputs[c]),
        ):
            seen = wire_map.get(w)
            if seen is None:
                wire_map[w] = w2
                added.append(w)
            elif seen != w2:
                for a in added:
                    del wire_map[a]
                return None
        return added

    def search(depth: int) -> bool:
        if depth == len(order):
            assert len(wire_map) == n.n_wires
            assert sorted(wire_map.values()) == list(range(m.n_wires))
            isos.append(DiagramIso(
                tuple(wire_map[w] for w in range(n.n_wires)),
                tuple(box_map[b] for b in range(n.n_boxes)),
            ))
            return limit is not None and len(isos) >= limit
        b = order[depth]
        for c in candidates[b]:
            if c in used:
                continue
            added = extend(b, c)
            if added is None:
                continue
            box_map[b] = c
            used.add(c)
            stop = search(depth + 1)
            used.discard(c)
            del box_map[b]
            for w in added:
                del wire_map[w]
            if stop:
                return True
        return False

    search(0)
    isos.sort(key=lambda iso: (iso.box_map, iso.wire_map))
    return isos


def iso_count(n: Diagram, m: Diagram) -> int:
    """Number of isomorphisms from ``n`` to ``m``."""
    return len(find_isos(n, m))


# -- deciding equality -------------------------------------------------

@dataclass(frozen=True)
class EqualityResult:
    """Outcome of :func:`decide_equal`.

    ``signature`` is the star-free translated signature the two
    diagrams are labeled over, including any closure variables.
    """

    equal: bool
    diagram_a: Diagram
    diagram_b: Diagram
    isomorphisms: tuple[DiagramIso, ...]
    signature: Signature

    @property
    def isomorphism(self) -> DiagramIso | None:
        return self.isomorphisms[0] if self.isomorphisms else None

    @property
    def isomorphism_count(self) -> int:
        return len(self.isomorphisms)


def decide_equal(t1: tm.Term, t2: tm.Term, sig: Signature) -> EqualityResult:
    """Decide whether two terms of the same sort are equal in the free theory.

    Both terms are closed with one shared pair of fresh variables,
    compiled, and compared up to diagram isomorphism.  Equality of the
    closed diagrams is equivalent to equality of the original terms.
    """
    t1c, t2c, sig_c = tm.close_pair(t1, t2, sig)
    d1 = compile_term(t1c, sig_c)
    d2 = compile_term(t2c, sig_c)
    sig_t, _ = int_translate(sig_c)
    isos = find_isos(d1, d2)
    return EqualityResult(bool(isos), d1, d2, tuple(isos), sig_t)


# -- text formats ------------------------------------------------------

def export_dot(d: Diagram) -> str:
    """Graphviz source: boxes as nodes, wires as directed labeled edges."""
    lines = ["digraph diagram {"]
    if d.n_boxes or d.trivial_cycles:
        lines.append("  rankdir=LR;")
    for b, f in enumerate(d.box_labels):
        lines.append(f'  b{b} [label="{f.display_name}", shape=box];')
    for w in range(d.n_wires):
        src, _ = d.producer[w]
        dst, _ = d.consumer[w]
        lines.append(f'  b{src} -> b{dst} [label="w{w}: {d.wire_labels[w]}"];')
    for a, k in d.trivial_cycles:
        lines.append(f"  // trivial cycle {a} x{k}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def diagram_to_text(d: Diagram) -> str:
    """Serialize in the line format accepted by :func:`parse_diagram`."""
    lines = []
    for b, f in enumerate(d.box_labels):
        lines.append(f"box b{b} : {f.display_name}")
    for w in range(d.n_wires):
        src, j = d.producer[w]
        dst, k = d.consumer[w]
        lines.append(
            f"wire w{w} : {d.wire_labels[w]} from b{src}.out{j + 1} to b{dst}.in{k + 1}"
        )
    for a, count in d.trivial_cycles:
        lines.append(f"trivial {a} {count}")
    return "\n".join(lines) + "\n" if lines else ""


def parse_diagram(text: str, sig: Signature) -> Diagram:
    """Parse the output of :func:`diagram_to_text` against a signature.

    Boxes must appear as ``b0, b1, ...`` in order, wires as ``w0, w1,
    ...``; labels are resolved through ``sig``.
    """
    box_labels: list[MorphismVar] = []
    wires: list[tuple[ObjectVar, tuple[int, int], tuple[int, int]]] = []
    trivial: list[tuple[ObjectVar, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        parts = stripped.split()
        if parts[0] == "box":
            if len(parts) != 4 or parts[2] != ":" or parts[1] != f"b{len(box_labels)}":
                raise ParseError("expected 'box bN : NAME'", lineno)
            try:
                box_labels.append(sig.morphism(parts[3]))
            except Exception:
                raise ParseError(f"unknown morphism {parts[3]!r}", lineno) from None
        elif parts[0] == "wire":
            if (len(parts) != 8 or parts[2] != ":" or parts[4] != "from"
                    or parts[6] != "to" or parts[1] != f"w{len(wires)}"):
                raise ParseError(
                    "expected 'wire wN : OBJ from bI.outJ to bK.inL'", lineno)
            try:
                label = sig.object(parts[3])
            except Exception:
                raise ParseError(f"unknown object {parts[3]!r}", lineno) from None
            wires.append((label, _parse_port(parts[5], "out", lineno),
                          _parse_port(parts[7], "in", lineno)))
        elif parts[0] == "trivial":
            if len(parts) != 3:
                raise ParseError("expected 'trivial OBJ COUNT'", lineno)
            try:
                trivial.append((sig.object(parts[1]), int(parts[2])))
            except ParseError:
                raise
            except Exception:
                raise ParseError(f"bad trivial cycle line {stripped!r}", lineno) from None
        else:
            raise ParseError(f"unknown line {parts[0]!r}", lineno)

    box_inputs: list[list[int]] = [
        [-1] * len(f.dom) for f in box_labels]
    box_outputs: list[list[int]] = [
        [-1] * len(f.cod) for f in box_labels]
    for w, (label, (src, j), (dst, k)) in enumerate(wires):
        for b, port, table in ((src, j, box_outputs), (dst, k, box_inputs)):
            if not (0 <= b < len(box_labels)):
                raise ParseError(f"wire w{w} mentions unknown box b{b}")
            if not (0 <= port < len(table[b])):
                raise ParseError(f"wire w{w} mentions a port b{b} does not have")
            if table[b][port] != -1:
                raise ParseError(f"two wires attached to one port of b{b}")
            table[b][port] = w
    d = Diagram(
        tuple(label for label, _, _ in wires),
        tuple(box_labels),
        tuple(tuple(ws) for ws in box_inputs),
        tuple(tuple(ws) for ws in box_outputs),
        tuple(sorted(trivial, key=lambda item: item[0].name)),
    )
    d.validate()
    return d


def _parse_port(text: str, side: str, lineno: int) -> tuple[int, int]:
    box_part, dot, port_part = text.partition(".")
    if not (dot and box_part.startswith("b") and port_part.startswith(side)):
        raise ParseError(f"bad port reference {text!r}", lineno)
    try:
        return int(box_part[1:]), int(port_part[len(side):]) - 1
    except ValueError:
        raise ParseError(f"bad port reference {text!r}", lineno) from None
