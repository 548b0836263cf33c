"""Matrix semantics of closed diagrams.

An interpretation assigns a finite dimension to every object variable
and a matrix (stored sparsely, entries indexed by codomain indices
followed by domain indices) to every morphism variable, with the
dagger going to the conjugate transpose.  The value of a closed
diagram is the sum over all index assignments to its wires of the
product of the matching box entries; each trivial cycle multiplies the
value by the dimension of its label.

The polynomial interpretation of a reference diagram M assigns to each
object the free space on the wires of M with that label and to each
box of M a formal variable.  The value of any simple diagram N under
it counts, in the coefficient of the all-boxes-of-M monomial, exactly
the isomorphisms from N to M.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Any, Mapping

from .diagram import Diagram
from .errors import DaggereqError, InterpretationError, ParseError
from .scalars import (
    ConjPolynomial,
    ConjPolynomialRing,
    Monomial,
    ScalarRing,
)
from .signature import MorphismVar, ObjectVar, Signature, Sort


@dataclass(frozen=True, eq=False)
class Tensor:
    """Sparse matrix of a morphism; absent entries are zero.

    Keys of ``entries`` are full index tuples: codomain indices first,
    then domain indices.
    """

    cod_dims: tuple[int, ...]
    dom_dims: tuple[int, ...]
    entries: Mapping[tuple[int, ...], Any]

    def check(self) -> None:
        dims = self.cod_dims + self.dom_dims
        for idx in self.entries:
            if len(idx) != len(dims) or any(
                    not 0 <= i < d for i, d in zip(idx, dims)):
                raise InterpretationError(f"entry index {idx} out of bounds {dims}")

    def dagger(self, ring: ScalarRing) -> Tensor:
        k = len(self.cod_dims)
        return Tensor(
            self.dom_dims,
            self.cod_dims,
            {idx[k:] + idx[:k]: ring.conj(v) for idx, v in self.entries.items()},
        )

    def equal(self, other: Tensor, ring: ScalarRing) -> bool:
        if (self.cod_dims, self.dom_dims) != (other.cod_dims, other.dom_dims):
            return False
        for idx in set(self.entries) | set(other.entries):
            a = self.entries.get(idx, ring.zero)
            b = other.entries.get(idx, ring.zero)
            if not ring.eq(a, b):
                return False
        return True


@dataclass
class Interpretation:
    """Dimensions for objects and matrices for morphism variables."""

    ring: ScalarRing
    space: dict[ObjectVar, int]
    matrix: dict[MorphismVar, Tensor]

    def dim(self, a: ObjectVar) -> int:
        try:
            return self.space[a]
        except KeyError:
            raise InterpretationError(f"object {a} has no dimension") from None

    def tensor(self, f: MorphismVar) -> Tensor:
        try:
            return self.matrix[f]
        except KeyError:
            raise InterpretationError(
                f"morphism {f.display_name!r} has no matrix") from None

    def _sort_dims(self, s: Sort) -> tuple[int, ...]:
        return tuple(self.dim(sf.base) for sf in s)

    def check(self) -> None:
        """Validate shapes against sorts and the dagger pairing."""
        if any(d < 0 for d in self.space.values()):
            raise InterpretationError("dimensions must be nonnegative")
        for f, t in self.matrix.items():
            if f.dom.has_stars or f.cod.has_stars:
                raise InterpretationError(
                    f"morphism {f.display_name!r} has starred sorts")
            if t.cod_dims != self._sort_dims(f.cod) or t.dom_dims != self._sort_dims(f.dom):
                raise InterpretationError(
                    f"matrix shape of {f.display_name!r} does not match its sort")
            t.check()
        for f, t in self.matrix.items():
            partner = self.matrix.get(f.dagger())
            if partner is not None and not partner.equal(t.dagger(self.ring), self.ring):
                raise InterpretationError(
                    f"matrix of {f.dagger().display_name!r} is not the "
                    f"conjugate transpose of {f.display_name!r}")


# -- evaluation --------------------------------------------------------

def _box_node(d: Diagram, b: int, interp: Interpretation,
              ) -> tuple[tuple[int, ...], dict[tuple[int, ...], Any]]:
    """Collapse a box tensor to one axis per distinct incident wire."""
    t = interp.tensor(d.box_labels[b])
    ports = tuple(d.box_outputs[b]) + tuple(d.box_inputs[b])
    axes = tuple(sorted(set(ports)))
    entries: dict[tuple[int, ...], Any] = {}
    for idx, v in t.entries.items():
        assignment: dict[int, int] = {}
        ok = True
        for w, i in zip(ports, idx):
            if assignment.setdefault(w, i) != i:
                ok = False
                break
        if ok:
            entries[tuple(assignment[w] for w in axes)] = v
    return axes, entries


def _check_shapes(d: Diagram, interp: Interpretation) -> None:
    for b, f in enumerate(d.box_labels):
        t = interp.tensor(f)
        want_cod = tuple(interp.dim(d.wire_labels[w]) for w in d.box_outputs[b])
        want_dom = tuple(interp.dim(d.wire_labels[w]) for w in d.box_inputs[b])
        if (t.cod_dims, t.dom_dims) != (want_cod, want_dom):
            raise InterpretationError(
                f"matrix shape of {f.display_name!r} does not match box b{b}")


def _trivial_factor(d: Diagram, interp: Interpretation, value: Any) -> Any:
    ring = interp.ring
    for a, k in d.trivial_cycles:
        value = ring.mul(value, ring.from_int(interp.dim(a) ** k))
    return value


def denote(d: Diagram, interp: Interpretation) -> Any:
    """Value of a closed diagram, by greedy pairwise contraction.

    Equals :func:`denote_naive` exactly over exact rings; over floats
    only the summation order differs.
    """
    _check_shapes(d, interp)
    ring = interp.ring
    nodes: dict[int, tuple[tuple[int, ...], dict[tuple[int, ...], Any]]] = {}
    for b in range(d.n_boxes):
        nodes[b] = _box_node(d, b, interp)
    next_id = d.n_boxes

    holders: dict[int, set[int]] = {}
    for nid, (axes, _) in nodes.items():
        for w in axes:
            holders.setdefault(w, set()).add(nid)
    dims = {w: interp.dim(d.wire_labels[w]) for w in holders}

    def merged_size(w: int) -> int:
        result_axes: set[int] = set()
        for nid in holders[w]:
            result_axes.update(nodes[nid][0])
        result_axes.discard(w)
        size = 1
        for a in result_axes:
            size *= dims[a]
        return size

    while holders:
        w = min(holders, key=lambda w: (merged_size(w), w))
        involved = sorted(holders[w])
        if len(involved) == 1:
            axes, entries = nodes[involved[0]]
            new = _eliminate(axes, entries, w, ring)
        else:
            a1, e1 = nodes[involved[0]]
            a2, e2 = nodes[involved[1]]
            new = _contract(a1, e1, a2, e2, w, ring)
        for nid in involved:
            old_axes, _ = nodes.pop(nid)
            for a in old_axes:
                if a != w:
                    holders[a].discard(nid)
        del holders[w]
        nodes[next_id] = new
        for a in new[0]:
            holders[a].add(next_id)
        next_id += 1

    value = ring.one
    for axes, entries in nodes.values():
        assert not axes
        value = ring.mul(value, entries.get((), ring.zero))
    return _trivial_factor(d, interp, value)


def _eliminate(axes: tuple[int, ...], entries: dict, w: int, ring: ScalarRing):
    """Sum one node over its own axis ``w`` (a self-loop)."""
    k = axes.index(w)
    out_axes = axes[:k] + axes[k + 1:]
    out: dict[tuple[int, ...], Any] = {}
    for idx, v in entries.items():
        key = idx[:k] + idx[k + 1:]
        out[key] = ring.add(out[key], v) if key in out else v
    return out_axes, out


def _contract(axes1: tuple[int, ...], e1: dict, axes2: tuple[int, ...],
              e2: dict, w: int, ring: ScalarRing):
    """Merge two nodes, summing over every axis they share."""
    shared = tuple(sorted(set(axes1) & set(axes2)))
    out_axes = tuple(sorted((set(axes1) | set(axes2)) - {w}))
    pos2_shared = [axes2.index(a) for a in shared]
    pos1_shared = [axes1.index(a) for a in shared]
    grouped: dict[tuple[int, ...], list[tuple[tuple[int, ...], Any]]] = {}
    for idx2, v2 in e2.items():
        grouped.setdefault(tuple(idx2[p] for p in pos2_shared), []).append((idx2, v2))
    out: dict[tuple[int, ...], Any] = {}
    for idx1, v1 in e1.items():
        key = tuple(idx1[p] for p in pos1_shared)
        for idx2, v2 in grouped.get(key, ()):
            assignment = dict(zip(axes1, idx1))
            assignment.update(zip(axes2, idx2))
            out_key = tuple(assignment[a] for a in out_axes)
            term = ring.mul(v1, v2)
            out[out_key] = ring.add(out[out_key], term) if out_key in out else term
    return out_axes, out


def denote_naive(d: Diagram, interp: Interpretation) -> Any:
    """Value of a closed diagram by the defining sum over indexings.

    Exponential in the number of wires; the reference to test
    :func:`denote` against.
    """
    _check_shapes(d, interp)
    ring = interp.ring
    dims = [interp.dim(a) for a in d.wire_labels]
    tensors = [interp.tensor(f) for f in d.box_labels]
    total = ring.zero
    for choice in itertools.product(*(range(k) for k in dims)):
        prod = ring.one
        for b in range(d.n_boxes):
            idx = tuple(choice[w] for w in d.box_outputs[b]) + tuple(
                choice[w] for w in d.box_inputs[b])
            v = tensors[b].entries.get(idx)
            if v is None:
                prod = None
                break
            prod = ring.mul(prod, v)
        if prod is not None:
            total = ring.add(total, prod)
    return _trivial_factor(d, interp, total)


# -- the polynomial interpretation of a reference diagram ---------------

def m_interpretation(m: Diagram) -> Interpretation:
    """Interpret objects by the wires of ``m`` and boxes by variables.

    The matrix of a variable ``f`` has one entry per ``f``-labeled box
    of ``m`` (the variable of that box, at the box's wire positions)
    plus one per ``f†``-labeled box (the conjugate variable, at the
    transposed positions).
    """
    if not m.is_simple:
        raise InterpretationError("reference diagram must have no trivial cycles")
    ring = ConjPolynomialRing()
    wires_of: dict[ObjectVar, list[int]] = {}
    for w, a in enumerate(m.wire_labels):
        wires_of.setdefault(a, []).append(w)
    pos = {w: i for ws in wires_of.values() for i, w in enumerate(ws)}

    space = {a: len(ws) for a, ws in wires_of.items()}
    variables: set[MorphismVar] = set()
    for f in m.box_labels:
        variables.add(f)
        variables.add(f.dagger())
    for f in variables:
        for sf in tuple(f.dom) + tuple(f.cod):
            space.setdefault(sf.base, 0)

    matrix: dict[MorphismVar, Tensor] = {}
    for f in variables:
        entries: dict[tuple[int, ...], ConjPolynomial] = {}
        for b, lab in enumerate(m.box_labels):
            if lab == f:
                idx = tuple(pos[w] for w in m.box_outputs[b]) + tuple(
                    pos[w] for w in m.box_inputs[b])
                v = ConjPolynomial.variable(b)
            elif lab == f.dagger():
                idx = tuple(pos[w] for w in m.box_inputs[b]) + tuple(
                    pos[w] for w in m.box_outputs[b])
                v = ConjPolynomial.variable(b, conjugated=True)
            else:
                continue
            entries[idx] = entries[idx] + v if idx in entries else v
        matrix[f] = Tensor(
            tuple(space[sf.base] for sf in f.cod),
            tuple(space[sf.base] for sf in f.dom),
            entries,
        )
    interp = Interpretation(ring, space, matrix)
    interp.check()
    return interp


def all_boxes_monomial(m: Diagram) -> Monomial:
    return Monomial.of(*(((b, False)) for b in range(m.n_boxes)))


def iso_count_semantic(n: Diagram, m: Diagram) -> int:
    """Count isomorphisms from ``n`` to ``m`` without searching for any.

    Evaluates ``n`` under the polynomial interpretation of ``m`` and
    reads off the coefficient of the monomial with each box variable of
    ``m`` exactly once, unconjugated.
    """
    if not (n.is_simple and m.is_simple):
        raise InterpretationError("isomorphism counting needs simple diagrams")
    interp = m_interpretation(m)
    if any(a not in interp.space for a in n.wire_labels):
        return 0
    if any(f not in interp.matrix for f in n.box_labels):
        return 0
    value = denote(n, interp)
    return value.coefficient(all_boxes_monomial(m))


# -- random interpretations and witnesses --------------------------------

def random_interpretation(sig: Signature, dims: Mapping[ObjectVar, int] | int,
                          ring: ScalarRing, seed: int = 0) -> Interpretation:
    """Dense random matrices for every morphism variable of ``sig``.

    ``sig`` must be star-free (translate first).  Dagger partners get
    the conjugate transpose, so the result is a valid interpretation.
    """
    rng = random.Random(seed)
    space: dict[ObjectVar, int] = {}
    for a in sig.objects:
        d = dims if isinstance(dims, int) else dims.get(a)
        if d is None:
            raise InterpretationError(f"no dimension given for object {a}")
        if d < 0:
            raise InterpretationError(f"dimension of {a} must be nonnegative")
        space[a] = d
    matrix: dict[MorphismVar, Tensor] = {}
    for f in sig.base_morphisms:
        if f.dom.has_stars or f.cod.has_stars:
            raise InterpretationError(
                f"cannot interpret starred sorts of {f.display_name!r}")
        cod_dims = tuple(space[sf.base] for sf in f.cod)
        dom_dims = tuple(space[sf.base] for sf in f.dom)
        entries = {
            idx: ring.sample(rng)
            for idx in itertools.product(*(range(k) for k in cod_dims + dom_dims))
        }
        t = Tensor(cod_dims, dom_dims, entries)
        matrix[f] = t
        matrix[f.dagger()] = t.dagger(ring)
    interp = Interpretation(ring, space, matrix)
    interp.check()
    return interp


@dataclass
class Witness:
    """A concrete interpretation separating two diagrams."""

    trial: int
    seed: int
    interpretation: Interpretation
    value_a: Any
    value_b: Any


def _signature_of(diagrams: tuple[Diagram, ...]) -> Signature:
    objects: set[ObjectVar] = set()
    bases: dict[str, MorphismVar] = {}
    for d in diagrams:
        objects.update(d.wire_labels)
        objects.update(a for a, _ in d.trivial_cycles)
        for f in d.box_labels:
            base = f.undaggered()
            if bases.setdefault(base.name, base) != base:
                raise InterpretationError(
                    f"conflicting sorts for morphism {base.name!r}")
            for sf in tuple(base.dom) + tuple(base.cod):
                objects.add(sf.base)
    return Signature(
        "traced-monoidal",
        tuple(sorted(objects, key=lambda a: a.name)),
        tuple(bases[name] for name in sorted(bases)),
    )


def _rel_diff(a: Any, b: Any) -> float:
    ca, cb = complex(a), complex(b)
    return abs(ca - cb) / max(1.0, abs(ca), abs(cb))


def find_witness(n: Diagram, m: Diagram, dims: Mapping[ObjectVar, int] | int,
                 ring: ScalarRing, trials: int = 100, seed: int = 0,
                 rel_tol: float = 1e-6) -> Witness | None:
    """Search random interpretations for one giving ``n`` and ``m``
    different values.

    Every candidate found with the contraction evaluator is re-checked
    with the naive evaluator before it is reported; over floats the
    values must differ by more than ``rel_tol`` relatively.
    """
    sig = _signature_of((n, m))
    exact = ring.exact
    for trial in range(trials):
        trial_seed = seed * 1_000_003 + trial
        interp = random_interpretation(sig, dims, ring, trial_seed)
        va, vb = denote(n, interp), denote(m, interp)
        if exact:
            if ring.eq(va, vb):
                continue
            na, nb = denote_naive(n, interp), denote_naive(m, interp)
            if not (ring.eq(na, va) and ring.eq(nb, vb)):
                raise DaggereqError("evaluator mismatch on an exact ring")
            return Witness(trial, trial_seed, interp, na, nb)
        else:
            if _rel_diff(va, vb) <= rel_tol:
                continue
            na, nb = denote_naive(n, interp), denote_naive(m, interp)
            if _rel_diff(na, nb) <= rel_tol:
                continue
            return Witness(trial, trial_seed, interp, na, nb)
    return None


# -- text format ---------------------------------------------------------

def interpretation_to_text(interp: Interpretation) -> str:
    """Serialize dimensions and matrix entries, zeros omitted."""
    lines = []
    for a in sorted(interp.space, key=lambda a: a.name):
        lines.append(f"dim {a} = {interp.space[a]}")
    ring = interp.ring
    for f in sorted(interp.matrix, key=lambda f: f.display_name):
        t = interp.matrix[f]
        k = len(t.cod_dims)
        for idx in sorted(t.entries):
            v = t.entries[idx]
            if ring.is_zero(v):
                continue
            cod = ",".join(str(i) for i in idx[:k])
            dom = ",".join(str(i) for i in idx[k:])
            lines.append(f"{f.display_name}[{cod}|{dom}] = {ring.format(v)}")
    return "\n".join(lines) + "\n" if lines else ""


def parse_interpretation(text: str, sig: Signature, ring: ScalarRing) -> Interpretation:
    """Parse the output of :func:`interpretation_to_text` against ``sig``."""
    space: dict[ObjectVar, int] = {}
    raw_entries: dict[MorphismVar, dict[tuple[int, ...], Any]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("dim "):
            parts = stripped[4:].split("=")
            if len(parts) != 2:
                raise ParseError("expected 'dim OBJ = N'", lineno)
            try:
                space[sig.object(parts[0].strip())] = int(parts[1])
            except ParseError:
                raise
            except Exception:
                raise ParseError(f"bad dimension line {stripped!r}", lineno) from None
            continue
        head, eq, value_text = stripped.partition("=")
        name, bracket, index_text = head.strip().partition("[")
        if not (eq and bracket and index_text.endswith("]")):
            raise ParseError(f"bad entry line {stripped!r}", lineno)
        if not sig.has_morphism(name):
            raise ParseError(f"unknown morphism {name!r}", lineno)
        f = sig.morphism(name)
        cod_text, bar, dom_text = index_text[:-1].partition("|")
        if not bar:
            raise ParseError("entry index needs a '|' separator", lineno)
        try:
            cod_idx = tuple(int(s) for s in cod_text.split(",") if s.strip())
            dom_idx = tuple(int(s) for s in dom_text.split(",") if s.strip())
        except ValueError:
            raise ParseError(f"bad index in {stripped!r}", lineno) from None
        try:
            value = ring.parse(value_text.strip())
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
        raw_entries.setdefault(f, {})[cod_idx + dom_idx] = value
    matrix: dict[MorphismVar, Tensor] = {}
    for f, entries in raw_entries.items():
        try:
            cod_dims = tuple(space[sf.base] for sf in f.cod)
            dom_dims = tuple(space[sf.base] for sf in f.dom)
        except KeyError as exc:
            raise ParseError(f"no 'dim' line for object {exc.args[0]}") from None
        matrix[f] = Tensor(cod_dims, dom_dims, entries)
    interp = Interpretation(ring, space, matrix)
    interp.check()
    return interp
