"""Bounded concrete interpreter and the ground-truth abstraction.

The interpreter executes main directly, records the concrete state after
every command (including inside callees, keyed by the shared node ids), and
aborts cleanly when a step budget runs out.  Saturation enumerates, per
source location, every (target, traversed-field-set) pair — finite even on
cyclic heaps because field sets are sets.  From that, a state abstracts to
the exact reachability/cyclicity value: the models of an entry are precisely
the field sets realized in the state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .classtable import ClassTable
from .domain import RcValue
from .formula import FieldUniverse, PathFormula, Viability
from .semantics import AnalysisResult
from .syntax import (
    Assign,
    BinOp,
    Command,
    Comparison,
    Expr,
    FieldRead,
    FieldWrite,
    If,
    IntLit,
    MethodCall,
    NewObject,
    NullLit,
    Program,
    Return,
    Skip,
    VarRef,
    While,
    INT_TYPE,
    OUT_VAR,
)

# integer arithmetic wraps at 64 bits, two's complement
WRAP = 1 << 64
SIGN = 1 << 63


def _wrap(n: int) -> int:
    n &= WRAP - 1
    return n - WRAP if n & SIGN else n


@dataclass
class Obj:
    classname: str
    fields: dict[str, "Val"]


@dataclass(frozen=True)
class Loc:
    addr: int


Val = Union[int, Loc, None]


@dataclass
class ConcreteState:
    frame: dict[str, Val]
    heap: dict[int, Obj]

    def snapshot(self) -> "ConcreteState":
        return ConcreteState(
            dict(self.frame),
            {a: Obj(o.classname, dict(o.fields)) for a, o in self.heap.items()},
        )


class NullDereference(Exception):
    def __init__(self, line: int):
        super().__init__(f"null dereference at line {line}")
        self.line = line


class BudgetExceeded(Exception):
    pass


@dataclass
class OracleResult:
    point_states: dict[int, list[ConcreteState]]
    final: ConcreteState
    steps: int
    allocations: int


class _Interp:
    def __init__(self, program: Program, ct: ClassTable, budget: int, record: bool):
        self.program = program
        self.ct = ct
        self.budget = budget
        self.record = record
        self.steps = 0
        self.allocations = 0
        self.next_addr = 1
        self.heap: dict[int, Obj] = {}
        self.point_states: dict[int, list[ConcreteState]] = {}

    def run_main(self) -> OracleResult:
        if self.program.main is None:
            raise ValueError("program has no main block")
        frame: dict[str, Val] = {}
        env = {n: t for t, n in self.program.main.locals}
        for name, t in env.items():
            frame[name] = 0 if t == INT_TYPE else None
        self.exec_body(self.program.main.body, frame)
        return OracleResult(
            self.point_states,
            ConcreteState(frame, self.heap),
            self.steps,
            self.allocations,
        )

    # -- execution

    def _tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded(f"step budget {self.budget} exceeded")

    def _record(self, nid: int, frame: dict[str, Val]) -> None:
        if self.record:
            self.point_states.setdefault(nid, []).append(
                ConcreteState(frame, self.heap).snapshot()
            )

    def exec_body(self, body: list[Command], frame: dict[str, Val]) -> None:
        for cmd in body:
            self.exec_cmd(cmd, frame)

    def exec_cmd(self, cmd: Command, frame: dict[str, Val]) -> None:
        self._tick()
        if isinstance(cmd, Skip):
            pass
        elif isinstance(cmd, Assign):
            frame[cmd.var] = self.eval_expr(cmd.expr, frame)
        elif isinstance(cmd, FieldWrite):
            value = self.eval_expr(cmd.expr, frame)
            base = frame.get(cmd.var)
            if not isinstance(base, Loc):
                raise NullDereference(cmd.line)
            self.heap[base.addr].fields[cmd.fieldname] = value
        elif isinstance(cmd, If):
            if self.eval_guard(cmd.guard, frame):
                self.exec_body(cmd.then_body, frame)
            else:
                self.exec_body(cmd.else_body, frame)
        elif isinstance(cmd, While):
            while self.eval_guard(cmd.guard, frame):
                self.exec_body(cmd.body, frame)
                self._tick()
        elif isinstance(cmd, Return):
            frame[OUT_VAR] = self.eval_expr(cmd.expr, frame)
        else:
            raise TypeError(f"unsupported command {cmd!r}")
        self._record(cmd.nid, frame)

    def eval_guard(self, guard: Comparison, frame: dict[str, Val]) -> bool:
        left = self.eval_expr(guard.left, frame)
        right = self.eval_expr(guard.right, frame)
        if guard.op == "==":
            return left == right
        if guard.op == "!=":
            return left != right
        assert isinstance(left, int) and isinstance(right, int)
        return {
            "<": left < right,
            "<=": left <= right,
            ">": left > right,
            ">=": left >= right,
        }[guard.op]

    def eval_expr(self, e: Expr, frame: dict[str, Val]) -> Val:
        if isinstance(e, IntLit):
            return _wrap(e.value)
        if isinstance(e, NullLit):
            return None
        if isinstance(e, VarRef):
            return frame[e.name]
        if isinstance(e, FieldRead):
            base = frame.get(e.var)
            if not isinstance(base, Loc):
                raise NullDereference(e.line)
            return self.heap[base.addr].fields[e.fieldname]
        if isinstance(e, BinOp):
            left = self.eval_expr(e.left, frame)
            right = self.eval_expr(e.right, frame)
            assert isinstance(left, int) and isinstance(right, int)
            if e.op == "+":
                return _wrap(left + right)
            if e.op == "-":
                return _wrap(left - right)
            return _wrap(left * right)
        if isinstance(e, NewObject):
            return self.allocate(e.classname)
        if isinstance(e, MethodCall):
            return self.call(e, frame)
        raise TypeError(f"unsupported expression {e!r}")

    def allocate(self, classname: str) -> Loc:
        addr = self.next_addr
        self.next_addr += 1
        self.allocations += 1
        fields = {
            fname: (0 if ftype == INT_TYPE else None)
            for fname, ftype in self.ct.fields_of(classname)
        }
        self.heap[addr] = Obj(classname, fields)
        return Loc(addr)

    def call(self, e: MethodCall, frame: dict[str, Val]) -> Val:
        receiver = frame.get(e.receiver)
        if not isinstance(receiver, Loc):
            raise NullDereference(e.line)
        runtime_class = self.heap[receiver.addr].classname
        sig = self.ct.resolve_method(runtime_class, e.method)
        if sig is None:
            raise NullDereference(e.line)
        callee_frame: dict[str, Val] = {"this": receiver}
        for formal, actual in zip(sig.param_names, e.args):
            callee_frame[formal] = frame[actual]
        for ltype, lname in self.ct.method_locals(sig):
            callee_frame[lname] = 0 if ltype == INT_TYPE else None
        callee_frame[OUT_VAR] = None
        self.exec_body(self.ct.method_body(sig), callee_frame)
        return callee_frame.get(OUT_VAR)


def run_concrete(
    program: Program, ct: ClassTable, budget: int = 100_000, record: bool = True
) -> OracleResult:
    return _Interp(program, ct, budget, record).run_main()


def heap_to_dot(state: ConcreteState) -> str:
    """Debug rendering of a concrete state as a DOT graph with
    field-labelled edges; variables appear as plain nodes."""
    lines = ["digraph heap {"]
    for addr in sorted(state.heap):
        obj = state.heap[addr]
        lines.append(f'  o{addr} [shape=box,label="o{addr}:{obj.classname}"];')
    for addr in sorted(state.heap):
        for fname, value in sorted(state.heap[addr].fields.items()):
            if isinstance(value, Loc):
                lines.append(f'  o{addr} -> o{value.addr} [label="{fname}"];')
    for var in sorted(state.frame):
        value = state.frame[var]
        if isinstance(value, Loc):
            lines.append(f'  {var} [shape=plaintext];')
            lines.append(f"  {var} -> o{value.addr} [style=dotted];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# saturation and abstraction


def traversal_saturate(
    heap: dict[int, Obj], src: int, require_step: bool = False
) -> frozenset[tuple[int, frozenset[str]]]:
    """All (target, traversed-field-set) pairs achievable from ``src``.

    Without ``require_step`` the pair (src, {}) for the empty path is
    included.  Finite because targets and field subsets are."""
    out: set[tuple[int, frozenset[str]]] = set()
    work: list[tuple[int, frozenset[str]]] = []
    if not require_step:
        start = (src, frozenset())
        out.add(start)
        work.append(start)
    else:
        obj = heap[src]
        for fname, value in obj.fields.items():
            if isinstance(value, Loc):
                pair = (value.addr, frozenset([fname]))
                if pair not in out:
                    out.add(pair)
                    work.append(pair)
    while work:
        loc, traversed = work.pop()
        for fname, value in heap[loc].fields.items():
            if isinstance(value, Loc):
                pair = (value.addr, traversed | {fname})
                if pair not in out:
                    out.add(pair)
                    work.append(pair)
    return frozenset(out)


def reachable_addrs(heap: dict[int, Obj], src: int) -> frozenset[int]:
    seen = {src}
    work = [src]
    while work:
        loc = work.pop()
        for value in heap[loc].fields.values():
            if isinstance(value, Loc) and value.addr not in seen:
                seen.add(value.addr)
                work.append(value.addr)
    return frozenset(seen)


def deep_reachable_addrs(heap: dict[int, Obj], src: int) -> frozenset[int]:
    """Locations reachable through at least one field hop."""
    out: set[int] = set()
    for value in heap[src].fields.values():
        if isinstance(value, Loc):
            out |= reachable_addrs(heap, value.addr)
    return frozenset(out)


def concrete_deep_share_pairs(
    state: ConcreteState, variables: Iterable[str]
) -> frozenset[tuple[str, str]]:
    regions = {}
    for v in variables:
        val = state.frame.get(v)
        if isinstance(val, Loc):
            regions[v] = deep_reachable_addrs(state.heap, val.addr)
    pairs = set()
    names = sorted(regions)
    for i, a in enumerate(names):
        for b in names[i:]:
            if regions[a] & regions[b]:
                pairs.add((a, b))
    return frozenset(pairs)


def cycle_field_sets(heap: dict[int, Obj], src: int) -> frozenset[frozenset[str]]:
    """Traversal sets of the non-empty cycles reachable from ``src``."""
    out: set[frozenset[str]] = set()
    for loc in reachable_addrs(heap, src):
        for target, traversed in traversal_saturate(heap, loc, require_step=True):
            if target == loc:
                out.add(traversed)
    return frozenset(out)


def alpha_state(
    state: ConcreteState,
    universe: FieldUniverse,
    variables: Iterable[str],
) -> RcValue:
    """The exact abstraction of one state over the given reference variables:
    entry models are precisely the realized traversal sets."""
    vs = tuple(variables)
    value = RcValue.bottom(universe, vs, frozenset(vs))
    locs = {
        v: state.frame[v].addr
        for v in vs
        if isinstance(state.frame.get(v), Loc)
    }
    sat = {addr: traversal_saturate(state.heap, addr) for addr in set(locs.values())}
    for v, av in locs.items():
        for w, aw in locs.items():
            masks = {
                universe.abstract_mask(fs) for target, fs in sat[av] if target == aw
            }
            if masks:
                value.reach[(v, w)] = PathFormula.from_models(universe, masks)
        cyc_masks = {universe.abstract_mask(fs) for fs in cycle_field_sets(state.heap, av)}
        cyc_masks.add(0)  # a non-null variable always has its empty cycle
        value.cyc[v] = PathFormula.from_models(universe, cyc_masks)
    return value


# --------------------------------------------------------------------------
# soundness comparison


@dataclass
class Violation:
    nid: int
    kind: str  # 'reach' | 'cyc'
    subject: tuple
    witness: tuple[str, ...]
    state_index: int

    def __str__(self) -> str:
        what = f"({','.join(self.subject)})" if self.kind == "reach" else self.subject[0]
        return (
            f"point {self.nid}: concrete {self.kind} {what} realizes "
            f"{set(self.witness) or '{}'} outside the abstract value "
            f"(state #{self.state_index})"
        )


@dataclass
class SoundnessReport:
    violations: list[Violation]
    points_checked: int
    states_checked: int
    missing_points: list[int]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.missing_points


def check_soundness(
    result: AnalysisResult, oracle: OracleResult, via: Optional[Viability] = None
) -> SoundnessReport:
    """Every realized traversal set at every recorded point must be a model
    of the corresponding abstract entry.  A concretely reached point the
    analysis never produced a value for counts against the check."""
    via = via or result.via
    violations: list[Violation] = []
    missing: list[int] = []
    points = 0
    states = 0
    for nid, state_list in sorted(oracle.point_states.items()):
        abstract = result.point_post.get(nid)
        if abstract is None:
            missing.append(nid)
            continue
        points += 1
        for idx, state in enumerate(state_list):
            states += 1
            shared = [
                v
                for v in abstract.variables
                if v in abstract.ref_vars and v in state.frame
            ]
            exact = alpha_state(state, result.universe, shared)
            for (v, w), f in exact.reach.items():
                target = abstract.reach_at(v, w)
                for mask in f.model_masks():
                    if not target.has_model(mask):
                        violations.append(
                            Violation(
                                nid, "reach", (v, w), result.universe.names_of(mask), idx
                            )
                        )
                        break
            for v, f in exact.cyc.items():
                target = abstract.cyc_at(v)
                for mask in f.model_masks():
                    if not target.has_model(mask):
                        violations.append(
                            Violation(nid, "cyc", (v,), result.universe.names_of(mask), idx)
                        )
                        break
    return SoundnessReport(violations, points, states, missing)
