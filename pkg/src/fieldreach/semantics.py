"""Abstract semantics: transfer functions over reachability/cyclicity values
and the interprocedural fixpoint.

Expressions bind their effect to the internal result variable; commands
consume it.  A field access turns the base variable's rows into result rows
through the path operators; a field update joins in the paths the new edge
can create, including the cycle it may close; a call combines the callee
summaries with purity- and deep-sharing-guarded repair of everything the
callee might have rewired.

Method denotations map an abstract entry value over the inputs to an exit
value over inputs plus the return value.  They are computed per distinct
entry value by a memoized global fixpoint; inside a body, shadow copies of
the parameters pin the structures the inputs pointed to on entry, so
reassigning a parameter does not lose its summary rows.  Loops iterate to a
local fixpoint with per-entry widening to the tautology after a configurable
number of changes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from .classtable import ClassTable, MethodSig
from .domain import RcValue
from .formula import FieldUniverse, PathFormula, Viability
from .sharing import SharingAnalysis, SharingState
from .syntax import (
    Assign,
    BinOp,
    Command,
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
    RESULT_VAR,
    shallow_name,
)
from .typecheck import TypeEnv, TypeInfo

EntryKey = Union[str, tuple[str, str]]  # "main" or a method key


class AnalysisError(Exception):
    pass


@dataclass
class TraceRow:
    line: int
    visit: int
    value: RcValue


@dataclass
class AnalysisResult:
    universe: FieldUniverse
    entry: EntryKey
    display_vars: tuple[str, ...]
    final: RcValue
    trace: list[TraceRow]
    point_post: dict[int, RcValue]
    denotations: dict[tuple[str, str], dict[tuple, RcValue]]
    rounds: int
    loop_passes: dict[int, int]
    widenings: int
    via: Viability
    elapsed: float

    def trace_cell(self, line: int, visit: int = 1) -> RcValue:
        for row in self.trace:
            if row.line == line and row.visit == visit:
                return row.value
        raise KeyError(f"no trace row for line {line} (visit {visit})")

    def query_cycle(self, var: str, fields: Iterable[str], point: Optional[int] = None) -> bool:
        """May a cycle traversing exactly these fields be reachable from the
        variable?  False means such a cycle is provably impossible."""
        value = self._value_at(point)
        if var not in value.cyc:
            raise AnalysisError(f"unknown reference variable {var!r}")
        try:
            mask = self.universe.mask_of(fields)
        except KeyError as exc:
            raise AnalysisError(f"field {exc.args[0]!r} is not tracked") from exc
        return value.cyc_at(var).has_model(mask) and self.via.is_viable_mask(mask)

    def query_reach(self, v: str, w: str, point: Optional[int] = None) -> list[list[str]]:
        value = self._value_at(point)
        if (v, w) not in value.reach:
            raise AnalysisError(f"unknown reference variables ({v},{w})")
        return value.reach_at(v, w).drop_nonviable(self.via).json_models()

    def _value_at(self, point: Optional[int]) -> RcValue:
        if point is None:
            return self.final
        if point not in self.point_post:
            raise AnalysisError(f"unknown program point {point}")
        return self.point_post[point]


@dataclass
class _Recorder:
    trace: list[TraceRow] = field(default_factory=list)
    visits: dict[int, int] = field(default_factory=dict)
    point_post: dict[int, RcValue] = field(default_factory=dict)
    loop_passes: dict[int, int] = field(default_factory=dict)

    def trace_line(self, line: int, value: RcValue) -> None:
        n = self.visits.get(line, 0) + 1
        self.visits[line] = n
        self.trace.append(TraceRow(line, n, value))

    def post(self, nid: int, value: RcValue) -> None:
        prev = self.point_post.get(nid)
        self.point_post[nid] = value if prev is None else prev.join(value)


@dataclass
class _Ctx:
    env: TypeEnv
    sp_ctx: object  # key into the sharing analysis point tables
    recorder: Optional[_Recorder]
    trace_on: bool = False

    def with_trace(self, on: bool) -> "_Ctx":
        return _Ctx(self.env, self.sp_ctx, self.recorder, on)


class Analyzer:
    def __init__(
        self,
        program: Program,
        ct: ClassTable,
        typeinfo: TypeInfo,
        sharing: SharingAnalysis,
        universe: FieldUniverse,
        widening_k: Optional[int] = 16,
        check_normal_form: bool = True,
    ):
        self.program = program
        self.ct = ct
        self.typeinfo = typeinfo
        self.sharing = sharing
        self.universe = universe
        self.via = Viability(ct, universe)
        self.widening_k = widening_k
        self.check_normal_form = check_normal_form
        self._zeta: dict[tuple, RcValue] = {}
        self._zeta_inputs: dict[tuple, tuple[MethodSig, RcValue, SharingState]] = {}
        self._zeta_widen: dict[tuple, dict] = {}
        self._new_context = False
        self._widenings = 0

    # ------------------------------------------------------------------
    # helpers

    def _only(self, fields: Iterable[str]) -> PathFormula:
        return PathFormula.from_models(self.universe, [self.universe.abstract_mask(fields)])

    def _false(self) -> PathFormula:
        return PathFormula.false(self.universe)

    def _true(self) -> PathFormula:
        return PathFormula.true(self.universe)

    def _sp_before(self, ctx: _Ctx, nid: int) -> SharingState:
        return self.sharing.state_before(ctx.sp_ctx, nid)

    def _assert_normal(self, value: RcValue) -> None:
        if self.check_normal_form and not value.is_normal():
            raise AssertionError("transfer produced a value out of normal form")

    # ------------------------------------------------------------------
    # expressions

    def eval_expr(self, e: Expr, I: RcValue, ctx: _Ctx) -> RcValue:
        if isinstance(e, (IntLit, NullLit)):
            return I
        if isinstance(e, NewObject):
            empty = self._only(())
            return I.with_reach(RESULT_VAR, RESULT_VAR, empty).with_cyc(RESULT_VAR, empty)
        if isinstance(e, VarRef):
            if ctx.env.type_of(e.name) == INT_TYPE:
                return I
            return I.copy_var(e.name, RESULT_VAR)
        if isinstance(e, BinOp):
            left = self.eval_expr(e.left, I, ctx).project([RESULT_VAR])
            right = self.eval_expr(e.right, left, ctx)
            return right.project([RESULT_VAR])
        if isinstance(e, FieldRead):
            return self._eval_field_read(e, I, ctx)
        if isinstance(e, MethodCall):
            return self._eval_call(e, I, ctx)
        raise AnalysisError(f"unsupported expression {e!r}")

    def _eval_field_read(self, e: FieldRead, I: RcValue, ctx: _Ctx) -> RcValue:
        if self.ct.field_type(e.fieldname) == INT_TYPE:
            return I
        sp = self._sp_before(ctx, e.nid)
        v = e.var
        fld = self._only([e.fieldname])
        fld_mask = self.universe.abstract_mask([e.fieldname])
        extra = RcValue.bottom(self.universe, I.variables, I.ref_vars)
        cyc_v = I.cyc_at(v)
        extra.cyc[RESULT_VAR] = cyc_v
        extra.reach[(RESULT_VAR, RESULT_VAR)] = cyc_v
        for w in I.variables:
            if w not in I.ref_vars or w == RESULT_VAR:
                continue
            extra.reach[(RESULT_VAR, w)] = I.reach_at(v, w).difference(fld)
            if sp.has_ds(w, v):
                extra.reach[(w, RESULT_VAR)] = self._true()
            else:
                into = I.reach_at(w, v).concat(fld)
                # the read value may be w itself: exactly when the one-step
                # path through this field is an admitted way from v to w
                if I.reach_at(v, w).has_model(fld_mask):
                    into = into.join(self._only(()))
                extra.reach[(w, RESULT_VAR)] = into
        return I.join(extra).normalize()

    def _eval_call(self, e: MethodCall, I: RcValue, ctx: _Ctx) -> RcValue:
        sp = self._sp_before(ctx, e.nid)
        actuals = [e.receiver] + list(e.args)
        ref_actual = [a for a in actuals if a in I.ref_vars]
        callees = self.typeinfo.call_targets[e.nid]

        projected = I.project([x for x in I.variables if x not in set(actuals)])
        summary_back = RcValue.bottom(self.universe, I.variables, I.ref_vars)
        for sig in callees:
            callee_env = self.typeinfo.env_for(sig.key)
            formals = list(sig.input_vars)
            callee_vars = tuple(formals) + (OUT_VAR,)
            callee_refs = frozenset(
                f for f in formals if callee_env.type_of(f) != INT_TYPE
            ) | (frozenset([OUT_VAR]) if sig.return_type != INT_TYPE else frozenset())
            entry = RcValue.bottom(self.universe, callee_vars, callee_refs)
            formal_to_actual = dict(zip(formals, actuals))
            for f1 in formals:
                if f1 not in callee_refs:
                    continue
                a1 = formal_to_actual[f1]
                for f2 in formals:
                    if f2 in callee_refs:
                        entry.reach[(f1, f2)] = projected.reach_at(
                            a1, formal_to_actual[f2]
                        )
                entry.cyc[f1] = projected.cyc_at(a1)
            sp_entry = sp.restrict(actuals).remap_from(formal_to_actual)
            output = self._denotation(sig, entry, sp_entry)
            mapping = dict(formal_to_actual)
            mapping[OUT_VAR] = RESULT_VAR
            summary_back = summary_back.join(
                output.remap(mapping, I.variables, I.ref_vars)
            )

        sp_after, impure = self.sharing.call_effect(e, sp, ctx.env)

        # paths the callee may have created between caller variables: for an
        # impure argument, pre-call reachability into it, the callee-computed
        # leg between arguments, and pre-call reachability out of the other
        # argument are stitched together; deep-sharing on either side forfeits
        # the field information for that side.
        assembled = RcValue.bottom(self.universe, I.variables, I.ref_vars)
        others = [w for w in I.variables if w in I.ref_vars and w != RESULT_VAR]
        for i, vi in enumerate(actuals):
            if vi not in I.ref_vars or i not in impure:
                continue
            for vj in ref_actual:
                ds_ij_after = sp_after.has_ds(vi, vj)
                leg = summary_back.reach_at(vi, vj)
                for w1 in others:
                    ds_w1_vi = sp.has_ds(w1, vi)
                    into = I.reach_at(w1, vi)
                    for w2 in others:
                        if I.reach_at(vj, w2).is_false:
                            continue
                        if not ds_w1_vi and not ds_ij_after:
                            f = into.concat(leg).concat(I.reach_at(vj, w2))
                        elif not ds_w1_vi and ds_ij_after:
                            f = into.concat(self._true())
                        elif ds_w1_vi and not ds_ij_after:
                            f = self._true().concat(I.reach_at(vj, w2))
                        else:
                            f = self._true()
                        key = (w1, w2)
                        assembled.reach[key] = assembled.reach[key].join(f)

        # result rows: what the result may reach among caller variables
        for w in others:
            acc = self._false()
            for vk in ref_actual:
                if sp_after.has_ds(vk, RESULT_VAR):
                    fk = self._true()
                else:
                    fk = summary_back.reach_at(RESULT_VAR, vk).concat(
                        I.reach_at(vk, w)
                    ).join(I.reach_at(vk, w).difference(summary_back.reach_at(vk, RESULT_VAR)))
                acc = acc.join(fk)
            assembled.reach[(RESULT_VAR, w)] = acc

        # and the reverse direction: the result may sit inside an argument's
        # structure, so anything leading into that argument may lead to it —
        # including plain aliasing when the argument reaches both
        for w in others:
            acc = self._false()
            for vk in ref_actual:
                if sp.has_ds(w, vk):
                    gk = self._true()
                else:
                    leg = summary_back.reach_at(vk, RESULT_VAR)
                    gk = I.reach_at(w, vk).concat(leg)
                    if not leg.is_false and not I.reach_at(vk, w).is_false:
                        gk = gk.join(self._only(()))
                acc = acc.join(gk)
            assembled.reach[(w, RESULT_VAR)] = acc

        # cyclicity: cycles built inside an impure argument spread to
        # everything sharing with it in any direction
        for i, vi in enumerate(actuals):
            if vi not in I.ref_vars or i not in impure:
                continue
            ci = summary_back.cyc_at(vi)
            for w in others:
                if (
                    sp.has_ds(w, vi)
                    or not I.reach_at(w, vi).is_false
                    or not I.reach_at(vi, w).is_false
                ):
                    assembled.cyc[w] = assembled.cyc[w].join(ci)
        crho = self._false()
        for vk in ref_actual:
            if not summary_back.reach_at(vk, RESULT_VAR).is_false:
                crho = crho.join(I.cyc_at(vk))
        assembled.cyc[RESULT_VAR] = crho

        return I.join(summary_back).join(assembled).normalize()

    # ------------------------------------------------------------------
    # commands

    def exec_body(self, body: list[Command], I: RcValue, ctx: _Ctx) -> RcValue:
        for cmd in body:
            I = self.exec_cmd(cmd, I, ctx)
        return I

    def exec_cmd(self, cmd: Command, I: RcValue, ctx: _Ctx) -> RcValue:
        out = self._exec(cmd, I, ctx)
        self._assert_normal(out)
        if ctx.recorder is not None:
            ctx.recorder.post(cmd.nid, out)
            if ctx.trace_on:
                ctx.recorder.trace_line(cmd.line, out)
        return out

    def _exec(self, cmd: Command, I: RcValue, ctx: _Ctx) -> RcValue:
        if isinstance(cmd, Skip):
            return I
        if isinstance(cmd, Assign):
            evaluated = self.eval_expr(cmd.expr, I, ctx)
            if cmd.var not in I.ref_vars:
                # an int target still consumes the expression result
                return evaluated.project([RESULT_VAR])
            return evaluated.project([cmd.var]).rename({RESULT_VAR: cmd.var})
        if isinstance(cmd, FieldWrite):
            return self._exec_field_write(cmd, I, ctx)
        if isinstance(cmd, If):
            # trace rows inside branches would collide with the joined row
            inner = ctx.with_trace(False)
            t = self.exec_body(cmd.then_body, I, inner)
            e = self.exec_body(cmd.else_body, I, inner)
            return t.join(e).normalize()
        if isinstance(cmd, While):
            return self._exec_while(cmd, I, ctx)
        if isinstance(cmd, Return):
            evaluated = self.eval_expr(cmd.expr, I, ctx)
            if OUT_VAR not in I.ref_vars:
                return evaluated.project([RESULT_VAR])
            return evaluated.rename({RESULT_VAR: OUT_VAR})
        raise AnalysisError(f"unsupported command {cmd!r}")

    def _exec_field_write(self, cmd: FieldWrite, I: RcValue, ctx: _Ctx) -> RcValue:
        evaluated = self.eval_expr(cmd.expr, I, ctx)
        if self.ct.field_type(cmd.fieldname) == INT_TYPE:
            return evaluated.project([RESULT_VAR])
        v = cmd.var
        fld = self._only([cmd.fieldname])
        # the new edge alone, or the new edge plus the cycle it may close
        mid = fld.join(fld.concat(evaluated.reach_at(RESULT_VAR, v)))
        extra = RcValue.bottom(self.universe, I.variables, I.ref_vars)
        for (w1, w2) in extra.reach:
            extra.reach[(w1, w2)] = (
                evaluated.reach_at(w1, v).concat(mid).concat(evaluated.reach_at(RESULT_VAR, w2))
            )
        cyc_new = evaluated.reach_at(RESULT_VAR, v).concat(fld).join(
            evaluated.cyc_at(RESULT_VAR)
        )
        for w in extra.cyc:
            if not evaluated.reach_at(w, v).is_false:
                extra.cyc[w] = cyc_new
        return evaluated.join(extra).project([RESULT_VAR]).normalize()

    def _exec_while(self, cmd: While, I: RcValue, ctx: _Ctx) -> RcValue:
        head = I.canonical(self.via)
        counters: dict = {}
        passes = 0
        inner = ctx
        while True:
            if ctx.recorder is not None and ctx.trace_on:
                ctx.recorder.trace_line(cmd.line, head)
            after = self.exec_body(cmd.body, head, inner)
            passes += 1
            joined = head.join(after).canonical(self.via)
            widened = self._widen_value(head, joined, counters, record=ctx.recorder is not None)
            if widened == head:
                break
            head = widened
        if ctx.recorder is not None:
            ctx.recorder.loop_passes[cmd.nid] = passes
        return head

    def _widen_value(
        self, old: RcValue, new: RcValue, counters: dict, record: bool
    ) -> RcValue:
        if self.widening_k is None:
            return new
        out = new._fresh()
        for key in out.reach:
            if new.reach[key] != old.reach[key]:
                counters[("r", key)] = counters.get(("r", key), 0) + 1
                if counters[("r", key)] > self.widening_k:
                    out.reach[key] = self._true()
                    if record:
                        self._widenings += 1
        for v in out.cyc:
            if new.cyc[v] != old.cyc[v]:
                counters[("c", v)] = counters.get(("c", v), 0) + 1
                if counters[("c", v)] > self.widening_k:
                    out.cyc[v] = self._true()
                    if record:
                        self._widenings += 1
        return out.normalize()

    # ------------------------------------------------------------------
    # method denotations

    def _denotation(self, sig: MethodSig, entry: RcValue, sp_entry: SharingState) -> RcValue:
        key = (sig.key, entry.key(), sp_entry.key())
        if key not in self._zeta:
            env = self.typeinfo.env_for(sig.key)
            out_refs = frozenset(
                f for f in sig.input_vars if env.type_of(f) != INT_TYPE
            ) | (frozenset([OUT_VAR]) if sig.return_type != INT_TYPE else frozenset())
            self._zeta[key] = RcValue.bottom(
                self.universe, tuple(sig.input_vars) + (OUT_VAR,), out_refs
            )
            self._zeta_inputs[key] = (sig, entry, sp_entry)
            self._zeta_widen[key] = {}
            self._new_context = True
        return self._zeta[key]

    def _run_method(
        self,
        sig: MethodSig,
        entry: RcValue,
        sp_entry: SharingState,
        recorder: Optional[_Recorder] = None,
        trace_on: bool = False,
    ) -> RcValue:
        env = self.typeinfo.env_for(sig.key)
        decl = self.ct.method_decl(sig)
        inputs = list(sig.input_vars)
        local_names = [n for _, n in self.ct.method_locals(sig)]
        ref_inputs = [f for f in inputs if env.type_of(f) != INT_TYPE]
        shadow_params = [w for w in sig.param_names if env.type_of(w) != INT_TYPE]
        shadows = {w: shallow_name(w) for w in shadow_params}
        body_vars = (
            tuple(inputs)
            + tuple(local_names)
            + (OUT_VAR,)
            + tuple(shadows.values())
            + (RESULT_VAR,)
        )
        refs = set(ref_inputs) | set(shadows.values()) | {RESULT_VAR}
        refs |= {n for n in local_names if env.type_of(n) != INT_TYPE}
        if sig.return_type != INT_TYPE:
            refs.add(OUT_VAR)
        I0 = RcValue.bottom(self.universe, body_vars, frozenset(refs))
        for (a, b), f in entry.reach.items():
            if (a, b) in I0.reach:
                I0.reach[(a, b)] = f
        for v, f in entry.cyc.items():
            if v in I0.cyc:
                I0.cyc[v] = f
        for w, u in shadows.items():
            I0 = I0.copy_var(w, u)
        ctx = _Ctx(env, self.sharing.ctx_key(sig, sp_entry), recorder, trace_on)
        if recorder is not None and trace_on:
            recorder.trace_line(decl.line, I0)
        I1 = self.exec_body(decl.body, I0, ctx)
        keep = set(shadows.values()) | {OUT_VAR}
        if "this" in refs:
            keep.add("this")
        I2 = I1.project([x for x in body_vars if x not in keep])
        I3 = I2.rename({u: w for w, u in shadows.items()})
        out_vars = tuple(inputs) + (OUT_VAR,)
        out_refs = frozenset(ref_inputs) | (
            frozenset([OUT_VAR]) if sig.return_type != INT_TYPE else frozenset()
        )
        result = I3.remap({x: x for x in out_vars}, out_vars, out_refs)
        return result.normalize().canonical(self.via)

    # ------------------------------------------------------------------
    # drivers

    def _stabilize(self, run_entry: Callable[[], None]) -> int:
        rounds = 0
        while True:
            rounds += 1
            self._new_context = False
            changed = False
            run_entry()
            for key, (sig, entry, sp_entry) in list(self._zeta_inputs.items()):
                out = self._run_method(sig, entry, sp_entry)
                merged = self._widen_memo(key, self._zeta[key], self._zeta[key].join(out))
                if merged != self._zeta[key]:
                    self._zeta[key] = merged
                    changed = True
            if not changed and not self._new_context:
                return rounds

    def _widen_memo(self, key: tuple, old: RcValue, new: RcValue) -> RcValue:
        if self.widening_k is None:
            return new
        return self._widen_value(old, new, self._zeta_widen[key], record=False)

    def analyze_main(self, init_rc: Optional[RcValue], init_sp: Optional[SharingState]):
        if self.program.main is None:
            raise AnalysisError("program has no main block")
        env = self.typeinfo.env_for("main")
        variables = tuple(env.variables) + (RESULT_VAR,)
        refs = frozenset(env.ref_vars) | {RESULT_VAR}
        bottom = RcValue.bottom(self.universe, variables, refs)
        entry = bottom
        if init_rc is not None:
            entry = bottom.join(init_rc.remap({x: x for x in init_rc.variables}, variables, refs))
        entry = entry.normalize()
        sp_entry = init_sp or SharingState.empty()
        self.sharing.analyze_main(sp_entry)
        ctx_plain = _Ctx(env, "main", None)

        def run_entry():
            self.exec_body(self.program.main.body, entry, ctx_plain)

        rounds = self._stabilize(run_entry)
        recorder = _Recorder()
        self._widenings = 0
        ctx_rec = _Ctx(env, "main", recorder, trace_on=True)
        recorder.trace_line(self.program.main.line, entry)
        final = self.exec_body(self.program.main.body, entry, ctx_rec)
        self._record_contexts(recorder)
        return entry, final, recorder, rounds

    def analyze_method(self, sig: MethodSig, init_rc: RcValue, init_sp: SharingState):
        self.sharing.analyze_method_entry(sig, init_sp)

        def run_entry():
            self._run_method(sig, init_rc, init_sp)

        rounds = self._stabilize(run_entry)
        recorder = _Recorder()
        self._widenings = 0
        final = self._run_method(sig, init_rc, init_sp, recorder, trace_on=True)
        self._record_contexts(recorder)
        return final, recorder, rounds

    def _record_contexts(self, recorder: _Recorder) -> None:
        """One recording pass over every callee context with the final
        interpretation, so per-point values cover all call contexts."""
        for key, (sig, entry, sp_entry) in list(self._zeta_inputs.items()):
            self._run_method(sig, entry, sp_entry, recorder, trace_on=False)


# --------------------------------------------------------------------------
# top-level driver


def find_entry_sig(ct: ClassTable, name: str) -> MethodSig:
    matches = [s for s in ct.all_method_sigs() if s.name == name or f"{s.owner}.{s.name}" == name]
    if not matches:
        raise AnalysisError(f"no method named {name!r}")
    if len(matches) > 1:
        raise AnalysisError(
            f"ambiguous entry {name!r}; qualify as Class.method (candidates: "
            + ", ".join(str(s) for s in matches)
            + ")"
        )
    return matches[0]


def analyze_program(
    program: Program,
    ct: ClassTable,
    typeinfo: TypeInfo,
    *,
    tracked: Optional[Iterable[str]] = None,
    entry: EntryKey = "main",
    init_rc: Optional[RcValue] = None,
    init_sp: Optional[SharingState] = None,
    widening_k: Optional[int] = 16,
    check_normal_form: bool = True,
) -> AnalysisResult:
    started = time.perf_counter()
    if tracked is None:
        universe = FieldUniverse.of(ct.reference_fields)
    else:
        universe = FieldUniverse.tracked(ct.reference_fields, tracked)
    sharing = SharingAnalysis(program, ct, typeinfo)
    analyzer = Analyzer(
        program, ct, typeinfo, sharing, universe, widening_k, check_normal_form
    )
    if entry == "main":
        entry_value, final, recorder, rounds = analyzer.analyze_main(init_rc, init_sp)
        env = typeinfo.env_for("main")
        display = tuple(v for v in env.ref_vars)
        entry_key: EntryKey = "main"
    else:
        sig = entry if isinstance(entry, MethodSig) else find_entry_sig(ct, str(entry))
        env = typeinfo.env_for(sig.key)
        variables = tuple(sig.input_vars) + (OUT_VAR,)
        refs = frozenset(f for f in sig.input_vars if env.type_of(f) != INT_TYPE)
        if sig.return_type != INT_TYPE:
            refs = refs | {OUT_VAR}
        bottom = RcValue.bottom(analyzer.universe, variables, refs)
        start = bottom if init_rc is None else bottom.join(
            init_rc.remap({x: x for x in init_rc.variables}, variables, refs)
        )
        start = start.normalize()
        sp_start = init_sp or SharingState.empty()
        final, recorder, rounds = analyzer.analyze_method(sig, start, sp_start)
        display = tuple(env.ref_vars)
        entry_key = sig.key
    denotations: dict[tuple[str, str], dict[tuple, RcValue]] = {}
    for key, value in analyzer._zeta.items():
        denotations.setdefault(key[0], {})[key[1:]] = value
    final = final.canonical(analyzer.via)
    point_post = {
        nid: v.canonical(analyzer.via) for nid, v in recorder.point_post.items()
    }
    return AnalysisResult(
        universe=analyzer.universe,
        entry=entry_key,
        display_vars=display,
        final=final,
        trace=[
            TraceRow(r.line, r.visit, r.value.canonical(analyzer.via)) for r in recorder.trace
        ],
        point_post=point_post,
        denotations=denotations,
        rounds=rounds,
        loop_passes=dict(recorder.loop_passes),
        widenings=analyzer._widenings,
        via=analyzer.via,
        elapsed=time.perf_counter() - started,
    )
