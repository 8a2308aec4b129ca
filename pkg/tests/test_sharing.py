import pathlib

import pytest

from fieldreach import SharingAnalysis, SharingState, analyze_purity
from fieldreach.oracle import Loc, _Interp, reachable_addrs
from fieldreach.syntax import FieldWrite, MethodCall, walk_commands, walk_exprs

from conftest import build


def per_line_ds(source: str) -> dict[int, frozenset]:
    """Fixpoint deep-sharing pairs after each top-level line of main."""
    program, ct, info = build(source)
    analysis = SharingAnalysis(program, ct, info)
    analysis.analyze_main()
    out: dict[int, frozenset] = {}
    for cmd in walk_commands(program.main.body):
        post = analysis.point_post.get("main", {}).get(cmd.nid)
        if post is not None:
            out[cmd.line] = post.ds
    return out


DLL = """
main {
  int i;
  Node tmp;
  Node x;
  i := 1;
  tmp := new Node;
  while (i < 10) {
    x := new Node;
    x.n := tmp;
    tmp.p := x;
    tmp := x;
    i := i + 1;
  }
}
class Node { Node n; Node p; }
"""


def test_dll_deep_sharing_annotations():
    ds = per_line_ds(DLL)
    tmp_only = frozenset({("tmp", "tmp")})
    full = frozenset({("tmp", "x"), ("tmp", "tmp"), ("x", "x")})
    assert ds[9] == tmp_only  # x := new Node
    assert ds[10] == full  # x.n := tmp
    assert ds[11] == full  # tmp.p := x
    assert ds[12] == full  # tmp := x
    assert ds[13] == full  # i := i + 1
    assert ds[8] == full  # loop exit


def test_straight_line_news_no_sharing():
    ds = per_line_ds(
        """
main {
  Node a;
  Node b;
  int i;
  a := new Node;
  b := new Node;
  i := 1 + 2;
}
class Node { Node n; Node p; }
"""
    )
    assert all(pairs == frozenset() for pairs in ds.values())


def test_aliases_do_not_deep_share():
    ds = per_line_ds(
        """
main {
  Node m1;
  Node m2;
  m1 := new Node;
  m2 := m1;
}
class Node { Node n; Node p; }
"""
    )
    assert all(pairs == frozenset() for pairs in ds.values())


def test_field_read_shares_into_region():
    ds = per_line_ds(
        """
main {
  Node a;
  Node b;
  Node v;
  a := new Node;
  b := new Node;
  a.n := b;
  v := a.n;
}
class Node { Node n; Node p; }
"""
    )
    # after v := a.n the variable v sits inside a's region
    assert ("a", "v") in ds[9]


def test_null_write_adds_nothing():
    ds = per_line_ds(
        """
main {
  Node a;
  a := new Node;
  a.n := null;
}
class Node { Node n; Node p; }
"""
    )
    assert all(pairs == frozenset() for pairs in ds.values())


def test_ds_grows_along_loop():
    program, ct, info = build(DLL)
    analysis = SharingAnalysis(program, ct, info)
    analysis.analyze_main()
    loop = program.main.body[2]
    pre = analysis.point_pre["main"]
    post = analysis.point_post["main"]
    for cmd in walk_commands(loop.body):
        assert pre[cmd.nid].ds <= post[cmd.nid].ds | pre[cmd.nid].ds


# --------------------------------------------------------------------------
# purity


def test_update_first_param_only():
    program, ct, info = build(
        """
class K {
  K mth(K x1, K x2) {
    x1.f := x2;
    x1 := null;
    return x2;
  }
  K f;
}
"""
    )
    impure = analyze_purity(program, ct, info)
    assert impure[("K", "mth")] == frozenset({1})  # x1 impure, x2 and this pure


def test_no_updates_all_pure():
    program, ct, info = build(
        """
class K {
  K f;
  K reader(K a) {
    K t;
    t := a.f;
    return t;
  }
}
"""
    )
    impure = analyze_purity(program, ct, info)
    assert impure[("K", "reader")] == frozenset()


def test_fresh_object_update_keeps_this_pure():
    program, ct, info = build(
        """
class K {
  K f;
  K m() {
    K a;
    a := new K;
    a.f := this.f;
    return a;
  }
}
"""
    )
    impure = analyze_purity(program, ct, info)
    assert 0 not in impure[("K", "m")]  # receiver stays pure


def test_purity_through_calls():
    program, ct, info = build(
        """
class K {
  K f;
  K touch(K v) {
    v.f := v;
    return v;
  }
  K outer(K w) {
    K r;
    r := this.touch(w);
    return r;
  }
}
"""
    )
    impure = analyze_purity(program, ct, info)
    assert impure[("K", "touch")] == frozenset({1})
    assert 1 in impure[("K", "outer")]  # w flows into the impure argument


def test_reassigned_parameter_still_flagged():
    # the update happens through an alias after the parameter was redirected
    program, ct, info = build(
        """
class K {
  K f;
  K m(K a) {
    K keep;
    keep := a;
    a := new K;
    keep.f := a;
    return a;
  }
}
"""
    )
    impure = analyze_purity(program, ct, info)
    assert 1 in impure[("K", "m")]


class _PurityTracer(_Interp):
    """Track, per top-level call, which arguments' entry regions receive a
    field update during the call's dynamic extent."""

    def __init__(self, program, ct):
        super().__init__(program, ct, budget=100_000, record=False)
        self.stack = []
        self.updated: dict[int, set[int]] = {}  # call nid -> arg positions

    def call(self, e, frame):
        if not self.stack:  # only trace outermost calls
            receiver = frame.get(e.receiver)
            regions = {}
            actual_vals = [receiver] + [frame.get(a) for a in e.args]
            for i, val in enumerate(actual_vals):
                if isinstance(val, Loc):
                    regions[i] = reachable_addrs(self.heap, val.addr)
            self.stack.append((e.nid, regions))
            try:
                return super().call(e, frame)
            finally:
                self.stack.pop()
        return super().call(e, frame)

    def exec_cmd(self, cmd, frame):
        if isinstance(cmd, FieldWrite) and self.stack:
            base = frame.get(cmd.var)
            if isinstance(base, Loc):
                nid, regions = self.stack[-1]
                for i, region in regions.items():
                    if base.addr in region:
                        self.updated.setdefault(nid, set()).add(i)
        super().exec_cmd(cmd, frame)


def test_pure_arguments_never_updated_dynamically():
    # for every top-level call in the corpus, any argument whose entry
    # structure is concretely updated must be flagged possibly-impure by the
    # per-call-site sharing summary
    from corpus import CORPUS

    for name, src in sorted(CORPUS.items()):
        program, ct, info = build(src)
        analysis = SharingAnalysis(program, ct, info)
        analysis.analyze_main()
        env = info.env_for("main")
        call_nodes = {}
        for cmd in walk_commands(program.main.body):
            for node in (
                sub
                for e in [getattr(cmd, "expr", None), getattr(cmd, "guard", None)]
                if e is not None
                for sub in walk_exprs(e)
            ):
                if isinstance(node, MethodCall):
                    call_nodes[node.nid] = node
        if not call_nodes:
            continue
        tracer = _PurityTracer(program, ct)
        tracer.run_main()
        for nid, updated in tracer.updated.items():
            node = call_nodes[nid]
            sp = analysis.state_before("main", nid)
            _, flags = analysis.call_effect(node, sp, env)
            assert updated <= set(flags), (name, nid, updated, flags)


def test_summary_depends_on_entry_sharing():
    program, ct, info = build(
        """
class K {
  K f;
  K mth(K x1, K x2) {
    x1.f := x1;
    return x2;
  }
}
"""
    )
    analysis = SharingAnalysis(program, ct, info)
    sig = ct.resolve_method("K", "mth")
    independent = SharingState.empty().add_sh(
        [("this", "this"), ("x1", "x1"), ("x2", "x2")]
    )
    assert analysis.analyze_method_entry(sig, independent).impure == frozenset({1})
    entangled = independent.add_sh([("x1", "x2")])
    assert analysis.analyze_method_entry(sig, entangled).impure == frozenset({1, 2})
