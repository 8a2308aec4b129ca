"""Class table: subclass relation, inherited fields, method signatures.

Field names are globally unique across classes, so a bare field name
identifies both its declaring class and its declared type.  The set of
reference-typed fields is the proposition universe of the analysis;
int fields are recorded but excluded from it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .syntax import ClassDecl, Command, INT_TYPE, MethodDecl, Program, OUT_VAR


class ClassTableError(Exception):
    def __init__(self, message: str, line: int = 0):
        super().__init__(message if line == 0 else f"line {line}: {message}")
        self.message = message
        self.line = line


@dataclass(frozen=True)
class MethodSig:
    owner: str
    name: str
    param_names: tuple[str, ...]
    param_types: tuple[str, ...]
    return_type: str
    line: int = field(compare=False, hash=False, default=0)

    @property
    def key(self) -> tuple[str, str]:
        return (self.owner, self.name)

    @property
    def input_vars(self) -> tuple[str, ...]:
        return ("this",) + self.param_names

    def __str__(self) -> str:
        return f"{self.owner}.{self.name}({', '.join(self.param_types)})"


class ClassTable:
    def __init__(self, program: Program):
        self._classes: dict[str, ClassDecl] = {}
        self._parent: dict[str, Optional[str]] = {}
        self._own_fields: dict[str, list[tuple[str, str]]] = {}
        self._field_type: dict[str, str] = {}
        self._field_owner: dict[str, str] = {}
        self._methods: dict[tuple[str, str], MethodSig] = {}
        self._method_decls: dict[tuple[str, str], MethodDecl] = {}
        self._build(program)

    # -- construction

    def _build(self, program: Program) -> None:
        for c in program.classes:
            if c.name == INT_TYPE:
                raise ClassTableError("'int' cannot be a class name", c.line)
            if c.name in self._classes:
                raise ClassTableError(f"duplicate class {c.name!r}", c.line)
            self._classes[c.name] = c
            self._parent[c.name] = c.parent
        for c in program.classes:
            if c.parent is not None and c.parent not in self._classes:
                raise ClassTableError(f"unknown superclass {c.parent!r}", c.line)
        # the extends chain must be acyclic
        for name in self._classes:
            seen = {name}
            cur = self._parent[name]
            while cur is not None:
                if cur in seen:
                    raise ClassTableError(f"cyclic extends chain through {name!r}")
                seen.add(cur)
                cur = self._parent[cur]
        for c in program.classes:
            own: list[tuple[str, str]] = []
            for fname, ftype in c.fields:
                if ftype != INT_TYPE and ftype not in self._classes:
                    raise ClassTableError(
                        f"field {fname!r} has unknown type {ftype!r}", c.line
                    )
                if fname in self._field_type:
                    raise ClassTableError(
                        f"field {fname!r} declared in both "
                        f"{self._field_owner[fname]!r} and {c.name!r}",
                        c.line,
                    )
                self._field_type[fname] = ftype
                self._field_owner[fname] = c.name
                own.append((fname, ftype))
            self._own_fields[c.name] = own
        for c in program.classes:
            for m in c.methods:
                key = (c.name, m.name)
                if key in self._methods:
                    raise ClassTableError(
                        f"duplicate method {m.name!r} in class {c.name!r}", m.line
                    )
                seen_names: set[str] = set()
                for _, pname in m.params:
                    if pname in seen_names or pname == "this":
                        raise ClassTableError(
                            f"duplicate or reserved parameter {pname!r}", m.line
                        )
                    seen_names.add(pname)
                for _, lname in m.locals:
                    if lname in seen_names or lname == "this" or lname == OUT_VAR:
                        raise ClassTableError(
                            f"duplicate or reserved local {lname!r}", m.line
                        )
                    seen_names.add(lname)
                sig = MethodSig(
                    c.name,
                    m.name,
                    tuple(n for _, n in m.params),
                    tuple(t for t, _ in m.params),
                    m.return_type,
                    m.line,
                )
                self._methods[key] = sig
                self._method_decls[key] = m
        # overriding methods must keep the inherited signature
        for (owner, name), sig in self._methods.items():
            parent = self._parent[owner]
            while parent is not None:
                psig = self._methods.get((parent, name))
                if psig is not None and (
                    psig.param_types != sig.param_types
                    or psig.return_type != sig.return_type
                ):
                    raise ClassTableError(
                        f"{owner}.{name} overrides {parent}.{name} with a different signature",
                        sig.line,
                    )
                parent = self._parent[parent]

    # -- queries

    @property
    def class_names(self) -> tuple[str, ...]:
        return tuple(sorted(self._classes))

    def is_class(self, name: str) -> bool:
        return name in self._classes

    def is_subclass(self, sub: str, sup: str) -> bool:
        """Reflexive-transitive subclass test."""
        cur: Optional[str] = sub
        while cur is not None:
            if cur == sup:
                return True
            cur = self._parent[cur]
        return False

    def subclasses_of(self, name: str) -> tuple[str, ...]:
        return tuple(c for c in self.class_names if self.is_subclass(c, name))

    def fields_of(self, name: str) -> tuple[tuple[str, str], ...]:
        """All fields of a class, inherited ones first, in declaration order."""
        chain: list[str] = []
        cur: Optional[str] = name
        while cur is not None:
            chain.append(cur)
            cur = self._parent[cur]
        out: list[tuple[str, str]] = []
        for cls in reversed(chain):
            out.extend(self._own_fields[cls])
        return tuple(out)

    def class_has_field(self, name: str, fieldname: str) -> bool:
        return any(f == fieldname for f, _ in self.fields_of(name))

    def has_field(self, fieldname: str) -> bool:
        return fieldname in self._field_type

    def field_type(self, fieldname: str) -> str:
        return self._field_type[fieldname]

    def field_owner(self, fieldname: str) -> str:
        return self._field_owner[fieldname]

    @property
    def reference_fields(self) -> frozenset[str]:
        return frozenset(
            f for f, t in self._field_type.items() if t != INT_TYPE
        )

    @property
    def int_fields(self) -> frozenset[str]:
        return frozenset(f for f, t in self._field_type.items() if t == INT_TYPE)

    def resolve_method(self, classname: str, method: str) -> Optional[MethodSig]:
        """Walk up the subclass chain to the defining class."""
        cur: Optional[str] = classname
        while cur is not None:
            sig = self._methods.get((cur, method))
            if sig is not None:
                return sig
            cur = self._parent[cur]
        return None

    def callable_methods(self, static_type: str, method: str) -> tuple[MethodSig, ...]:
        """Signatures a call on a receiver of the given static type may reach.

        Without a dedicated class analysis the receiver may hold any subclass
        of its declared type, so every resolution from a subclass counts.
        """
        sigs: list[MethodSig] = []
        for sub in self.subclasses_of(static_type):
            sig = self.resolve_method(sub, method)
            if sig is not None and sig not in sigs:
                sigs.append(sig)
        return tuple(sorted(sigs, key=lambda s: s.key))

    def method_decl(self, sig: MethodSig) -> MethodDecl:
        return self._method_decls[sig.key]

    def method_body(self, sig: MethodSig) -> list[Command]:
        return self._method_decls[sig.key].body

    def method_locals(self, sig: MethodSig) -> tuple[tuple[str, str], ...]:
        return tuple(self._method_decls[sig.key].locals)

    def all_method_sigs(self) -> tuple[MethodSig, ...]:
        return tuple(sorted(self._methods.values(), key=lambda s: s.key))


def build_class_table(program: Program) -> ClassTable:
    return ClassTable(program)
