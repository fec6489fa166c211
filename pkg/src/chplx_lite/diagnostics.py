"""Source positions and compiler diagnostics shared by every pass."""

from __future__ import annotations

from dataclasses import dataclass, field

BUILTIN_FILE = "<builtin>"


@dataclass(frozen=True, order=True)
class SourceSpan:
    file: str
    line: int
    column: int

    def __post_init__(self):
        if not self.file:
            raise ValueError("span file must be non-empty")
        # line 0 is reserved for the synthetic span of builtin symbols
        if self.file == BUILTIN_FILE:
            return
        if self.line < 1 or self.column < 1:
            raise ValueError(f"invalid span {self.file}:{self.line}:{self.column}")

    @classmethod
    def builtin(cls) -> "SourceSpan":
        return cls(BUILTIN_FILE, 0, 0)

    @property
    def is_builtin(self) -> bool:
        return self.file == BUILTIN_FILE

    def to_json(self) -> dict:
        return {"file": self.file, "line": self.line, "column": self.column}

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


@dataclass
class Diagnostic:
    message: str
    span: SourceSpan
    related: list[SourceSpan] = field(default_factory=list)
    expected: tuple[str, ...] = ()
    severity: str = "error"

    def __str__(self):
        text = f"{self.span}: {self.severity}: {self.message}"
        if self.expected:
            text += " (expected one of: " + ", ".join(self.expected) + ")"
        for other in self.related:
            text += f"\n{other}: note: previous occurrence here"
        return text


class CompileError(Exception):
    """Raised by a pass that produced one or more error diagnostics."""

    def __init__(self, diagnostics):
        if isinstance(diagnostics, Diagnostic):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class LexError(CompileError):
    pass


class ParseError(CompileError):
    pass
