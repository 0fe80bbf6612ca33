"""Command pattern implementation for indlift."""
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional

from indlift.backend.config import SuiteConfig
from indlift.backend.models import Verdict
from indlift.backend.services import SuiteReport, SuiteService
from indlift.backend.utils import canonical_dumps

logger = logging.getLogger(__name__)


class Command(ABC):
    """Abstract base class for commands."""

    @abstractmethod
    def execute(self) -> bool:
        """Execute the command."""
        pass

    @abstractmethod
    def undo(self) -> bool:
        """Undo the command."""
        pass


class CommandHistory:
    """Maintains a history of executed commands for undo functionality."""

    def __init__(self) -> None:
        """Initialize the command history."""
        self.history: List[Command] = []
        self.position: int = -1

    def execute_command(self, command: Command) -> bool:
        """Execute a command and add it to the history."""
        result = command.execute()
        if result:
            # drop the redo tail
            if self.position < len(self.history) - 1:
                self.history = self.history[: self.position + 1]
            self.history.append(command)
            self.position = len(self.history) - 1
        return result

    def undo(self) -> bool:
        """Undo the last executed command."""
        if self.position >= 0:
            result = self.history[self.position].undo()
            if result:
                self.position -= 1
            return result
        return False

    def redo(self) -> bool:
        """Redo the last undone command."""
        if self.position < len(self.history) - 1:
            self.position += 1
            return self.history[self.position].execute()
        return False


class _WritesOutput(Command):
    """Writes rendered text to an optional path and restores the previous file on undo."""

    def __init__(self, out: Optional[str]) -> None:
        self.out = Path(out) if out else None
        self.previous: Optional[str] = None
        self.rendered: Optional[str] = None

    def _write(self, text: str) -> None:
        self.rendered = text
        if self.out is None:
            return
        self.previous = self.out.read_text(encoding="utf-8") if self.out.exists() else None
        self.out.parent.mkdir(parents=True, exist_ok=True)
        self.out.write_text(text, encoding="utf-8")
        logger.info("wrote %s", self.out)

    def undo(self) -> bool:
        """Restore or remove the written file."""
        if self.rendered is None:
            return False
        if self.out is not None:
            if self.previous is None:
                self.out.unlink(missing_ok=True)
            else:
                self.out.write_text(self.previous, encoding="utf-8")
        self.rendered = None
        return True


class RunSuiteCommand(_WritesOutput):
    """Command to run a suite and render its report."""

    def __init__(
        self,
        service: SuiteService,
        config: SuiteConfig,
        out: Optional[str] = None,
        fmt: Optional[str] = None,
    ) -> None:
        """Initialize the run suite command."""
        super().__init__(out if out is not None else config.out)
        self.service = service
        self.config = config
        self.format = fmt or config.format
        self.report: Optional[SuiteReport] = None

    def execute(self) -> bool:
        """Execute the run suite command."""
        self.report = self.service.run_suite(self.config)
        if self.format == "text":
            self._write(self.report.render_text())
        else:
            self._write(canonical_dumps(self.report.to_dict()))
        return True

    def undo(self) -> bool:
        """Undo the run suite command."""
        if not super().undo():
            return False
        self.report = None
        return True


class ReplayFixtureCommand(Command):
    """Command to replay a stored verdict."""

    def __init__(self, service: SuiteService, path: str) -> None:
        """Initialize the replay fixture command."""
        self.service = service
        self.path = path
        self.verdict: Optional[Verdict] = None

    def execute(self) -> bool:
        """Execute the replay fixture command."""
        self.verdict = self.service.replay_fixture(self.path)
        return True

    def undo(self) -> bool:
        """Undo the replay fixture command."""
        if self.verdict is None:
            return False
        self.verdict = None
        return True


class ListRegistryCommand(_WritesOutput):
    """Command to render the registry catalogue."""

    def __init__(self, service: SuiteService, fmt: str = "text", out: Optional[str] = None) -> None:
        """Initialize the list registry command."""
        super().__init__(out)
        self.service = service
        self.format = fmt
        self.catalogue: Optional[Dict[str, List[Dict[str, Any]]]] = None

    def execute(self) -> bool:
        """Execute the list registry command."""
        self.catalogue = self.service.list_registry()
        if self.format == "json":
            self._write(canonical_dumps(self.catalogue))
        else:
            lines = []
            for section, entries in self.catalogue.items():
                lines.append(f"{section}:")
                lines.extend(f"  {entry['name']}" for entry in entries)
            self._write("\n".join(lines) + "\n")
        return True
