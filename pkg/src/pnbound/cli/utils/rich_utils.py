"""Rich utilities for CLI formatting and logging."""

import logging
import math

import structlog
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.text import Text
from rich.traceback import install


def setup_rich_logging(verbosity_level: int = 0, console: Console | None = None) -> None:
    """Setup Rich-based logging with verbosity levels.

    Args:
        verbosity_level: Verbosity level (-1=quiet, 0=clean, 1=info, 2=debug)
        console: Rich console instance to use
    """
    if console is None:
        console = Console(stderr=True)

    log_level_map = {
        -1: logging.ERROR,
        0: logging.WARNING,
        1: logging.INFO,
        2: logging.DEBUG,
    }
    log_level = log_level_map.get(verbosity_level, logging.WARNING)

    install(console=console, show_locals=(verbosity_level >= 2))

    if verbosity_level <= 0:
        rich_handler = RichHandler(
            console=console,
            show_time=False,
            show_path=False,
            show_level=False,
            rich_tracebacks=True,
            markup=False,
        )
    elif verbosity_level == 1:
        rich_handler = RichHandler(
            console=console,
            show_time=True,
            show_path=False,
            show_level=False,
            rich_tracebacks=True,
            markup=False,
        )
    else:
        rich_handler = RichHandler(
            console=console,
            show_time=True,
            show_path=True,
            show_level=True,
            rich_tracebacks=True,
            tracebacks_show_locals=True,
            markup=False,
        )

    rich_handler.setLevel(log_level)

    logging.basicConfig(
        level=log_level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[rich_handler],
        force=True,
    )

    if verbosity_level >= 2:
        final_processor = structlog.processors.JSONRenderer()
    elif verbosity_level == 1:
        final_processor = structlog.processors.KeyValueRenderer(
            key_order=['timestamp', 'level', 'event'],
            drop_missing=True,
        )
    else:
        final_processor = structlog.processors.KeyValueRenderer(
            key_order=['event'],
            drop_missing=True,
        )

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            final_processor,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def format_rad2(value: float | None) -> str:
    """Format an MSE value in rad^2 for tables."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "[dim]-[/dim]"
    return f"{value:.4e}"


def format_gap_db(gap_db: float) -> str:
    """Color a bound gap: green within 1 dB, yellow within 3 dB, red beyond."""
    if math.isnan(gap_db):
        return "[dim]-[/dim]"
    if gap_db < 0.0:
        color = "red"
    elif gap_db <= 1.0:
        color = "green"
    elif gap_db <= 3.0:
        color = "yellow"
    else:
        color = "red"
    return f"[{color}]{gap_db:+.2f} dB[/{color}]"


def create_error_panel(title: str, message: str, suggestion: str | None = None) -> Panel:
    """Create a formatted error panel.

    Args:
        title: Error title
        message: Error message
        suggestion: Optional suggestion for fixing the error
    """
    content = Text()
    content.append(message, style="red")

    if suggestion:
        content.append("\n\n")
        content.append("💡 Suggestion: ", style="yellow")
        content.append(suggestion, style="white")

    return Panel(
        content,
        title=f"[bold red]{title}[/bold red]",
        border_style="red",
        padding=(1, 2),
    )


def create_success_panel(title: str, message: str) -> Panel:
    """Create a formatted success panel."""
    content = Text()
    content.append("✓ ", style="green")
    content.append(message, style="white")

    return Panel(
        content,
        title=f"[bold green]{title}[/bold green]",
        border_style="green",
        padding=(1, 2),
    )


def create_info_panel(title: str, message: str) -> Panel:
    """Create a formatted info panel."""
    content = Text()
    content.append("ℹ ", style="blue")
    content.append(message, style="white")

    return Panel(
        content,
        title=f"[bold blue]{title}[/bold blue]",
        border_style="blue",
        padding=(1, 2),
    )
