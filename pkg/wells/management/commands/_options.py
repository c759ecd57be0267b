"""Argument helpers and error mapping shared by the wells management commands."""
import argparse
import logging
from contextlib import contextmanager

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from django.utils import timezone

from wells.exceptions import DomainError, WellsError
from wells.model import LoudonTerm, WellSpec
from wells.records import OutputRecord, write_atomic
from wells.units import energy_scale_ev

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
SOLVER_ERROR = 3
VERIFY_FAILURE = 4


def positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return value


def non_negative_float(text):
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be non-negative")
    return value


def positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be at least 1")
    return value


def non_negative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be non-negative")
    return value


def wells_setting(key):
    return settings.WELLS[key]


def add_class_argument(parser):
    parser.add_argument(
        "--class", dest="class_p", type=int, choices=(0, 1, 2), required=True,
        help="Potential class: 0 steep well, 1 double well, 2 shallow well.",
    )


def add_extension_arguments(parser):
    parser.add_argument("--u1", type=non_negative_float, default=None,
                        help="Strength u1 = U1 d^2 of the added -u1 t^q/(1+t) term.")
    parser.add_argument("--q", type=int, choices=(0, 1), default=0,
                        help="Power q of the added term (default 0).")


def add_well_arguments(parser):
    add_class_argument(parser)
    parser.add_argument("--depth", type=positive_float, required=True,
                        help="Dimensionless depth u = U0 d^2.")
    add_extension_arguments(parser)


def add_scan_arguments(parser, states=True):
    if states:
        parser.add_argument("--states", type=positive_int, default=None,
                            help="Number of states (default from settings, 4).")
    parser.add_argument("--kappa-min", dest="kappa_min", type=positive_float, default=None,
                        help="Scan floor for the decay constant (default 1e-6).")


def add_output_arguments(parser, formats, default):
    parser.add_argument("--format", choices=formats, default=default)
    parser.add_argument("--out", default=None, help="Write to this file instead of stdout.")
    parser.add_argument("--stamp", action="store_true",
                        help="Add a generation timestamp to JSON output.")


def add_unit_arguments(parser):
    parser.add_argument("--mass", type=positive_float, default=None,
                        help="Particle mass in electron masses; with --width adds energy_ev.")
    parser.add_argument("--width", type=positive_float, default=None,
                        help="Well width d in nanometres; with --mass adds energy_ev.")


def extension_from(options):
    if options.get("u1") is None:
        return None
    return LoudonTerm(u1=options["u1"], q=options["q"])


def build_spec(class_p, u, options):
    """WellSpec from parsed flags; invalid combinations are usage errors."""
    try:
        return WellSpec(class_p, u, extension_from(options))
    except DomainError as error:
        raise CommandError(str(error), returncode=USAGE_ERROR)


def energy_scale(options):
    mass, width = options.get("mass"), options.get("width")
    if (mass is None) != (width is None):
        raise CommandError("--mass and --width must be given together", returncode=USAGE_ERROR)
    if mass is None:
        return None
    return energy_scale_ev(mass, width)


def scan_options():
    return {
        "log_points_per_decade": wells_setting("LOG_POINTS_PER_DECADE"),
        "linear_points": wells_setting("LINEAR_SCAN_POINTS"),
    }


@contextmanager
def solver_errors():
    """Map library failures to exit code 3."""
    try:
        yield
    except WellsError as error:
        logger.debug("solver failed", exc_info=True)
        raise CommandError(f"{type(error).__name__}: {error}", returncode=SOLVER_ERROR)


ECHO_SKIP = {"verbosity", "settings", "pythonpath", "traceback", "no_color", "force_color",
             "skip_checks", "out", "stamp", "stdout", "stderr"}


class WellsCommand(BaseCommand):
    """Common output handling: --format, --out and --stamp."""

    command_name = None

    def echo(self, options):
        return {key: value for key, value in sorted(options.items()) if key not in ECHO_SKIP}

    def record(self, options, spec, results, diagnostics):
        return OutputRecord(
            command=self.command_name,
            options=self.echo(options),
            spec=spec,
            results=results,
            diagnostics=diagnostics,
            generated_at=timezone.now().isoformat() if options.get("stamp") else None,
        )

    def emit(self, text, options):
        if options.get("out"):
            write_atomic(options["out"], text)
            logger.info("wrote %s", options["out"])
        else:
            self.stdout.write(text, ending="")
