"""Command-line front end.

Exit status is 0 on success, 1 on a spectral error or a failed check and 2
on unreadable or malformed input.
"""

import asyncio
import functools
import logging
import sys
from typing import Any, Callable, Iterable

import click

from ._util import SpectralError
from .forward_spectral import spectral_data
from .inverse_dirichlet import VERIFY_TOL, dirichlet_input, solve_dirichlet
from .inverse_periodic import TORUS_TOL, divisor_of, isospectral_stream, \
    solve_periodic
from .peakon_model import PeakonPair, pair_distance, rebase
from .polyalg import max_relative_distance
from .record import Record, RecordError
from .records import DiscriminantRecord, DivisorRecord, PairRecord, \
    RoundtripRecord, ShiftRecord, SpectralRecord, TraceRecord
from .store import RecordStore
from .store_factory import create_store
from .trace_validation import trace_report

__all__ = ('main',)

logger = logging.getLogger(__name__)

TRACE_TOL = 1e-8

input_option = click.option(
    '--input', '-i', 'input_path', required=True,
    type=click.Path(dir_okay=False), help='Input JSON file.',
)
output_option = click.option(
    '--output', '-o', 'output_path', default='-', show_default=True,
    type=click.Path(dir_okay=False, allow_dash=True),
    help='Output file, - for stdout.',
)
mode_option = click.option(
    '--mode', type=click.Choice(['float', 'rational']), default='float',
    show_default=True, help='Arithmetic of the forward computation.',
)


def tol_option(default: float) -> Callable:
    return click.option('--tol', type=float, default=default,
                        show_default=True, help='Tolerance.')


class Context:

    def __init__(self) -> None:
        self.store: RecordStore = create_store()

    def load_pair(self, path: str) -> PeakonPair:
        return self.store.load(PairRecord, path).to_pair()

    def write(self, path: str, lines: Iterable[str]) -> None:
        try:
            with click.open_file(path, 'w', encoding='utf8') as f:
                for line in lines:
                    f.write(line + '\n')
        except OSError as e:
            raise RecordError(f'Cannot write {path}: {e}') from e

    def write_record(self, path: str, record: Record) -> None:
        self.write(path, [self.store.dumps(record)])


def handle_errors(f: Callable) -> Callable:
    """Map library errors to exit codes."""
    @functools.wraps(f)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return f(*args, **kwargs)
        except SpectralError as e:
            click.echo(f'{type(e).__name__}: {e}', err=True)
            sys.exit(1)
        except RecordError as e:
            click.echo(f'{type(e).__name__}: {e}', err=True)
            sys.exit(2)
    return wrapper


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Log debug messages.')
@click.pass_context
def main(ctx: click.Context, verbose: bool) -> None:
    """Spectral analysis of periodic multi-peakon pairs."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format='%(levelname)s %(name)s: %(message)s',
    )
    ctx.obj = Context()


@main.command()
@input_option
@output_option
@mode_option
@click.pass_obj
@handle_errors
def forward(obj: Context, input_path: str, output_path: str,
            mode: str) -> None:
    """Pair file to spectral-data file."""
    pair = obj.load_pair(input_path)
    data = spectral_data(pair, exact=mode == 'rational')
    obj.write_record(output_path, SpectralRecord.from_spectral_data(data))


@main.command('inv-dirichlet')
@input_option
@output_option
@tol_option(VERIFY_TOL)
@click.pass_obj
@handle_errors
def inv_dirichlet(obj: Context, input_path: str, output_path: str,
                  tol: float) -> None:
    """Spectral-data file to pair file."""
    spec = obj.store.load(SpectralRecord, input_path).to_input()
    pair = solve_dirichlet(spec, tol=tol)
    obj.write_record(output_path, PairRecord.from_pair(pair))


@main.command('inv-periodic')
@click.option('--discriminant', 'discriminant_path', required=True,
              type=click.Path(dir_okay=False), help='Discriminant file.')
@click.option('--divisor', 'divisor_path', required=True,
              type=click.Path(dir_okay=False), help='Divisor file.')
@click.option('--base', type=float, default=0.0, show_default=True,
              help='Base point of the result.')
@output_option
@tol_option(TORUS_TOL)
@click.pass_obj
@handle_errors
def inv_periodic(obj: Context, discriminant_path: str, divisor_path: str,
                 base: float, output_path: str, tol: float) -> None:
    """Discriminant and divisor files to pair file."""
    record = obj.store.load(DiscriminantRecord, discriminant_path)
    divisor = obj.store.load(DivisorRecord, divisor_path).to_divisor()
    pair = solve_periodic(record.to_poly(), divisor, record.ell, base,
                          tol=tol)
    obj.write_record(output_path, PairRecord.from_pair(pair))


@main.command()
@input_option
@output_option
@tol_option(VERIFY_TOL)
@click.pass_obj
@handle_errors
def roundtrip(obj: Context, input_path: str, output_path: str,
              tol: float) -> None:
    """Reconstruct a pair both ways and report the deviations."""
    pair = obj.load_pair(input_path)
    data = spectral_data(pair)
    spec = dirichlet_input(data.dirichlet, pair.ell, pair.a)
    from_dirichlet = solve_dirichlet(spec, tol=tol)
    from_torus = solve_periodic(data.delta, divisor_of(data.dirichlet),
                                pair.ell, pair.a, tol=tol)
    record = RoundtripRecord()
    record.dirichlet_residual = pair_distance(pair, from_dirichlet)
    record.periodic_residual = pair_distance(pair, from_torus)
    record.max_residual = max(record.dirichlet_residual,
                              record.periodic_residual)
    record.passed = record.max_residual < tol
    obj.write_record(output_path, record)
    if not record.passed:
        sys.exit(1)


@main.command('trace-check')
@input_option
@output_option
@mode_option
@tol_option(TRACE_TOL)
@click.pass_obj
@handle_errors
def trace_check(obj: Context, input_path: str, output_path: str, mode: str,
                tol: float) -> None:
    """Residuals of the trace formulas and coefficient identities."""
    pair = obj.load_pair(input_path)
    report = trace_report(pair, exact=mode == 'rational')
    obj.write_record(output_path, TraceRecord.from_report(report, tol))
    if not report.passed(tol):
        sys.exit(1)


@main.command('isospectral-sample')
@input_option
@output_option
@click.option('--samples', type=click.IntRange(min=1), default=4,
              show_default=True, help='Torus angles per open gap.')
@click.option('--base', type=float, default=0.0, show_default=True,
              help='Base point of the pairs.')
@click.option('--jobs', type=click.IntRange(min=1), default=4,
              show_default=True, help='Concurrent solves.')
@tol_option(TORUS_TOL)
@click.pass_obj
@handle_errors
def isospectral_sample(obj: Context, input_path: str, output_path: str,
                       samples: int, base: float, jobs: int,
                       tol: float) -> None:
    """Discriminant file to a stream of pairs, one JSON document per line."""
    record = obj.store.load(DiscriminantRecord, input_path)
    pairs = isospectral_stream(record.to_poly(), record.ell, base,
                               samples=samples, jobs=jobs, tol=tol)
    result = asyncio.run(pairs.to_list())
    obj.write(output_path, obj.store.dump_lines(
        PairRecord.from_pair(p) for p in result
    ))


@main.command('shift-base')
@input_option
@output_option
@click.option('--new-base', type=float, required=True,
              help='Base point to move to.')
@tol_option(VERIFY_TOL)
@click.pass_obj
@handle_errors
def shift_base(obj: Context, input_path: str, output_path: str,
               new_base: float, tol: float) -> None:
    """Move the base point; the Dirichlet spectrum moves, Δ must not."""
    pair = obj.load_pair(input_path)
    shifted = rebase(pair, new_base)
    before, after = spectral_data(pair), spectral_data(shifted)
    record = ShiftRecord()
    record.a_old = pair.a
    record.a_new = shifted.a
    record.delta_residual = max_relative_distance(before.delta, after.delta)
    record.delta_unchanged = record.delta_residual <= tol
    record.kappas_before = list(before.dirichlet.kappas)
    record.kappas_after = list(after.dirichlet.kappas)
    record.pair = PairRecord.from_pair(shifted)
    obj.write_record(output_path, record)
    if not record.delta_unchanged:
        logger.error('Discriminant changed by %.3g', record.delta_residual)
        sys.exit(1)
