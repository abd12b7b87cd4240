import json

import pytest
from click.testing import CliRunner

from pairs import LN3, LN4
from peakonspec.cli import main

TWO_PEAKONS = {
    'ell': LN4,
    'a': 0.0,
    'nodes': [
        {'x': 0.0, 'omega': 1.0, 'upsilon': 0.0, 'tanh_half': '0'},
        {'x': LN3, 'omega': -1.0, 'upsilon': 0.0, 'tanh_half': '1/2'},
    ],
    'tanh_half_period': '3/5',
}

TWO_DELTA = {'ell': LN4, 'coeffs': [1.25, 0.0, -1 / 6]}


class TestCli:

    @pytest.fixture
    def runner(self):
        return CliRunner()

    @pytest.fixture
    def write(self, tmp_path):
        def write(name, content):
            path = tmp_path / name
            if isinstance(content, str):
                path.write_text(content)
            else:
                path.write_text(json.dumps(content))
            return str(path)
        return write

    @pytest.fixture
    def run(self, runner, tmp_path):
        def run(*args, expect=0):
            output = str(tmp_path / 'out.json')
            result = runner.invoke(main, list(args) + ['-o', output])
            assert result.exit_code == expect, result.output
            if expect == 0:
                with open(output) as f:
                    return f.read()
            return result
        return run

    @pytest.mark.parametrize('mode', ['float', 'rational'])
    def test_forward(self, run, write, mode):
        pair = write('pair.json', TWO_PEAKONS)
        data = json.loads(run('forward', '-i', pair, '--mode', mode))
        assert data['kappas'][0] == pytest.approx(-4.5)
        assert data['kappas'][1] == 'inf'
        assert data['gammas'] == pytest.approx([1 / 6])
        assert data['periodic'] == pytest.approx([-1.5 ** 0.5, 1.5 ** 0.5])
        assert data['omega_a'] == 1.0

    def test_inv_dirichlet(self, run, write):
        pair = write('pair.json', TWO_PEAKONS)
        spectral = write('spectral.json', run('forward', '-i', pair))
        data = json.loads(run('inv-dirichlet', '-i', spectral))
        assert data['ell'] == LN4
        assert [n['x'] for n in data['nodes']] == pytest.approx([0, LN3])
        assert [n['omega'] for n in data['nodes']] == pytest.approx([1, -1])

    def test_inv_periodic(self, run, write):
        delta = write('delta.json', TWO_DELTA)
        divisor = write('divisor.json', {'points': [
            {'kappa': -4.5, 'zeta': 1.875},
            {'kappa': 'inf', 'zeta': 0.0},
        ]})
        data = json.loads(run('inv-periodic', '--discriminant', delta,
                              '--divisor', divisor))
        assert [n['x'] for n in data['nodes']] == pytest.approx([0, LN3])
        assert [n['omega'] for n in data['nodes']] == pytest.approx([1, -1])

    def test_inv_periodic_base(self, run, write):
        delta = write('delta.json', {'ell': LN4, 'coeffs': [1.25, -0.75]})
        divisor = write('divisor.json', {'points': [{'kappa': 'inf'}]})
        data = json.loads(run('inv-periodic', '--discriminant', delta,
                              '--divisor', divisor, '--base', '1.5'))
        assert data['a'] == 1.5
        assert [n['x'] for n in data['nodes']] == [1.5]

    def test_off_torus(self, run, write):
        delta = write('delta.json', TWO_DELTA)
        divisor = write('divisor.json', {'points': [
            {'kappa': -4.5, 'zeta': 1.0},
            {'kappa': 'inf', 'zeta': 0.0},
        ]})
        result = run('inv-periodic', '--discriminant', delta,
                     '--divisor', divisor, expect=1)
        assert 'DivisorOffTorus' in result.output

    def test_roundtrip(self, run, write):
        pair = write('pair.json', TWO_PEAKONS)
        data = json.loads(run('roundtrip', '-i', pair))
        assert data['passed'] is True
        assert data['max_residual'] < 1e-7

    @pytest.mark.parametrize('mode', ['float', 'rational'])
    def test_trace_check(self, run, write, mode):
        pair = write('pair.json', TWO_PEAKONS)
        data = json.loads(run('trace-check', '-i', pair, '--mode', mode))
        assert data['passed'] is True

    def test_isospectral_sample(self, run, write):
        delta = write('delta.json', TWO_DELTA)
        lines = run('isospectral-sample', '-i', delta, '--samples', '4',
                    '--jobs', '2').splitlines()
        assert len(lines) == 16
        pairs = [json.loads(line) for line in lines]
        assert all(p['ell'] == LN4 for p in pairs)

    def test_shift_base(self, run, write):
        pair = write('pair.json', TWO_PEAKONS)
        data = json.loads(run('shift-base', '-i', pair, '--new-base',
                              repr(LN3)))
        assert data['delta_unchanged'] is True
        assert data['kappas_before'][1] == 'inf'
        assert data['kappas_after'][0] == '-inf'
        assert data['kappas_after'][1] == pytest.approx(4.5)
        assert data['pair']['a'] == LN3

    def test_verbose(self, runner, write, tmp_path):
        pair = write('pair.json', TWO_PEAKONS)
        result = runner.invoke(main, ['--verbose', 'forward', '-i', pair,
                                      '-o', str(tmp_path / 'out.json')])
        assert result.exit_code == 0

    def test_stdout(self, runner, write):
        pair = write('pair.json', TWO_PEAKONS)
        result = runner.invoke(main, ['forward', '-i', pair])
        assert result.exit_code == 0
        assert '"kappas"' in result.output

    @pytest.mark.parametrize('content', [
        '{"ell": ',
        {'nodes': []},
        {'ell': LN4, 'nodes': [{'x': 0.5, 'omega': 0.0}]},
        {'ell': 'long', 'nodes': []},
    ])
    def test_bad_input(self, run, write, content):
        pair = write('pair.json', content)
        run('forward', '-i', pair, expect=2)

    def test_missing_file(self, run, tmp_path):
        run('forward', '-i', str(tmp_path / 'missing.json'), expect=2)

    def test_missing_option(self, runner):
        result = runner.invoke(main, ['forward'])
        assert result.exit_code == 2
