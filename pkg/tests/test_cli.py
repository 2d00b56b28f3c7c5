import json
import os

from click.testing import CliRunner

from src.hkzeta.cli import (EXIT_BUDGET, EXIT_INVALID, EXIT_UNSUPPORTED, EXIT_VERIFY_FAILED,
                            JobSpec, cli)
from src.hkzeta.hkgeom import LineBundle
from src.hkzeta.utils import DEFAULT_CONFIG, load_config

CURVE_FILE = os.path.join(os.path.dirname(__file__), '..', 'config-files', 'curves', 'elliptic_q2.json')
X21 = 'HK(r=1,t=2;a=1)'


def run(*args):
    return CliRunner().invoke(cli, list(args))


def test_zeta_json():
    result = run('zeta', '--variety', X21, '--bundle', '2,1', '-N', '5')
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data['coefficients'] == [4, 0, 12, 24, 48, 72]
    assert data['route'] == 'open'
    assert data['classification']['position'] == 'EqualAB'


def test_zeta_anticanonical_constants():
    result = run('zeta', '--variety', X21, '--anticanonical', '-N', '2')
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data['constants']['anticanonical']['value'] == '3/8'
    assert data['bundle'] == [2, 1]


def test_zeta_product_route():
    result = run('zeta', '--variety', 'HK(r=1,t=3;a=0)', '--anticanonical')
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)['route'] == 'product'


def test_zeta_csv():
    result = run('zeta', '--variety', X21, '--bundle', '2,1', '-N', '2', '--csv')
    assert result.exit_code == 0, result.output
    assert result.output.splitlines() == ['M,coefficient', '0,4', '1,0', '2,12']


def test_zeta_invalid_bundle():
    assert run('zeta', '--variety', X21, '--bundle', '0,1').exit_code == EXIT_INVALID
    assert run('zeta', '--variety', X21, '--bundle', '2,1', '--anticanonical').exit_code == EXIT_INVALID
    assert run('zeta', '--variety', 'HK(r=1,t=2;a=2,1)').exit_code == EXIT_INVALID


def test_count_csv():
    result = run('count', '--variety', X21, '--bundle', '2,1', '--m-max', '3')
    assert result.exit_code == 0, result.output
    assert result.output.splitlines() == ['M,count', '0,4', '1,0', '2,12', '3,24']


def test_count_components():
    result = run('count', '--variety', 'HK(r=1,t=3;a=1)', '--anticanonical', '--m-max', '0',
                 '--components', '--json')
    assert result.exit_code == 0, result.output
    rows = json.loads(result.output)
    assert rows[-1] == {'M': 0, 'component': 'total', 'count': 21}
    assert [r['count'] for r in rows[:-1]] == [7, 2, 8, 4]


def test_count_whole():
    result = run('count', '--variety', X21, '--anticanonical', '--m-max', '1', '--whole', '--json')
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)[0] == {'M': 0, 'count': 9}


def test_count_budget_exceeded():
    result = run('count', '--variety', X21, '--bundle', '2,1', '--m-max', '5', '--budget', '10')
    assert result.exit_code == EXIT_BUDGET


def test_count_needs_genus_zero():
    result = run('count', '--variety', X21, '--bundle', '2,1', '--curve', CURVE_FILE)
    assert result.exit_code == EXIT_UNSUPPORTED
    result = run('count', '--variety', X21, '--bundle', '2,1', '--curve', CURVE_FILE, '--q', '3')
    assert result.exit_code == EXIT_UNSUPPORTED


def test_zeta_on_elliptic_curve():
    result = run('zeta', '--variety', X21, '--bundle', '2,1', '--curve', CURVE_FILE, '-N', '0')
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)['coefficients'] == [4]


def test_verify_passes():
    result = run('verify', '--variety', X21, '--bundle', '1,1', '--max-M', '3')
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data['passed']
    names = {row['check'] for row in data['checks']}
    assert {'coefficients', 'leading_constant', 'C_3', 'C_2', 'C_3 > 2 C_2'} <= names


def test_verify_detects_tampering():
    result = run('verify', '--variety', X21, '--bundle', '2,1', '--max-M', '3', '--tamper', '2')
    assert result.exit_code == EXIT_VERIFY_FAILED


def test_asym():
    result = run('asym', '--variety', X21, '--bundle', '1,1', '--m-max', '2')
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data['classification']['position'] == 'AGreaterB'
    assert [row['case'] for row in data['Q_L']] == [3, 3, 3]
    assert data['holomorphy']['ok'] is True


def test_invariants():
    result = run('invariants', '--variety', X21, '--bundle', '1,1')
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data['anticanonical'] == [2, 1]
    assert data['alpha_star'] == '1/6'
    assert data['big'] is True
    assert data['classification']['A_L'] == '2'


def test_decompose():
    result = run('decompose', '--variety', X21)
    assert result.exit_code == 0, result.output
    labels = [c['label'] for c in json.loads(result.output)['components']]
    assert labels == ['P^1[H^1]', 'A^1[H^2]', 'U[HK(r=1,t=2;a=1);(2,1)]']


def test_config_file(tmp_path):
    cfg = tmp_path / 'config.toml'
    cfg.write_text('[series]\ndefault_order = 2\n')
    result = run('--config', str(cfg), 'zeta', '--variety', X21, '--bundle', '2,1')
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)['coefficients'] == [4, 0, 12]


def test_job_spec_round_trip():
    job = JobSpec('HK(r=1,t=3;a=1)', '1,1', q=3, m_max=2)
    assert JobSpec.from_dict(job.to_dict()) == job
    X, L, curve = job.resolve()
    assert X.t == 3 and L == LineBundle(1, 1) and curve.q == 3
    assert JobSpec('HK(r=1,t=3;a=1)').anticanonical
    assert JobSpec('HK(r=1,t=3;a=1)').resolve()[1] == LineBundle(2, 2)


def test_job_spec_fields():
    assert set(JobSpec('HK(r=1,t=2;a=1)').to_dict()) == {'variety', 'bundle', 'q', 'curve', 'm_min', 'm_max'}


def test_load_config_merges_defaults(tmp_path):
    cfg = tmp_path / 'config.toml'
    cfg.write_text('[enumeration]\njobs = 3\n')
    config = load_config(str(cfg))
    assert set(config) == set(DEFAULT_CONFIG)
    assert config['enumeration']['jobs'] == 3
    assert config['enumeration']['budget'] == DEFAULT_CONFIG['enumeration']['budget']
    assert load_config(str(tmp_path / 'missing.toml')) == DEFAULT_CONFIG


def test_package_namespace():
    import src.hkzeta as hkzeta
    assert hkzeta.__version__ == '0.0.0'
    assert not hasattr(hkzeta, 'Z_UL')
    assert not hasattr(hkzeta, 'CurveData')
