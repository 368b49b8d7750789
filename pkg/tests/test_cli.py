import json
import logging

import pytest

from visicone.cli import VisiconeRunner, build_parser, main, run
from visicone.config import CLI_DEFAULTS
from visicone.errors import InputError, ProblemFormatError


@pytest.fixture(autouse=True)
def restore_root_logging():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


def _write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding='utf-8')
    return str(path)


def test_project_golden_triangle(golden_dir, tmp_path):
    out = tmp_path / 'out.json'
    assert run(['project', '--input', str(golden_dir / 'tri.json'), '--output', str(out)]) == 0
    result = json.loads(out.read_text(encoding='utf-8'))
    expected = json.loads((golden_dir / 'tri.expected.json').read_text(encoding='utf-8'))
    assert result['query'] == expected['query']
    assert result['body'] == expected['body']
    assert result['facet_chain'] == expected['facet_chain']
    assert result['point'] == pytest.approx(expected['point'], abs=1e-8)
    assert result['distance'] == pytest.approx(expected['distance'], abs=1e-8)
    assert result['weights'] == pytest.approx(expected['weights'], abs=1e-12)


def test_projected_point_projects_to_itself(golden_dir, tmp_path):
    first = tmp_path / 'first.json'
    assert run(['project', '--input', str(golden_dir / 'tri.json'), '--output', str(first)]) == 0
    point = json.loads(first.read_text(encoding='utf-8'))['point']

    problem = json.loads((golden_dir / 'tri.json').read_text(encoding='utf-8'))
    problem['query'] = {'project': point}
    again = tmp_path / 'again.json'
    assert run(['project', '--input', _write(tmp_path, 'again-in.json', problem), '--output', str(again)]) == 0
    result = json.loads(again.read_text(encoding='utf-8'))
    assert result['point'] == pytest.approx(point, abs=1e-12)
    assert result['distance'] <= 1e-12


def test_output_floats_carry_seventeen_digits(golden_dir, capsys):
    assert run(['project', '--input', str(golden_dir / 'tri.json')]) == 0
    text = capsys.readouterr().out
    distance = json.loads(text)['distance']
    assert f'"distance": {distance:.17g}' in text
    assert len(f"{distance:.17g}".lstrip('0.')) >= 16


def test_visible_square(golden_dir, capsys):
    assert run(['visible', '--input', str(golden_dir / 'square_visible.json')]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result['visible'] is False
    assert result['in_cone'] is True
    assert result['lambda_star'] == pytest.approx(0.5, abs=1e-8)
    assert result['blocker'] == pytest.approx([1.0, 0.5], abs=1e-8)


def test_visible_tolerance_flag(golden_dir, capsys):
    assert run(['visible', '--input', str(golden_dir / 'square_visible.json'), '--vis-tol', '0.6']) == 0
    assert json.loads(capsys.readouterr().out)['visible'] is True


def test_raycast(tmp_path, capsys):
    problem = {
        'dim': 2,
        'body': {'tag': 'polytope', 'vertices': [[0, 0], [1, 0], [1, 1], [0, 1]]},
        'query': {'raycast': {'from': [2, 0.5], 'toward': [0, 0.5]}},
    }
    assert run(['raycast', '--input', _write(tmp_path, 'ray.json', problem)]) == 0
    assert json.loads(capsys.readouterr().out)['point'] == pytest.approx([1.0, 0.5], abs=1e-8)


def test_separate_square(golden_dir, capsys):
    assert run(['separate', '--input', str(golden_dir / 'square_separate.json')]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result['argmax'] == 'y'
    assert result['gap'] == pytest.approx(1.0, abs=1e-9)


def test_separate_needs_a_polytope(tmp_path):
    problem = {
        'dim': 2,
        'body': {'tag': 'ball', 'center': [0, 0], 'radius': 1},
        'query': {'separate': {'x': [3, 0], 'y': [2, 0]}},
    }
    assert run(['separate', '--input', _write(tmp_path, 'ball.json', problem)]) == 1


def test_sample_writes_csv(golden_dir, tmp_path):
    out = tmp_path / 'samples.csv'
    assert run(['sample', '--input', str(golden_dir / 'disk_cone_sample.json'), '--output', str(out)]) == 0
    lines = out.read_text(encoding='utf-8').splitlines()
    assert lines[0] == 'index,coord_0,coord_1,coord_2,lambda_star'
    assert len(lines) == 9
    for index, line in enumerate(lines[1:]):
        fields = line.split(',')
        assert int(fields[0]) == index
        assert float(fields[1]) >= 1.0 - 1e-8
        assert float(fields[4]) <= 1e-7


def test_sample_is_reproducible(golden_dir, tmp_path):
    outputs = []
    for name in ('a.csv', 'b.csv'):
        out = tmp_path / name
        assert run(['sample', '--input', str(golden_dir / 'disk_cone_sample.json'), '--output', str(out)]) == 0
        outputs.append(out.read_text(encoding='utf-8'))
    assert outputs[0] == outputs[1]


@pytest.mark.parametrize("name", ['malformed.json', 'visible_dim_mismatch.json'])
def test_bad_problem_files_exit_one(golden_dir, name):
    command = 'project' if name == 'malformed.json' else 'visible'
    assert run([command, '--input', str(golden_dir / name)]) == 1


def test_missing_problem_file_exits_one(tmp_path):
    assert run(['project', '--input', str(tmp_path / 'nope.json')]) == 1


def test_query_kind_must_match_the_command(golden_dir):
    assert run(['visible', '--input', str(golden_dir / 'tri.json')]) == 1
    with pytest.raises(ProblemFormatError):
        VisiconeRunner().solve('visible', str(golden_dir / 'tri.json'))


def test_candidate_outside_the_body_exits_one(tmp_path):
    problem = {
        'dim': 2,
        'body': {'tag': 'polytope', 'vertices': [[0, 0], [1, 0], [1, 1], [0, 1]]},
        'query': {'visible': {'from': [2, 0.5], 'candidate': [3, 0.5]}},
    }
    assert run(['visible', '--input', _write(tmp_path, 'outside.json', problem)]) == 1


def test_nonpositive_tolerance_exits_one(golden_dir):
    assert run(['project', '--input', str(golden_dir / 'tri.json'), '--tol', '0']) == 1


def test_check_example24(capsys):
    assert run(['check-example24']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines
    assert all(line.startswith('PASS ') for line in lines)


def test_verify_selected_suites(capsys):
    code = run(['verify', '--instances', '2', '--suite', 'projection-matches-oracle',
                '--suite', 'non-affine-witnesses'])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith('[PASS] projection-matches-oracle')
    assert lines[1].startswith('[PASS] non-affine-witnesses')


def test_verify_unknown_suite_exits_one():
    assert run(['verify', '--suite', 'no-such-suite']) == 1


def test_verify_rejects_bad_worker_count():
    assert run(['verify', '--workers', '0']) == 1


def test_main_exits_with_the_run_code(golden_dir):
    with pytest.raises(SystemExit) as info:
        main(['project', '--input', str(golden_dir / 'tri.json')])
    assert info.value.code == 0


def test_parser_requires_a_command():
    with pytest.raises(InputError):
        build_parser().parse_args([])


@pytest.mark.parametrize("argv", [
    [],
    ['project'],
    ['no-such-command'],
    ['visible', '--input', 'x.json', '--tol', 'tiny'],
])
def test_malformed_invocations_exit_one(argv):
    assert run(argv) == 1


def test_common_flags_before_the_command(capsys):
    assert run(['--tol', '1e-9', 'check-example24']) == 0
    assert all(line.startswith('PASS ') for line in capsys.readouterr().out.splitlines())


def test_common_flags_on_either_side_of_the_command():
    args = build_parser().parse_args(['--seed', '7', 'verify', '--vis-tol', '0.5'])
    assert args.seed == 7
    assert args.vis_tol == 0.5
    assert args.verbose is False
    args = build_parser().parse_args(['verify'])
    assert args.seed == CLI_DEFAULTS['seed']
    assert args.output is None


def test_verbose_flag_enables_debug(golden_dir):
    assert run(['project', '--input', str(golden_dir / 'tri.json'), '-v']) == 0
    assert logging.getLogger().level == logging.DEBUG
