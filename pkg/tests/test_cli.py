import json
from fractions import Fraction as F

import pytest
from click.testing import CliRunner

from app import cli
from commands import apply_overrides, format_csv, format_intervals, parse_spec, read_intervals, render_svg
from errors import InputError, SpecSyntaxError, SpecValidationError
from models import ExplicitConstruction, Interval, IntervalUnion

MIDDLE_THIRD_MAPS = [{'slope': '1/3', 'offset': '-2/3'}, {'slope': '1/3', 'offset': '2/3'}]


def job_text(**fields):
    return json.dumps(fields)


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, tmp_path, command, *flags, **fields):
    spec = tmp_path / 'job.json'
    spec.write_text(job_text(**fields))
    out = tmp_path / 'out'
    result = runner.invoke(cli, [command, '--spec', str(spec), '--out', str(out), *flags])
    report = json.loads((out / 'report.json').read_text()) if (out / 'report.json').exists() else None
    return result, out, report


class TestParseSpec:
    def test_rational_strings_are_exact(self):
        job = parse_spec(job_text(command='second-gen', maps=MIDDLE_THIRD_MAPS, alpha='9/20'))
        assert job.alpha == F(9, 20)
        assert job.maps[0].slope == F(1, 3)
        assert job.first_gen is job.maps

    def test_alpha_out_of_range(self):
        with pytest.raises(SpecValidationError) as info:
            parse_spec(job_text(command='second-gen', maps=MIDDLE_THIRD_MAPS, alpha=1.5))
        assert info.value.field == 'alpha'

    def test_one_map_is_not_an_ifs(self):
        with pytest.raises(SpecValidationError) as info:
            parse_spec(job_text(command='attractor', maps=MIDDLE_THIRD_MAPS[:1]))
        assert info.value.field == 'maps'

    def test_map_errors_name_the_entry(self):
        maps = [{'slope': '1/3', 'offset': '-2/3'}, {'slope': 2, 'offset': 0}]
        with pytest.raises(SpecValidationError) as info:
            parse_spec(job_text(command='attractor', maps=maps))
        assert info.value.field == 'maps[1]'

    def test_syntax_error_position(self):
        with pytest.raises(SpecSyntaxError) as info:
            parse_spec('{"command": "gaps",\n "sets": [}')
        assert info.value.line == 2
        assert info.value.column > 1

    def test_unknown_command(self):
        with pytest.raises(SpecValidationError):
            parse_spec(job_text(command='minkowski'))

    def test_single_summand_is_repeated(self):
        job = parse_spec(job_text(command='sum-check', sets=[{'kind': 'middle-third'}], summands=3))
        assert len(job.sets) == 3

    def test_explicit_table(self):
        table = {'': ['0', '1'], '0': ['0', '1/4'], '1': ['1/2', '1']}
        job = parse_spec(job_text(command='gaps', sets=[{'kind': 'explicit', 'table': table}]))
        assert isinstance(job.sets[0], ExplicitConstruction)
        assert job.sets[0].depth_limit == 1

    def test_interval_ifs_is_not_a_construction(self):
        maps = [{'slope': '1/2', 'offset': 0}, {'slope': '1/2', 'offset': '1/2'}]
        with pytest.raises(SpecValidationError) as info:
            parse_spec(job_text(command='gaps', sets=[{'kind': 'ifs', 'maps': maps}]))
        assert info.value.field == 'sets[0]'

    def test_overrides(self):
        job = parse_spec(job_text(command='second-gen', maps=MIDDLE_THIRD_MAPS, alpha='9/20'))
        assert apply_overrides(job, alpha='1/3').alpha == F(1, 3)
        assert isinstance(apply_overrides(job, alpha='0.45').alpha, float)
        assert apply_overrides(job, depth=4, svg=True).svg
        with pytest.raises(SpecValidationError):
            apply_overrides(job, alpha='2')


class TestArtifacts:
    def test_interval_text_round_trip(self):
        union = IntervalUnion([Interval(F(-1), F(-1, 3)), Interval(F(1, 3), F(1))])
        text = format_intervals(union)
        assert text == '[-1, -1/3]\n[1/3, 1]\n'
        assert read_intervals(text) == union

    def test_floats_are_read_as_floats(self):
        union = read_intervals('[-1.0, -0.25]\n\n[0.5, 1e0]\n')
        assert union[1] == Interval(0.5, 1.0)
        assert isinstance(union[0].lo, float)

    def test_malformed_line(self):
        with pytest.raises(InputError):
            read_intervals('[0, 1]\n0, 1\n')

    def test_exact_csv(self):
        union = IntervalUnion([Interval(F(-1), F(-1, 3)), Interval(F(1, 3), F(1))])
        assert format_csv(union) == 'lo_num,lo_den,hi_num,hi_den\n-1,1,-1,3\n1,3,1,1\n'

    def test_float_csv(self):
        assert format_csv(IntervalUnion([Interval(0.5, 0.75)])) == 'lo,hi\n0.5,0.75\n'

    def test_svg_lanes(self):
        union = IntervalUnion([Interval(F(0), F(1, 3)), Interval(F(2, 3), F(1))])
        svg = render_svg([('first', union), ('second', union)], Interval(F(0), F(1)), width=420)
        assert svg.startswith('<svg ')
        assert svg.count('<rect ') == 4
        assert '>first</text>' in svg

    def test_svg_needs_a_hull(self):
        with pytest.raises(InputError):
            render_svg([], Interval(F(0), F(0)))


class TestCommandLine:
    def test_second_gen_writes_artifacts(self, runner, tmp_path):
        result, out, report = invoke(runner, tmp_path, 'second-gen', '--svg',
                                     maps=MIDDLE_THIRD_MAPS, alpha='9/20', depth=6, epsilon='1/100')
        assert result.exit_code == 0, result.output
        assert report['status'] == 'success'
        assert report['sandwich'] is True
        assert report['n_epsilon_disjoint'] is True
        assert set(report['artifacts']) == {'intervals.txt', 'intervals.csv', 'plot.svg'}
        union = read_intervals((out / 'intervals.txt').read_text())
        assert union.hull == Interval(F(-1), F(1))
        assert (out / 'intervals.csv').read_text().startswith('lo_num,')

    def test_identical_jobs_write_identical_csv(self, runner, tmp_path):
        outputs = []
        for name in ('first', 'second'):
            folder = tmp_path / name
            folder.mkdir()
            result, out, _ = invoke(runner, folder, 'second-gen', maps=MIDDLE_THIRD_MAPS, alpha='1/10', depth=5)
            assert result.exit_code == 0, result.output
            outputs.append((out / 'intervals.csv').read_bytes())
        assert outputs[0] == outputs[1]

    def test_overlapping_union(self, runner, tmp_path):
        sets = [{'kind': 'middle-third', 'root': [0, 1]},
                {'kind': 'middle-third', 'root': ['1/2', '3/2']}]
        result, _, report = invoke(runner, tmp_path, 'union', sets=sets)
        assert result.exit_code == 2
        assert 'not separated' in result.output
        assert report['type'] == 'OverlapError'

    def test_invalid_job_reports_the_field(self, runner, tmp_path):
        result, _, report = invoke(runner, tmp_path, 'second-gen', maps=MIDDLE_THIRD_MAPS, alpha=1.5)
        assert result.exit_code == 2
        assert report['field'] == 'alpha'

    def test_oracle_compare(self, runner, tmp_path):
        result, _, report = invoke(runner, tmp_path, 'oracle-compare', maps=MIDDLE_THIRD_MAPS,
                                   alpha='9/20', depth=6, grid_step=1e-3, beta_depth=6)
        assert result.exit_code == 0, result.output
        assert 'Hausdorff distance' in result.output
        assert 'PASS' in result.output
        assert report['oracle']['passed'] is True
        assert report['oracle']['hausdorff'] <= 5e-3

    def test_sum_check(self, runner, tmp_path):
        result, _, report = invoke(runner, tmp_path, 'sum-check', sets=[{'kind': 'middle-third'}],
                                   summands=3, grid_step=1e-3)
        assert result.exit_code == 0, result.output
        assert report['certificate']['verdict'] == 'certified-interval'
        assert report['certificate']['interval'] == '[0, 3]'
        assert report['constants']['a_m'] == '1/156'
        assert report['oracle']['gap_free'] is True

    def test_sum_check_of_explicit_tables(self, runner, tmp_path):
        table = {'': ['0', '1'], '0': ['0', '1/3'], '1': ['2/3', '1'],
                 '00': ['0', '1/9'], '01': ['2/9', '1/3'], '10': ['2/3', '7/9'], '11': ['8/9', '1']}
        result, _, report = invoke(runner, tmp_path, 'sum-check', sets=[{'kind': 'explicit', 'table': table}],
                                   summands=3, a='1/3', grid_step=1e-3)
        assert result.exit_code == 0, result.output
        assert report['certificate']['verdict'] == 'certified-interval'
        assert report['certificate']['interval'] == '[0, 3]'

    def test_ulbd_check(self, runner, tmp_path):
        result, _, report = invoke(runner, tmp_path, 'ulbd-check', maps=MIDDLE_THIRD_MAPS, depth=5)
        assert result.exit_code == 0, result.output
        assert report['sets'][0]['certificate']['bound'] == '1/3'
        assert report['ratios_above_floor'] is True

    def test_gaps(self, runner, tmp_path):
        result, out, report = invoke(runner, tmp_path, 'gaps', sets=[{'kind': 'middle-third'}], depth=2)
        assert result.exit_code == 0, result.output
        assert [g['gap'] for g in report['gaps']] == [']1/3, 2/3[', ']1/9, 2/9[', ']7/9, 8/9[']
        assert report['max_gap'] == '1/3'

    def test_plot_always_writes_svg(self, runner, tmp_path):
        result, out, report = invoke(runner, tmp_path, 'plot', maps=MIDDLE_THIRD_MAPS,
                                     alpha='1/10', depth=4)
        assert result.exit_code == 0, result.output
        assert (out / 'plot.svg').exists()

    def test_missing_job_file(self, runner, tmp_path):
        result = runner.invoke(cli, ['gaps', '--spec', str(tmp_path / 'absent.json')])
        assert result.exit_code == 2
